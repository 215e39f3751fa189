//! \file diffraction.hpp
//! \brief Finite-volume Fourier-Bohr sums and analytic diffraction predictors.
#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scd/tiling.hpp"

namespace scd
{
using Complex = std::complex<double>;

//! Neumaier-compensated running sum.
struct CompensatedSum
{
    double sum{0};
    double carry{0};

    void add(double x)
    {
        double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x))
            carry += (sum - t) + x;
        else
            carry += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

//! Worker threads from SCD_THREADS, else the hardware concurrency.
unsigned thread_count();

struct SpectrumSample
{
    Vec3 k;
    Complex amplitude;
    double intensity{0};
    double r{0};
};

//! A_r(k) = r^-3 sum_y exp(-2 pi i k.y), summed in cloud order.
Complex fourier_bohr(PointCloud const& cloud, Vec3 k);

std::vector<SpectrumSample> intensity_map(PointCloud const& cloud, std::span<Vec3 const> ks);

/*!
 * Intensities on the planar grid k = (kx0 + i h, ky0 + j h, k3).
 *
 * Separable in x and y, so it costs one complex multiply-add per point and
 * grid node. Returned row-major with i slow.
 */
std::vector<double> slice_intensity(PointCloud const& cloud, double k3, double kx0, double ky0,
                                    double h, std::size_t nx, std::size_t ny);

//---------------------------------------------------------------------------//
struct AutocorrHistogram
{
    double window{0};
    double r{0};
    //! Quantum of the difference-vector keys.
    double resolution{1e-9};
    std::vector<std::pair<Vec3, double>> bins;  //!< sorted by key

    //! Weight at x, or 0.
    double weight_at(Vec3 x) const;
};

AutocorrHistogram autocorr_histogram(PointCloud const& cloud, double window);

//---------------------------------------------------------------------------//
struct AxisPeak
{
    int n{0};
    double position{0};  //!< n / c3
    double layer_weight{0};  //!< dens2(Gamma) dens3
    double estimator_weight{0};  //!< dens3^2
};

struct Prediction
{
    std::vector<double> cylinder_radii;
    //! Commensurate angles: the points of the union of R^j Gamma* within cutoff.
    std::optional<std::vector<Vec2>> lines;
    std::vector<AxisPeak> axis_peaks;
};

double layer_density(TileParams const& p);  //!< dens2(Gamma) = 1 / (a_len b2)
double point_density(TileParams const& p);  //!< dens3 = 1 / (a_len b2 c3)

//! Reciprocal basis of Gamma (floating point).
std::array<Vec2, 2> dual_basis(TileParams const& p);

std::vector<double> predicted_support(TileParams const& p, double cutoff);
std::vector<Vec2> predicted_lines(TileParams const& p, double cutoff);
std::vector<AxisPeak> predicted_axis_spectrum(TileParams const& p, int nmax);
Prediction predict(TileParams const& p, double cutoff, int nmax);

struct PeriodicPeak
{
    Vec3 k;
    Complex structure_factor;
    double intensity{0};
};

struct PeriodicSpectrum
{
    int k{0};
    std::array<Vec3, 3> periods{};
    std::array<Vec3, 3> reciprocal{};  //!< k . periods[i] = delta
    double density{0};
    //! Every reciprocal-lattice point within the cutoffs, with |S(k)|^2.
    std::vector<PeriodicPeak> support;

    bool on_support(Vec3 k, double tol) const;
};

/*!
 * Exact structure factor of a fully periodic tiling's point set.
 *
 * Peaks sit on the reciprocal lattice of the period lattice; intensity is
 * |S(k)|^2 with S the density-normalized sum over one period cell. Throws
 * ParameterError when the configuration is not fully periodic.
 */
PeriodicSpectrum predicted_periodic_spectrum(TilingConfig const& config, double cutoff_h,
                                             double cutoff_3);

//---------------------------------------------------------------------------//
enum class SpectralType
{
    pure_point,
    singular_continuous,
    singular_undetermined,
    pure_point_discrete,
    null
};

char const* to_string(SpectralType t);

struct SpectralClass
{
    SpectralType axis{SpectralType::pure_point};
    SpectralType cylinders{SpectralType::singular_undetermined};
    SpectralType off_support{SpectralType::null};
    std::string reason;
};

SpectralClass spectral_classification(TilingConfig const& config);

//---------------------------------------------------------------------------//
struct DecayReport
{
    std::vector<double> r;
    std::vector<double> max_intensity;
    double ratio{0};  //!< last max over first max
};

DecayReport no_bragg_probe(std::span<PointCloud const> clouds, std::span<Vec3 const> ks);

struct ShellProfile
{
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<double> mass;
    double total{0};  //!< mass of the whole sampled disk
};

/*!
 * Integrated intensity over annuli at height k3.
 *
 * The plane is sampled on a square grid of spacing step covering the disk of
 * the outermost edge. Bins narrower than the step are rejected.
 */
ShellProfile shell_mass_profile(PointCloud const& cloud, double k3,
                                std::span<std::pair<double, double> const> bins, double step);

//! max |A(R cloud, k) - A(cloud, R^-1 k)|.
double rotation_equivariance_check(PointCloud const& cloud, Mat3 const& rotation,
                                   std::span<Vec3 const> ks);

}  // namespace scd
