#include <cmath>
#include <cstdlib>
#include <random>

#include "doctest.h"
#include "scd/diffraction.hpp"

using namespace scd;

namespace
{
TilingConfig bcc()
{
    return TilingConfig{TileParams{0.5, 1.0, AngleSpec(RationalPi{1, 2}), 0.5}, ShiftSequence::zero(), {}, false};
}

TilingConfig axis35()
{
    return TilingConfig{TileParams{0.5, 1.0, AngleSpec(RationalCos{3, 5}), 1.0}, ShiftSequence::zero(), {}, false};
}

//! Z^3 inside [-r/2, r/2)^3, built from unrotated square layers.
PointCloud cubic(double r)
{
    TileParams sq{0.5, 1.0, AngleSpec(RationalPi{1, 2}), 1.0};
    std::vector<Layer> layers;
    for (int m = -static_cast<int>(r); m <= static_cast<int>(r); ++m)
        layers.push_back(build_layer(sq, m, Vec2{}, Vec3{}));
    return extract_layer_points(layers, r);
}

//! |A_r(k)|^2 for Z^3 in a cube of N points per side: a product of Dirichlet kernels.
double cubic_intensity(int n, Vec3 k)
{
    double out = 1;
    for (double x : {k.x, k.y, k.z})
    {
        double s = std::sin(pi * x);
        double f = std::fabs(s) < 1e-12 ? 1.0 : std::sin(pi * n * x) / (n * s);
        out *= f * f;
    }
    return out;
}

//! Distinct norms of the dual lattice points within cutoff, by brute enumeration.
std::vector<double> dual_norms(Vec2 a, Vec2 b, double cutoff)
{
    double det = cross(a, b);
    Vec2 da{b.y / det, -b.x / det}, db{-a.y / det, a.x / det};
    std::vector<double> out;
    for (int i = -20; i <= 20; ++i)
        for (int j = -20; j <= 20; ++j)
        {
            double n = norm(static_cast<double>(i) * da + static_cast<double>(j) * db);
            if (n > cutoff)
                continue;
            bool dup = false;
            for (double x : out)
                dup = dup || std::fabs(x - n) < 1e-9;
            if (!dup)
                out.push_back(n);
        }
    std::sort(out.begin(), out.end());
    return out;
}
}  // namespace

TEST_CASE("Fourier-Bohr sum on the cubic lattice matches the Dirichlet kernel")
{
    PointCloud c = cubic(6.0);
    REQUIRE(c.size() == 216);
    CHECK(std::norm(fourier_bohr(c, Vec3{})) == doctest::Approx(1.0));
    CHECK(std::abs(fourier_bohr(c, Vec3{0.5, 0, 0})) < 1e-14);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int t = 0; t < 100; ++t)
    {
        Vec3 k{u(rng), u(rng), u(rng)};
        CHECK(std::norm(fourier_bohr(c, k)) == doctest::Approx(cubic_intensity(6, k)).epsilon(1e-9).scale(1));
    }
}

TEST_CASE("Fourier-Bohr basics")
{
    PointCloud c = extract_points(axis35(), 8.0);
    Complex a0 = fourier_bohr(c, Vec3{});
    CHECK(a0.real() == doctest::Approx(double(c.size()) / 512.0));
    CHECK(std::fabs(a0.imag()) < 1e-15);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int t = 0; t < 20; ++t)
    {
        Vec3 k{u(rng), u(rng), u(rng)};
        Complex p = fourier_bohr(c, k), m = fourier_bohr(c, -1.0 * k);
        CHECK(std::abs(p - std::conj(m)) < 1e-12);
        // translating every point multiplies by a phase
        PointCloud s = c;
        Vec3 t3{0.3, -0.7, 0.11};
        for (auto& x : s.points)
            x = x + t3;
        Complex q = fourier_bohr(s, k);
        CHECK(std::abs(q - p * std::polar(1.0, -2 * pi * dot(k, t3))) < 1e-11);
    }
    PointCloud empty;
    empty.r = 3;
    CHECK(fourier_bohr(empty, Vec3{1, 2, 3}) == Complex{});
    PointCloud no_box = c;
    no_box.r = 0;
    CHECK_THROWS(fourier_bohr(no_box, Vec3{}));
}

TEST_CASE("slice kernel equals the direct sum")
{
    PointCloud c = extract_points(axis35(), 6.0);
    double k3 = 0.37, x0 = -1.1, y0 = 0.4, h = 0.13;
    std::size_t nx = 7, ny = 9;
    auto grid = slice_intensity(c, k3, x0, y0, h, nx, ny);
    REQUIRE(grid.size() == nx * ny);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j)
        {
            Vec3 k{x0 + double(i) * h, y0 + double(j) * h, k3};
            CHECK(grid[i * ny + j] == doctest::Approx(std::norm(fourier_bohr(c, k))).epsilon(1e-10).scale(1));
        }
}

TEST_CASE("results do not depend on the thread count")
{
    PointCloud c = extract_points(axis35(), 8.0);
    std::vector<Vec3> ks;
    for (int i = 0; i < 37; ++i)
        ks.push_back(Vec3{0.1 * i, 0.05 * i, 1.0 - 0.03 * i});
    char const* old = std::getenv("SCD_THREADS");
    std::string saved = old ? old : "";
    setenv("SCD_THREADS", "1", 1);
    CHECK(thread_count() == 1);
    auto one = intensity_map(c, ks);
    auto g1 = slice_intensity(c, 0.0, -1, -1, 0.1, 21, 21);
    setenv("SCD_THREADS", "3", 1);
    CHECK(thread_count() == 3);
    auto three = intensity_map(c, ks);
    auto g3 = slice_intensity(c, 0.0, -1, -1, 0.1, 21, 21);
    if (old)
        setenv("SCD_THREADS", saved.c_str(), 1);
    else
        unsetenv("SCD_THREADS");
    REQUIRE(one.size() == three.size());
    for (std::size_t i = 0; i < one.size(); ++i)
        CHECK(one[i].intensity == three[i].intensity);
    CHECK(g1 == g3);
}

TEST_CASE("autocorrelation histogram")
{
    PointCloud c = cubic(6.0);
    auto h = autocorr_histogram(c, 1.5);
    CHECK(h.weight_at(Vec3{}) == doctest::Approx(1.0));
    CHECK(h.weight_at(Vec3{1, 0, 0}) == doctest::Approx(5.0 * 36 / 216));
    CHECK(h.weight_at(Vec3{1, 1, 0}) == doctest::Approx(25.0 * 6 / 216));
    CHECK(h.weight_at(Vec3{0.5, 0, 0}) == 0.0);
    for (auto const& [x, w] : h.bins)
        CHECK(h.weight_at(-1.0 * x) == w);
    CHECK_THROWS(autocorr_histogram(c, 4.0));
    CHECK_THROWS(autocorr_histogram(c, 0.0));

    auto b = autocorr_histogram(extract_points(bcc(), 6.0), 1.0);
    CHECK(b.weight_at(Vec3{}) == doctest::Approx(2.0));
    CHECK(b.weight_at(Vec3{0.5, 0.5, 0.5}) > 1.0);
    CHECK(b.weight_at(Vec3{0.5, 0.5, 0}) == 0.0);
}

TEST_CASE("predicted cylinder radii")
{
    auto rb = predicted_support(bcc().params, 2.1);
    std::vector<double> eb{0, 1, std::sqrt(2.0), 2};
    REQUIRE(rb.size() == eb.size());
    for (std::size_t i = 0; i < eb.size(); ++i)
        CHECK(rb[i] == doctest::Approx(eb[i]));

    // (1,0),(3/5,4/5): dual generators have norm 5/4 and their sum (1, 1/2) has norm sqrt(5)/2
    TileParams p = axis35().params;
    auto got = predicted_support(p, 1.3);
    auto oracle = dual_norms(Vec2{1, 0}, Vec2{0.6, 0.8}, 1.3);
    REQUIRE(got.size() == oracle.size());
    for (std::size_t i = 0; i < got.size(); ++i)
        CHECK(got[i] == doctest::Approx(oracle[i]));
    CHECK(got.size() == 3);
    CHECK(got[1] == doctest::Approx(std::sqrt(5.0) / 2));
    CHECK(got[2] == doctest::Approx(1.25));

    auto big = predicted_support(p, 6.0);
    auto big_oracle = dual_norms(Vec2{1, 0}, Vec2{0.6, 0.8}, 6.0);
    CHECK(big.size() == big_oracle.size());
    CHECK_THROWS_AS(predicted_support(p, 0.0), ParameterError);
}

TEST_CASE("lines for commensurate angles")
{
    auto pr = predict(bcc().params, 1.5, 2);
    REQUIRE(pr.lines);
    CHECK(pr.lines->size() == 9);  // Z^2 within 1.5
    CHECK_FALSE(predict(axis35().params, 1.5, 2).lines);
}

TEST_CASE("axis peak weights")
{
    auto peaks = predicted_axis_spectrum(axis35().params, 2);
    REQUIRE(peaks.size() == 5);
    for (auto const& pk : peaks)
    {
        CHECK(pk.position == doctest::Approx(pk.n));
        CHECK(pk.layer_weight == doctest::Approx(25.0 / 16));
        CHECK(pk.estimator_weight == doctest::Approx(25.0 / 16));
    }
    auto b = predicted_axis_spectrum(bcc().params, 1);
    CHECK(b[2].position == doctest::Approx(2.0));
    CHECK(b[2].layer_weight == doctest::Approx(2.0));
    CHECK(b[2].estimator_weight == doctest::Approx(4.0));
}

TEST_CASE("periodic spectrum of the bcc tiling")
{
    auto spec = predicted_periodic_spectrum(bcc(), 2.5, 2.5);
    CHECK(spec.k == 4);
    CHECK(spec.density == doctest::Approx(2.0));
    // the points form the bcc lattice: Bragg peaks on integer k with even coordinate sum, weight 4
    std::size_t strong = 0;
    for (auto const& pk : spec.support)
    {
        if (pk.intensity < 1e-9)
            continue;
        ++strong;
        Vec3 k = pk.k;
        bool integral = std::fabs(k.x - std::round(k.x)) < 1e-9 && std::fabs(k.y - std::round(k.y)) < 1e-9 &&
                        std::fabs(k.z - std::round(k.z)) < 1e-9;
        CHECK(integral);
        CHECK(std::lround(k.x + k.y + k.z) % 2 == 0);
        CHECK(pk.intensity == doctest::Approx(4.0));
        CHECK(spec.on_support(k, 1e-9));
    }
    std::size_t expected = 0;
    for (int i = -2; i <= 2; ++i)
        for (int j = -2; j <= 2; ++j)
            for (int l = -2; l <= 2; ++l)
                if ((i + j + l) % 2 == 0 && std::hypot(i, j) <= 2.5)
                    ++expected;
    CHECK(strong == expected);

    // the finite sum agrees at a peak
    PointCloud c = extract_points(bcc(), 10.0);
    CHECK(std::norm(fourier_bohr(c, Vec3{1, 1, 0})) == doctest::Approx(4.0));
    CHECK_THROWS_AS(predicted_periodic_spectrum(axis35(), 1, 1), ParameterError);
}

TEST_CASE("spectral classification")
{
    CHECK(spectral_classification(bcc()).cylinders == SpectralType::pure_point_discrete);
    auto s = spectral_classification(axis35());
    CHECK(s.axis == SpectralType::pure_point);
    CHECK(s.cylinders == SpectralType::singular_continuous);
    CHECK(s.off_support == SpectralType::null);
    TilingConfig r{TileParams{0.5, 1.0, AngleSpec(RationalCos{1, 3}), 1.0}, ShiftSequence::random(3), {}, false};
    CHECK(spectral_classification(r).cylinders == SpectralType::singular_undetermined);
    r.repetitive = true;
    CHECK(spectral_classification(r).cylinders == SpectralType::singular_continuous);
}

TEST_CASE("shell mass profile")
{
    PointCloud c = extract_points(bcc(), 8.0);
    std::vector<std::pair<double, double>> bins{{0, 0.25}, {0.25, 0.75}, {0.75, 1.25}};
    auto prof = shell_mass_profile(c, 0.0, bins, 0.05);
    REQUIRE(prof.mass.size() == 3);
    CHECK(prof.mass[0] > prof.mass[1]);
    CHECK(prof.mass[2] > prof.mass[1]);
    double s = prof.mass[0] + prof.mass[1] + prof.mass[2];
    CHECK(s <= prof.total * (1 + 1e-12));

    std::vector<std::pair<double, double>> narrow{{0, 0.01}};
    CHECK_THROWS(shell_mass_profile(c, 0.0, narrow, 0.05));
    PointCloud empty;
    empty.r = 4;
    auto z = shell_mass_profile(empty, 0.0, bins, 0.05);
    CHECK(z.mass == std::vector<double>{0, 0, 0});
}

TEST_CASE("rotation equivariance")
{
    PointCloud c = extract_points(axis35(), 6.0);
    std::vector<Vec3> ks{{0.3, 0.1, 0.2}, {1.1, -0.4, 0.9}, {0, 0, 1}};
    CHECK(rotation_equivariance_check(c, Mat3::identity(), ks) == 0.0);
    Mat3 r = rotation_power(axis35().params.angle, 1).matrix;
    CHECK(rotation_equivariance_check(c, r, ks) < 1e-12);
}

TEST_CASE("axis intensity barely depends on the reference point")
{
    auto a = axis35();
    auto b = axis35();
    b.reference_point = Vec3{0.7, 0.2, 0.0};
    double ia = std::norm(fourier_bohr(extract_points(a, 12.0), Vec3{0, 0, 1}));
    double ib = std::norm(fourier_bohr(extract_points(b, 12.0), Vec3{0, 0, 1}));
    CHECK(ia == doctest::Approx(25.0 / 16).epsilon(0.1));
    CHECK(ib == doctest::Approx(ia).epsilon(0.1));
}
