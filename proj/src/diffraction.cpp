#include "scd/diffraction.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <unordered_map>

namespace scd
{
unsigned thread_count()
{
    if (char const* env = std::getenv("SCD_THREADS"))
    {
        char* end = nullptr;
        long n = std::strtol(env, &end, 10);
        if (end != env && n > 0)
            return static_cast<unsigned>(n);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

namespace
{
//! exp(-2 pi i t), with t reduced mod 1 first so large phases stay accurate.
inline Complex unit_phase(double t)
{
    t -= std::nearbyint(t);
    double ang = -2 * pi * t;
    return {std::cos(ang), std::sin(ang)};
}

//! Run body(begin, end) over [0, n) on up to thread_count() threads.
template<class F>
void parallel_for(std::size_t n, F&& body)
{
    unsigned nt = std::min<std::size_t>(thread_count(), std::max<std::size_t>(n, 1));
    if (nt <= 1)
    {
        body(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t chunk = (n + nt - 1) / nt;
    for (unsigned t = 0; t < nt; ++t)
    {
        std::size_t b = t * chunk, e = std::min(n, b + chunk);
        if (b >= e)
            break;
        pool.emplace_back([&body, b, e] { body(b, e); });
    }
    for (auto& th : pool)
        th.join();
}

double volume_norm(PointCloud const& cloud)
{
    if (!(cloud.r > 0))
        throw std::invalid_argument("point cloud has no box size");
    return 1.0 / (cloud.r * cloud.r * cloud.r);
}
}  // namespace

Complex fourier_bohr(PointCloud const& cloud, Vec3 k)
{
    if (cloud.empty())
        return {};
    CompensatedSum re, im;
    for (auto const& y : cloud.points)
    {
        Complex e = unit_phase(dot(k, y));
        re.add(e.real());
        im.add(e.imag());
    }
    double s = volume_norm(cloud);
    return {s * re.value(), s * im.value()};
}

std::vector<SpectrumSample> intensity_map(PointCloud const& cloud, std::span<Vec3 const> ks)
{
    std::vector<SpectrumSample> out(ks.size());
    parallel_for(ks.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i)
        {
            Complex a = fourier_bohr(cloud, ks[i]);
            out[i] = {ks[i], a, std::norm(a), cloud.r};
        }
    });
    return out;
}

std::vector<double> slice_intensity(PointCloud const& cloud, double k3, double kx0, double ky0,
                                    double h, std::size_t nx, std::size_t ny)
{
    std::vector<double> out(nx * ny, 0.0);
    if (cloud.empty() || nx == 0 || ny == 0)
        return out;
    double const scale = volume_norm(cloud);
    std::size_t const n = cloud.size();
    constexpr std::size_t block = 64;

    parallel_for(nx, [&](std::size_t i0, std::size_t i1) {
        std::size_t rows = i1 - i0;
        std::vector<double> xr(rows * block), xi(rows * block);
        std::vector<double> yr(block * ny), yi(block * ny);
        std::vector<double> ar(ny), ai(ny);
        std::vector<CompensatedSum> sr(rows * ny), si(rows * ny);

        for (std::size_t p0 = 0; p0 < n; p0 += block)
        {
            std::size_t bn = std::min(block, n - p0);
            for (std::size_t b = 0; b < bn; ++b)
            {
                Vec3 const& y = cloud.points[p0 + b];
                for (std::size_t r = 0; r < rows; ++r)
                {
                    double kx = kx0 + static_cast<double>(i0 + r) * h;
                    Complex e = unit_phase(kx * y.x + k3 * y.z);
                    xr[r * block + b] = e.real();
                    xi[r * block + b] = e.imag();
                }
                for (std::size_t j = 0; j < ny; ++j)
                {
                    double ky = ky0 + static_cast<double>(j) * h;
                    Complex e = unit_phase(ky * y.y);
                    yr[b * ny + j] = e.real();
                    yi[b * ny + j] = e.imag();
                }
            }
            for (std::size_t r = 0; r < rows; ++r)
            {
                double* __restrict accr = ar.data();
                double* __restrict acci = ai.data();
                std::fill(ar.begin(), ar.end(), 0.0);
                std::fill(ai.begin(), ai.end(), 0.0);
                for (std::size_t b = 0; b < bn; ++b)
                {
                    double pr = xr[r * block + b], pim = xi[r * block + b];
                    double const* __restrict qr = yr.data() + b * ny;
                    double const* __restrict qi = yi.data() + b * ny;
                    for (std::size_t j = 0; j < ny; ++j)
                    {
                        accr[j] += pr * qr[j] - pim * qi[j];
                        acci[j] += pr * qi[j] + pim * qr[j];
                    }
                }
                for (std::size_t j = 0; j < ny; ++j)
                {
                    sr[r * ny + j].add(accr[j]);
                    si[r * ny + j].add(acci[j]);
                }
            }
        }
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t j = 0; j < ny; ++j)
            {
                double re = scale * sr[r * ny + j].value();
                double im = scale * si[r * ny + j].value();
                out[(i0 + r) * ny + j] = re * re + im * im;
            }
    });
    return out;
}

//---------------------------------------------------------------------------//
// Autocorrelation
//---------------------------------------------------------------------------//
namespace
{
using Key = std::array<long long, 3>;

struct KeyHash
{
    std::size_t operator()(Key const& k) const
    {
        std::size_t h = 1469598103934665603ULL;
        for (long long v : k)
            h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ULL;
        return h;
    }
};

Key quantize(Vec3 v, double res)
{
    return {std::llround(v.x / res), std::llround(v.y / res), std::llround(v.z / res)};
}
}  // namespace

double AutocorrHistogram::weight_at(Vec3 x) const
{
    Key k = quantize(x, resolution);
    auto it = std::lower_bound(bins.begin(), bins.end(), k, [&](auto const& bin, Key const& key) {
        return quantize(bin.first, resolution) < key;
    });
    if (it != bins.end() && quantize(it->first, resolution) == k)
        return it->second;
    return 0;
}

AutocorrHistogram autocorr_histogram(PointCloud const& cloud, double window)
{
    if (!(window > 0))
        throw std::invalid_argument("autocorrelation window must be positive");
    if (window > cloud.r / 2)
        throw std::invalid_argument("autocorrelation window exceeds r/2");
    AutocorrHistogram hist;
    hist.window = window;
    hist.r = cloud.r;
    double const res = hist.resolution;

    // cell list with cells of side `window`
    std::map<Key, std::vector<std::size_t>> cells;
    auto cell_of = [&](Vec3 p) {
        return Key{static_cast<long long>(std::floor(p.x / window)),
                   static_cast<long long>(std::floor(p.y / window)),
                   static_cast<long long>(std::floor(p.z / window))};
    };
    for (std::size_t i = 0; i < cloud.size(); ++i)
        cells[cell_of(cloud.points[i])].push_back(i);

    std::unordered_map<Key, std::size_t, KeyHash> counts;
    double w2 = window * window;
    for (auto const& [c, members] : cells)
        for (long long dx = -1; dx <= 1; ++dx)
            for (long long dy = -1; dy <= 1; ++dy)
                for (long long dz = -1; dz <= 1; ++dz)
                {
                    auto it = cells.find(Key{c[0] + dx, c[1] + dy, c[2] + dz});
                    if (it == cells.end())
                        continue;
                    for (std::size_t i : members)
                        for (std::size_t j : it->second)
                        {
                            Vec3 d = cloud.points[i] - cloud.points[j];
                            if (dot(d, d) > w2)
                                continue;
                            ++counts[quantize(d, res)];
                        }
                }

    std::vector<std::pair<Key, std::size_t>> sorted(counts.begin(), counts.end());
    std::sort(sorted.begin(), sorted.end());
    double s = volume_norm(cloud);
    hist.bins.reserve(sorted.size());
    for (auto const& [k, n] : sorted)
        hist.bins.emplace_back(Vec3{k[0] * res, k[1] * res, k[2] * res}, s * static_cast<double>(n));
    return hist;
}

//---------------------------------------------------------------------------//
// Predictors
//---------------------------------------------------------------------------//
double layer_density(TileParams const& p)
{
    return 1.0 / (p.a_len * p.b2());
}

double point_density(TileParams const& p)
{
    return 1.0 / (p.a_len * p.b2() * p.c3);
}

std::array<Vec2, 2> dual_basis(TileParams const& p)
{
    double b1 = p.b1(), b2 = p.b2();
    return {Vec2{1.0 / p.a_len, -b1 / (p.a_len * b2)}, Vec2{0.0, 1.0 / b2}};
}

namespace
{
template<class F>
void for_dual_points(TileParams const& p, double cutoff, F&& f)
{
    auto [u, v] = dual_basis(p);
    // coefficients are x.a and x.b, bounded by cutoff |a| and cutoff |b|
    long ni = static_cast<long>(std::ceil(cutoff * p.a_len)) + 1;
    long nj = static_cast<long>(std::ceil(cutoff * norm(p.b().xy()))) + 1;
    double lim = cutoff * (1 + 1e-12);
    for (long i = -ni; i <= ni; ++i)
        for (long j = -nj; j <= nj; ++j)
        {
            Vec2 x = static_cast<double>(i) * u + static_cast<double>(j) * v;
            if (norm(x) <= lim)
                f(x);
        }
}
}  // namespace

std::vector<double> predicted_support(TileParams const& p, double cutoff)
{
    p.validate();
    if (!(cutoff > 0))
        throw ParameterError("cutoff must be positive");
    std::vector<double> radii;
    for_dual_points(p, cutoff, [&](Vec2 x) { radii.push_back(norm(x)); });
    std::sort(radii.begin(), radii.end());
    std::vector<double> unique;
    for (double r : radii)
        if (unique.empty() || r - unique.back() > 1e-9 * std::fmax(1.0, r))
            unique.push_back(r);
    return unique;
}

std::vector<Vec2> predicted_lines(TileParams const& p, double cutoff)
{
    auto order = p.angle.rotation_order();
    if (!order)
        return {};
    std::vector<Vec2> pts;
    for (int j = 0; j < *order; ++j)
    {
        Rotation3 r = rotation_power(p.angle, j);
        for_dual_points(p, cutoff, [&](Vec2 x) { pts.push_back(r.apply(x)); });
    }
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    std::vector<Vec2> unique;
    for (Vec2 x : pts)
    {
        bool dup = false;
        for (auto it = unique.rbegin(); it != unique.rend() && x.x - it->x <= 1e-9; ++it)
            if (norm(x - *it) <= 1e-9)
            {
                dup = true;
                break;
            }
        if (!dup)
            unique.push_back(x);
    }
    return unique;
}

std::vector<AxisPeak> predicted_axis_spectrum(TileParams const& p, int nmax)
{
    p.validate();
    double d2 = layer_density(p), d3 = point_density(p);
    std::vector<AxisPeak> peaks;
    for (int n = -nmax; n <= nmax; ++n)
        peaks.push_back({n, n / p.c3, d2 * d3, d3 * d3});
    return peaks;
}

Prediction predict(TileParams const& p, double cutoff, int nmax)
{
    Prediction pr;
    pr.cylinder_radii = predicted_support(p, cutoff);
    if (p.angle.rotation_order())
        pr.lines = predicted_lines(p, cutoff);
    pr.axis_peaks = predicted_axis_spectrum(p, nmax);
    return pr;
}

bool PeriodicSpectrum::on_support(Vec3 q, double tol) const
{
    Vec3 snapped;
    for (int i = 0; i < 3; ++i)
        snapped += std::nearbyint(dot(q, periods[i])) * reciprocal[i];
    return norm(q - snapped) <= tol;
}

PeriodicSpectrum predicted_periodic_spectrum(TilingConfig const& config, double cutoff_h,
                                             double cutoff_3)
{
    FullPeriodicity fp = detect_full_periodicity(config);
    if (!fp.periodic)
        throw ParameterError("configuration is not fully periodic: " + fp.reason);
    PeriodicSpectrum spec;
    spec.k = fp.k;
    spec.periods = fp.periods;
    auto const& P = fp.periods;
    double vol = std::fabs(dot(P[0], cross(P[1], P[2])));
    spec.reciprocal = {(1.0 / vol) * cross(P[1], P[2]), (1.0 / vol) * cross(P[2], P[0]),
                       (1.0 / vol) * cross(P[0], P[1])};
    // orientation sign: keep k . P[i] = +1
    for (int i = 0; i < 3; ++i)
        if (dot(spec.reciprocal[i], P[i]) < 0)
            spec.reciprocal[i] = -spec.reciprocal[i];

    TileParams const& p = config.params;
    double det_h = std::fabs(cross(P[0].xy(), P[1].xy()));
    double det_g = p.a_len * p.a_len * p.b2();
    double cosets = det_h / det_g;
    auto layers = build_layers(config, 0, fp.k - 1);
    spec.density = static_cast<double>(fp.k) * cosets / vol;

    std::array<long, 3> lim;
    for (int i = 0; i < 3; ++i)
        lim[static_cast<std::size_t>(i)] =
            static_cast<long>(std::ceil(cutoff_h * norm(P[i].xy()) + cutoff_3 * std::fabs(P[i].z))) + 1;
    for (long n0 = -lim[0]; n0 <= lim[0]; ++n0)
        for (long n1 = -lim[1]; n1 <= lim[1]; ++n1)
            for (long n2 = -lim[2]; n2 <= lim[2]; ++n2)
            {
                Vec3 q = static_cast<double>(n0) * spec.reciprocal[0] +
                         static_cast<double>(n1) * spec.reciprocal[1] +
                         static_cast<double>(n2) * spec.reciprocal[2];
                if (norm(q.xy()) > cutoff_h * (1 + 1e-12) || std::fabs(q.z) > cutoff_3 * (1 + 1e-12))
                    continue;
                CompensatedSum re, im;
                for (auto const& l : layers)
                {
                    double s0 = dot(q.xy(), l.basis0), s1 = dot(q.xy(), l.basis1);
                    // the coset sum vanishes unless q is dual to this layer's lattice
                    if (std::fabs(s0 - std::nearbyint(s0)) > 1e-9 || std::fabs(s1 - std::nearbyint(s1)) > 1e-9)
                        continue;
                    Complex e = unit_phase(dot(q, l.offset));
                    re.add(cosets * e.real());
                    im.add(cosets * e.imag());
                }
                Complex s{re.value() / vol, im.value() / vol};
                spec.support.push_back({q, s, std::norm(s)});
            }
    std::sort(spec.support.begin(), spec.support.end(), [](auto const& a, auto const& b) {
        double na = norm(a.k), nb = norm(b.k);
        if (na != nb)
            return na < nb;
        return std::tie(a.k.x, a.k.y, a.k.z) < std::tie(b.k.x, b.k.y, b.k.z);
    });
    return spec;
}

//---------------------------------------------------------------------------//
// Classification and probes
//---------------------------------------------------------------------------//
char const* to_string(SpectralType t)
{
    switch (t)
    {
        case SpectralType::pure_point:
            return "pure_point";
        case SpectralType::singular_continuous:
            return "singular_continuous";
        case SpectralType::singular_undetermined:
            return "singular_undetermined";
        case SpectralType::pure_point_discrete:
            return "pure_point_discrete";
        case SpectralType::null:
            return "null";
    }
    return "?";
}

SpectralClass spectral_classification(TilingConfig const& config)
{
    SpectralClass sc;
    auto kind = config.shifts.kind;
    bool declared_periodic = kind == ShiftSequence::Kind::zero || kind == ShiftSequence::Kind::periodic;
    if (declared_periodic)
    {
        FullPeriodicity fp = detect_full_periodicity(config);
        if (fp.periodic)
        {
            sc.axis = sc.cylinders = SpectralType::pure_point_discrete;
            sc.reason = "fully periodic, k = " + std::to_string(fp.k);
            return sc;
        }
    }
    sc.axis = SpectralType::pure_point;
    if (config.params.angle.rotation_order())
    {
        sc.reason = "commensurate angle without full periodicity";
        return sc;
    }
    if (declared_periodic)
    {
        for (int m = 1; m <= 16; ++m)
            if (detect_screw_symmetry(config, m).status == Decision::yes)
            {
                sc.cylinders = SpectralType::singular_continuous;
                sc.reason = "incommensurate and screw-invariant for m = " + std::to_string(m);
                return sc;
            }
    }
    if (config.repetitive)
        if (auto const* rc = std::get_if<RationalCos>(&config.params.angle.value()); rc && rc->q % 2 == 1)
        {
            sc.cylinders = SpectralType::singular_continuous;
            sc.reason = "incommensurate, declared repetitive, odd denominator";
            return sc;
        }
    sc.reason = "incommensurate; only the support statement applies";
    return sc;
}

DecayReport no_bragg_probe(std::span<PointCloud const> clouds, std::span<Vec3 const> ks)
{
    DecayReport rep;
    for (auto const& c : clouds)
    {
        double best = 0;
        for (auto const& s : intensity_map(c, ks))
            best = std::fmax(best, s.intensity);
        rep.r.push_back(c.r);
        rep.max_intensity.push_back(best);
    }
    if (!rep.max_intensity.empty() && rep.max_intensity.front() > 0)
        rep.ratio = rep.max_intensity.back() / rep.max_intensity.front();
    return rep;
}

ShellProfile shell_mass_profile(PointCloud const& cloud, double k3,
                                std::span<std::pair<double, double> const> bins, double step)
{
    if (!(step > 0))
        throw std::invalid_argument("grid step must be positive");
    ShellProfile prof;
    double rho = 0;
    for (auto const& [lo, hi] : bins)
    {
        if (!(hi > lo) || lo < 0)
            throw std::invalid_argument("annulus bounds must satisfy 0 <= lo < hi");
        if (hi - lo < step)
            throw std::invalid_argument("annulus narrower than the grid step");
        prof.lo.push_back(lo);
        prof.hi.push_back(hi);
        rho = std::fmax(rho, hi);
    }
    prof.mass.assign(bins.size(), 0.0);
    if (cloud.empty() || bins.empty())
        return prof;

    auto half = static_cast<std::size_t>(std::ceil(rho / step));
    std::size_t n = 2 * half + 1;
    double k0 = -static_cast<double>(half) * step;
    auto grid = slice_intensity(cloud, k3, k0, k0, step, n, n);
    double cell = step * step;
    std::vector<CompensatedSum> acc(bins.size());
    CompensatedSum total;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
        {
            double kr = std::hypot(k0 + static_cast<double>(i) * step, k0 + static_cast<double>(j) * step);
            if (kr > rho)
                continue;
            double m = grid[i * n + j] * cell;
            total.add(m);
            for (std::size_t b = 0; b < bins.size(); ++b)
                if (kr >= prof.lo[b] && kr < prof.hi[b])
                    acc[b].add(m);
        }
    for (std::size_t b = 0; b < bins.size(); ++b)
        prof.mass[b] = acc[b].value();
    prof.total = total.value();
    return prof;
}

double rotation_equivariance_check(PointCloud const& cloud, Mat3 const& rotation,
                                   std::span<Vec3 const> ks)
{
    PointCloud turned = cloud;
    for (auto& y : turned.points)
        y = rotation * y;
    Mat3 inv = rotation.transposed();
    double worst = 0;
    for (Vec3 k : ks)
        worst = std::fmax(worst, std::abs(fourier_bohr(turned, k) - fourier_bohr(cloud, inv * k)));
    return worst;
}

}  // namespace scd
