#include "scd/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "scd/lattice.hpp"

namespace scd
{
//---------------------------------------------------------------------------//
// ShiftSequence
//---------------------------------------------------------------------------//
ShiftSequence ShiftSequence::zero()
{
    return {};
}

ShiftSequence ShiftSequence::periodic(std::vector<double> pattern)
{
    ShiftSequence s;
    s.kind = Kind::periodic;
    s.slides = std::move(pattern);
    return s;
}

ShiftSequence ShiftSequence::random(std::uint64_t seed, bool danzer)
{
    ShiftSequence s;
    s.kind = Kind::random;
    s.seed = seed;
    s.danzer = danzer;
    return s;
}

ShiftSequence ShiftSequence::explicit_list(std::vector<double> values, int first_layer)
{
    ShiftSequence s;
    s.kind = Kind::explicit_list;
    s.slides = std::move(values);
    s.first_layer = first_layer;
    return s;
}

double ShiftSequence::slide(int m) const
{
    switch (kind)
    {
        case Kind::zero:
            return 0;
        case Kind::periodic: {
            auto n = static_cast<long>(slides.size());
            long i = ((static_cast<long>(m) % n) + n) % n;
            return slides[static_cast<std::size_t>(i)];
        }
        case Kind::random: {
            // Each layer draws from its own seeded stream so any m is reachable.
            std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                              static_cast<std::uint32_t>(m)};
            std::mt19937_64 rng(seq);
            if (danzer)
                return static_cast<double>(std::uniform_int_distribution<int>(0, 2)(rng));
            return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        }
        case Kind::explicit_list: {
            long i = static_cast<long>(m) - first_layer;
            if (i < 0 || i >= static_cast<long>(slides.size()))
                return 0;
            return slides[static_cast<std::size_t>(i)];
        }
    }
    return 0;
}

std::optional<int> ShiftSequence::period() const
{
    if (kind == Kind::zero)
        return 1;
    if (kind != Kind::periodic)
        return std::nullopt;
    int n = static_cast<int>(slides.size());
    for (int p = 1; p <= n; ++p)
    {
        if (n % p != 0)
            continue;
        bool ok = true;
        for (int i = p; i < n && ok; ++i)
            ok = slides[static_cast<std::size_t>(i)] == slides[static_cast<std::size_t>(i - p)];
        if (ok)
            return p;
    }
    return n;
}

void ShiftSequence::validate() const
{
    if (kind == Kind::periodic && slides.empty())
        throw ParameterError("periodic shift sequence needs at least one slide");
    for (double t : slides)
    {
        if (!std::isfinite(t))
            throw ParameterError("shift slides must be finite");
        if (danzer && t != std::round(t))
            throw ParameterError("Danzer-restricted slides must be integers");
    }
}

char const* to_string(ShiftSequence::Kind k)
{
    switch (k)
    {
        case ShiftSequence::Kind::zero:
            return "zero";
        case ShiftSequence::Kind::periodic:
            return "periodic";
        case ShiftSequence::Kind::random:
            return "random";
        case ShiftSequence::Kind::explicit_list:
            return "explicit";
    }
    return "?";
}

//---------------------------------------------------------------------------//
// Config and layers
//---------------------------------------------------------------------------//
Vec3 TilingConfig::z() const
{
    if (reference_point)
        return *reference_point;
    return 0.5 * (params.a() + params.b());
}

void TilingConfig::validate() const
{
    params.validate();
    shifts.validate();
    if (!reference_point)
        return;
    TileMesh mesh = build_tile(params);
    Vec3 p = *reference_point;
    if (mesh.contains_interior(p, 1e-12))
        return;
    // relative interior of the gluing rhomb
    if (std::fabs(p.z) <= 1e-12 * std::fmax(1.0, params.c3))
    {
        double det = params.a_len * params.b2();
        double s = (p.x * params.b2() - p.y * params.b1()) / det;
        double t = (params.a_len * p.y) / det;
        if (s > 0 && s < 1 && t > 0 && t < 1)
            return;
    }
    throw ParameterError("reference point must lie inside the tile or on the gluing rhomb");
}

std::vector<Vec2> layer_shifts(TilingConfig const& config, int m_lo, int m_hi)
{
    if (m_lo > 0 || m_hi < 0)
    {
        // always anchor the recursion at layer 0
        auto all = layer_shifts(config, std::min(m_lo, 0), std::max(m_hi, 0));
        int first = std::min(m_lo, 0);
        return {all.begin() + (m_lo - first), all.begin() + (m_hi - first) + 1};
    }
    TileParams const& p = config.params;
    Vec2 a{p.a_len, 0};
    Vec2 delta = p.lambda * (Vec2{p.b1(), p.b2()} - a);
    auto step = [&](int j) {
        Rotation3 r = rotation_power(p.angle, j);
        return r.apply(delta + config.shifts.slide(j) * a);
    };
    std::vector<Vec2> out(static_cast<std::size_t>(m_hi - m_lo + 1));
    auto at = [&](int m) -> Vec2& { return out[static_cast<std::size_t>(m - m_lo)]; };
    at(0) = {};
    for (int m = 1; m <= m_hi; ++m)
        at(m) = at(m - 1) + step(m - 1);
    for (int m = -1; m >= m_lo; --m)
        at(m) = at(m + 1) - step(m);
    return out;
}

Layer build_layer(TileParams const& params, int m, Vec2 shift, Vec3 z)
{
    Layer l;
    l.m = m;
    l.shift = shift;
    l.rotation = rotation_power(params.angle, m);
    l.basis0 = l.rotation.apply(Vec2{params.a_len, 0});
    l.basis1 = l.rotation.apply(Vec2{params.b1(), params.b2()});
    Vec3 rz = l.rotation * z;
    l.offset = Vec3{shift + rz.xy(), static_cast<double>(m) * params.c3 + z.z};
    return l;
}

std::vector<Layer> build_layers(TilingConfig const& config, int m_lo, int m_hi)
{
    auto shifts = layer_shifts(config, m_lo, m_hi);
    std::vector<Layer> layers;
    Vec3 z = config.z();
    for (int m = m_lo; m <= m_hi; ++m)
        layers.push_back(build_layer(config.params, m, shifts[static_cast<std::size_t>(m - m_lo)], z));
    return layers;
}

//---------------------------------------------------------------------------//
// Point extraction
//---------------------------------------------------------------------------//
void PointCloud::recount()
{
    per_layer_counts.clear();
    for (int m : layer)
    {
        if (per_layer_counts.empty() || per_layer_counts.back().first != m)
            per_layer_counts.emplace_back(m, 0);
        ++per_layer_counts.back().second;
    }
}

namespace
{
double boundary_slack(double half)
{
    return 1e-12 * std::fmax(1.0, half);
}
}  // namespace

PointCloud extract_layer_points(std::span<Layer const> layers, double r)
{
    PointCloud cloud;
    cloud.r = r;
    double h = r / 2;
    double eps = boundary_slack(h);
    // half-open [-h, h): faces at +h belong to the neighbouring cube
    auto inside = [&](double v) { return v >= -h - eps && v < h - eps; };
    for (Layer const& l : layers)
    {
        if (!inside(l.offset.z))
            continue;
        Vec2 o = l.offset.xy();
        Vec2 p = l.basis0, q = l.basis1;
        double det = cross(p, q);
        // lattice coordinates of the square's corners bound the (i, j) range
        double imin = INFINITY, imax = -INFINITY, jmin = INFINITY, jmax = -INFINITY;
        for (double cx : {-h, h})
            for (double cy : {-h, h})
            {
                Vec2 x = Vec2{cx, cy} - o;
                double i = cross(x, q) / det;
                double j = cross(p, x) / det;
                imin = std::fmin(imin, i);
                imax = std::fmax(imax, i);
                jmin = std::fmin(jmin, j);
                jmax = std::fmax(jmax, j);
            }
        for (long i = static_cast<long>(std::floor(imin)) - 1; i <= static_cast<long>(std::ceil(imax)) + 1; ++i)
            for (long j = static_cast<long>(std::floor(jmin)) - 1; j <= static_cast<long>(std::ceil(jmax)) + 1; ++j)
            {
                Vec2 x = o + static_cast<double>(i) * p + static_cast<double>(j) * q;
                if (!inside(x.x) || !inside(x.y))
                    continue;
                cloud.points.push_back(Vec3{x, l.offset.z});
                cloud.layer.push_back(l.m);
            }
    }
    cloud.recount();
    return cloud;
}

PointCloud extract_points(TilingConfig const& config, double r)
{
    config.validate();
    if (!(r > 0))
        throw ParameterError("box size r must be positive");
    double h = r / 2;
    double z3 = config.z().z;
    double c3 = config.params.c3;
    int m_lo = static_cast<int>(std::floor((-h - z3) / c3)) - 1;
    int m_hi = static_cast<int>(std::ceil((h - z3) / c3)) + 1;
    if (m_lo > m_hi)
    {
        PointCloud empty;
        empty.r = r;
        return empty;
    }
    auto layers = build_layers(config, m_lo, m_hi);
    return extract_layer_points(layers, r);
}

//---------------------------------------------------------------------------//
// Packing
//---------------------------------------------------------------------------//
PackingReport validate_packing(TileParams const& params, std::span<Layer const> layers,
                               PackingOptions const& opts)
{
    PackingReport rep;
    if (layers.empty())
        return rep;
    TileMesh tile = build_tile(params);
    double c3 = params.c3;
    double half = opts.half_width > 0 ? opts.half_width : 2 * std::fmax(params.a_len, c3);

    int m_lo = layers.front().m, m_hi = layers.front().m;
    for (auto const& l : layers)
    {
        m_lo = std::min(m_lo, l.m);
        m_hi = std::max(m_hi, l.m);
    }
    double slab_lo = m_lo * c3, slab_hi = m_hi * c3;

    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> u(-half, half);
    Vec2 a{params.a_len, 0}, b{params.b1(), params.b2()};
    double det = cross(a, b);

    for (std::size_t s = 0; s < opts.sample_count; ++s)
    {
        Vec3 x{u(rng), u(rng), u(rng)};
        ++rep.samples;
        int closed = 0, interior = 0;
        for (auto const& l : layers)
        {
            double base = l.m * c3;
            if (x.z < base - c3 - 1e-9 || x.z > base + c3 + 1e-9)
                continue;
            // tile frame: x = m c0 + shift + R^m (gamma + y)
            Vec3 rel = Vec3{x.xy() - l.shift, x.z - base};
            Vec3 local = l.rotation.matrix.transposed() * rel;
            double s0 = cross(local.xy(), b) / det;
            double t0 = cross(a, local.xy()) / det;
            for (long i = static_cast<long>(std::floor(s0)) - 1; i <= static_cast<long>(std::floor(s0)) + 1; ++i)
                for (long j = static_cast<long>(std::floor(t0)) - 1; j <= static_cast<long>(std::floor(t0)) + 1; ++j)
                {
                    Vec2 g = static_cast<double>(i) * a + static_cast<double>(j) * b;
                    Vec3 y{local.xy() - g, local.z};
                    if (tile.contains(y, 1e-9))
                        ++closed;
                    if (tile.contains_interior(y, 1e-9))
                        ++interior;
                }
        }
        bool inside_slab = x.z >= slab_lo && x.z <= slab_hi;
        bool bad = false;
        if (interior > 1)
        {
            ++rep.overlaps;
            bad = true;
        }
        if (closed == 0)
        {
            if (inside_slab)
            {
                ++rep.uncovered;
                bad = true;
            }
            else
                ++rep.out_of_coverage;
        }
        if (bad && rep.violations.size() < 16)
            rep.violations.push_back(x);
    }
    return rep;
}

PackingReport validate_packing(TilingConfig const& config, PackingOptions const& opts)
{
    config.validate();
    double half = opts.half_width > 0 ? opts.half_width
                                      : 2 * std::fmax(config.params.a_len, config.params.c3);
    int reach = static_cast<int>(std::ceil(half / config.params.c3)) + 2;
    auto layers = build_layers(config, -reach, reach);
    PackingOptions o = opts;
    o.half_width = half;
    return validate_packing(config.params, layers, o);
}

//---------------------------------------------------------------------------//
// Symmetries
//---------------------------------------------------------------------------//
char const* to_string(Decision d)
{
    switch (d)
    {
        case Decision::no:
            return "no";
        case Decision::yes:
            return "yes";
        case Decision::undecidable:
            return "undecidable";
    }
    return "?";
}

namespace
{
//! Is v in the lattice Z p + Z q up to tol?
bool in_lattice(Vec2 v, Vec2 p, Vec2 q, double tol)
{
    double det = cross(p, q);
    double s = std::round(cross(v, q) / det);
    double t = std::round(cross(p, v) / det);
    return norm(v - (s * p + t * q)) <= tol;
}

double lattice_tol(TileParams const& p)
{
    return 1e-9 * std::fmax(1.0, p.a_len);
}
}  // namespace

ScrewCheck detect_screw_symmetry(TilingConfig const& config, int m)
{
    ScrewCheck out;
    auto kind = config.shifts.kind;
    if (kind == ShiftSequence::Kind::random || kind == ShiftSequence::Kind::explicit_list)
    {
        out.status = Decision::undecidable;
        return out;
    }
    if (m == 0)
    {
        out.status = Decision::yes;
        return out;
    }
    int period = *config.shifts.period();
    // t_{j+m} == t_j for all j makes every layer pair line up with tau = shift(m).
    bool pattern_shift_invariant = true;
    for (int j = 0; j < period && pattern_shift_invariant; ++j)
        pattern_shift_invariant = config.shifts.slide(j + m) == config.shifts.slide(j);

    int horizon = 64 + std::abs(m);
    auto shifts = layer_shifts(config, -horizon - std::abs(m), horizon + std::abs(m));
    int base = -horizon - std::abs(m);
    auto u = [&](int n) { return shifts[static_cast<std::size_t>(n - base)]; };
    out.translation = u(m) - u(0);
    if (pattern_shift_invariant)
    {
        out.status = Decision::yes;
        return out;
    }
    Rotation3 rm = rotation_power(config.params.angle, m);
    Vec2 a{config.params.a_len, 0}, b{config.params.b1(), config.params.b2()};
    double tol = lattice_tol(config.params);
    out.horizon = horizon;
    for (int n = -horizon; n <= horizon; ++n)
    {
        Vec2 e = u(n + m) - rm.apply(u(n)) - out.translation;
        Rotation3 rn = rotation_power(config.params.angle, n + m);
        if (!in_lattice(e, rn.apply(a), rn.apply(b), tol))
        {
            out.status = Decision::no;
            return out;
        }
    }
    out.status = Decision::yes;
    return out;
}

FullPeriodicity detect_full_periodicity(TilingConfig const& config)
{
    FullPeriodicity out;
    TileParams const& p = config.params;
    auto order = p.angle.rotation_order();
    if (!order)
    {
        out.reason = "incommensurate angle: R has infinite order";
        return out;
    }
    auto period = config.shifts.period();
    if (!period)
    {
        out.reason = "shift sequence is not declared periodic";
        return out;
    }
    if (!p.angle.exact_trig())
    {
        out.reason = "cos(phi) irrational: the rotated layer lattices share no 2D period lattice";
        return out;
    }
    Lattice2 g = lattice_from_angle(p.angle, Rational(1));
    Vec2 a{p.a_len, 0}, b{p.b1(), p.b2()};
    double tol = lattice_tol(p);
    int step = std::lcm(*order, *period);
    for (int k = *order; k <= 64 * step; k += *order)
    {
        int window = 2 * step;
        auto shifts = layer_shifts(config, -window, window + k);
        auto u = [&](int n) { return shifts[static_cast<std::size_t>(n + window)]; };
        Vec2 tau = u(k) - u(0);
        bool ok = true;
        for (int m = -window; m <= window && ok; ++m)
        {
            Rotation3 r = rotation_power(p.angle, m);
            ok = in_lattice(u(m + k) - u(m) - tau, r.apply(a), r.apply(b), tol);
        }
        if (!ok)
            continue;
        // horizontal periods: intersection of R^j Gamma over one rotation cycle
        Sublattice s = full_sublattice();
        for (int j = 1; j < *order; ++j)
            s = intersect(g, s, rotated(g, *rotation_power(p.angle, j).exact));
        if (s.rank < 2)
        {
            out.reason = "rotated layer lattices share no 2D period lattice";
            return out;
        }
        auto coord = [&](std::size_t c) {
            return to_double(Rational(s.coords(0, c))) * a + to_double(Rational(s.coords(1, c))) * b;
        };
        out.periodic = true;
        out.k = k;
        out.periods = {Vec3{coord(0), 0}, Vec3{coord(1), 0},
                       Vec3{tau, static_cast<double>(k) * p.c3}};
        out.reason = "commensurate angle with periodic slides";
        return out;
    }
    out.reason = "slides are not periodic modulo the layer lattices";
    return out;
}

char const* to_string(Repetitivity r)
{
    switch (r)
    {
        case Repetitivity::satisfies_necessary:
            return "satisfies_necessary";
        case Repetitivity::violates:
            return "violates";
        case Repetitivity::ambiguous:
            return "ambiguous";
    }
    return "?";
}

RepetitivityReport repetitivity_condition(AngleSpec const& angle)
{
    RepetitivityReport rep;
    if (auto const* rc = std::get_if<RationalCos>(&angle.value()))
    {
        rep.verdict = Repetitivity::satisfies_necessary;
        rep.cos_pq = {{rc->p, rc->q}};
        return rep;
    }
    if (std::holds_alternative<RationalPi>(angle.value()))
    {
        // Rational multiples of pi in (0, pi/2] have rational cosine only at pi/3 and pi/2.
        if (auto c = angle.rational_cos())
        {
            rep.verdict = Repetitivity::satisfies_necessary;
            rep.cos_pq = {{static_cast<std::int64_t>(boost::multiprecision::numerator(*c)),
                           static_cast<std::int64_t>(boost::multiprecision::denominator(*c))}};
        }
        else
            rep.verdict = Repetitivity::violates;
        return rep;
    }
    // Generic: a rational within 1e-12 with q <= 1000 must be a convergent.
    double x = angle.cos();
    double rem = x;
    std::int64_t h0 = 1, h1 = 0, k0 = 0, k1 = 1;  // convergents h/k
    for (int it = 0; it < 64; ++it)
    {
        double fl = std::floor(rem);
        auto ai = static_cast<std::int64_t>(fl);
        std::int64_t h2 = ai * h0 + h1;
        std::int64_t k2 = ai * k0 + k1;
        if (k2 > 1000)
            break;
        h1 = h0;
        h0 = h2;
        k1 = k0;
        k0 = k2;
        if (std::fabs(x - static_cast<double>(h0) / static_cast<double>(k0)) <= 1e-12)
        {
            rep.verdict = Repetitivity::ambiguous;
            rep.cos_pq = {{h0, k0}};
            return rep;
        }
        double frac = rem - fl;
        if (frac < 1e-300)
            break;
        rem = 1.0 / frac;
    }
    rep.verdict = Repetitivity::violates;
    return rep;
}

}  // namespace scd
