#include "scd/lattice.hpp"

#include <algorithm>
#include <cmath>

namespace scd
{
namespace mp = boost::multiprecision;

//---------------------------------------------------------------------------//
Quad Lattice2::det() const
{
    return basis[0][0] * basis[1][1] - basis[1][0] * basis[0][1];
}

Quad Lattice2::density() const
{
    Quad d = det();
    if (d.is_zero())
        throw ParameterError("singular lattice basis");
    return Quad(1) / (d.sign() < 0 ? -d : d);
}

std::array<Vec2, 2> Lattice2::basis_f() const
{
    return {Vec2{basis[0][0].to_double(), basis[0][1].to_double()},
            Vec2{basis[1][0].to_double(), basis[1][1].to_double()}};
}

Lattice2 lattice_from_angle(AngleSpec const& angle, Rational const& a_len)
{
    auto trig = angle.exact_trig();
    if (!trig)
        throw ParameterError("exact lattice needs an angle with rational cosine, got "
                             + angle.describe());
    Quad len(a_len);
    return {{QVec2{len, Quad(0)}, QVec2{len * Quad(trig->cos), len * trig->sin}}};
}

Lattice2 rotated(Lattice2 const& g, ExactRotation2 const& r)
{
    return {{r.apply(g.basis[0]), r.apply(g.basis[1])}};
}

DualLattice2 dual_lattice(Lattice2 const& g)
{
    Quad det = g.det();
    if (det.is_zero())
        throw ParameterError("dual of a singular lattice");
    auto const& b0 = g.basis[0];
    auto const& b1 = g.basis[1];
    // rows of the inverse basis matrix
    return {{QVec2{b1[1] / det, -(b1[0] / det)}, QVec2{-(b0[1] / det), b0[0] / det}}};
}

namespace
{
bool is_integer(Quad const& q)
{
    return q.is_rational() && mp::denominator(q.re()) == 1;
}

ExactRotation2 exact_power(ExactRotation2 base, int m)
{
    if (m < 0)
    {
        base = base.inverse();
        m = -m;
    }
    ExactRotation2 acc;
    while (m)
    {
        if (m & 1)
            acc = acc.compose(base);
        base = base.compose(base);
        m >>= 1;
    }
    return acc;
}
}  // namespace

bool same_lattice(Lattice2 const& x, Lattice2 const& y)
{
    Quad det = x.det();
    if (det.is_zero() || y.det().is_zero())
        return false;
    auto const& b0 = x.basis[0];
    auto const& b1 = x.basis[1];
    // coordinates of y's basis vectors in x's basis
    std::array<std::array<Quad, 2>, 2> c;
    for (int j = 0; j < 2; ++j)
    {
        QVec2 const& v = y.basis[j];
        c[j][0] = (v[0] * b1[1] - v[1] * b1[0]) / det;
        c[j][1] = (b0[0] * v[1] - b0[1] * v[0]) / det;
        if (!is_integer(c[j][0]) || !is_integer(c[j][1]))
            return false;
    }
    Quad cdet = c[0][0] * c[1][1] - c[0][1] * c[1][0];
    return cdet == Quad(1) || cdet == Quad(-1);
}

bool rotated_dual_identity_check(Lattice2 const& g, Rotation3 const& r, int m)
{
    if (!r.exact)
        throw ParameterError("rotated dual identity check needs an exact rotation");
    ExactRotation2 rm = exact_power(*r.exact, m);
    Lattice2 lhs = dual_lattice(rotated(g, rm)).as_lattice();
    Lattice2 rhs = rotated(dual_lattice(g).as_lattice(), rm);
    return same_lattice(lhs, rhs);
}

//---------------------------------------------------------------------------//
// Coincidence equation
//---------------------------------------------------------------------------//
CoincidenceResult coincidence_solve(CoincidenceInput const& input)
{
    if (auto const* irr = std::get_if<IrrationalB1>(&input))
    {
        if (irr->approx < 0 || irr->approx >= 1)
            throw ParameterError("b1 must lie in [0, 1)");
        NoSolutionCertificate cert;
        cert.steps = {
            "second component, divided by b2 > 0: lambda = mu + 2 nu b1",
            "b1 irrational and lambda, mu, nu integers force nu = 0, hence lambda = mu",
            "first component then reads kappa + lambda b1 = mu b1, so kappa = 0",
            "no solution with kappa != 0 != nu exists",
        };
        return cert;
    }
    Rational const& b1 = std::get<Rational>(input);
    if (b1 < 0 || b1 >= 1)
        throw ParameterError("b1 must lie in [0, 1), got " + to_string(b1));

    // Second component: lambda - mu = 2 nu b1 must be an integer, so the
    // smallest positive nu is q / gcd(q, 2p) for b1 = p/q in lowest terms.
    BigInt p = mp::numerator(b1);
    BigInt q = mp::denominator(b1);
    BigInt nu = q / mp::gcd(q, 2 * p);
    // First component with b1^2 - b2^2 = 2 b1^2 - 1:
    // kappa = (mu - lambda) b1 + nu (2 b1^2 - 1) = -2 nu b1^2 + nu (2 b1^2 - 1) = -nu.
    CoincidenceSolution s;
    s.nu = nu;
    s.kappa = -nu;
    s.mu = 0;
    Rational lam = Rational(2) * Rational(nu) * b1;
    s.lambda = mp::numerator(lam);
    return s;
}

bool satisfies_coincidence(CoincidenceSolution const& s, Rational const& b1)
{
    Rational b2sq = Rational(1) - b1 * b1;
    Rational first = Rational(s.kappa) + Rational(s.lambda) * b1 - Rational(s.mu) * b1
                     - Rational(s.nu) * (b1 * b1 - b2sq);
    Rational second = Rational(s.lambda) - Rational(s.mu) - Rational(2) * Rational(s.nu) * b1;
    return first == 0 && second == 0 && s.kappa != 0 && s.nu != 0;
}

//---------------------------------------------------------------------------//
// Intersections
//---------------------------------------------------------------------------//
std::optional<BigInt> Sublattice::index() const
{
    if (rank < 2)
        return std::nullopt;
    BigInt d = det2(coords);
    return d < 0 ? BigInt(-d) : d;
}

Sublattice full_sublattice()
{
    return {IntMatrix::identity(2), 2};
}

namespace
{
QVec2 combine(Lattice2 const& g, BigInt const& i, BigInt const& j)
{
    return Quad(Rational(i)) * g.basis[0] + Quad(Rational(j)) * g.basis[1];
}

std::int64_t radicand_of(std::vector<QVec2> const& vs)
{
    std::int64_t d = 1;
    for (auto const& v : vs)
        for (auto const& q : v)
            if (!q.is_rational())
            {
                if (d != 1 && d != q.radicand())
                    throw std::domain_error("lattices live in different quadratic fields");
                d = q.radicand();
            }
    return d;
}
}  // namespace

Sublattice intersect(Lattice2 const& g, Sublattice const& sub, Lattice2 const& other)
{
    std::size_t k = sub.rank;
    if (k == 0)
        return sub;
    // Columns: generators of sub (ambient coordinates), then -other basis.
    std::vector<QVec2> cols;
    for (std::size_t c = 0; c < k; ++c)
        cols.push_back(combine(g, sub.coords(0, c), sub.coords(1, c)));
    cols.push_back(Quad(-1) * other.basis[0]);
    cols.push_back(Quad(-1) * other.basis[1]);
    radicand_of(cols);

    // Each vector splits into four rational coordinates (x.re, x.im, y.re, y.im).
    std::vector<std::array<Rational, 4>> rat(cols.size());
    BigInt scale = 1;
    for (std::size_t c = 0; c < cols.size(); ++c)
    {
        rat[c] = {cols[c][0].re(), cols[c][0].im(), cols[c][1].re(), cols[c][1].im()};
        for (auto const& e : rat[c])
            scale = mp::lcm(scale, mp::denominator(e));
    }
    IntMatrix m(4, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t r = 0; r < 4; ++r)
            m(r, c) = mp::numerator(rat[c][r] * Rational(scale));

    IntMatrix kernel = integer_kernel(m);
    IntMatrix gens = sub.coords.column_block(0, k) * kernel.row_block(0, k);
    IntMatrix basis = module_basis(gens);
    return {basis, basis.cols()};
}

CslIndex csl_index(AngleSpec const& angle, int m)
{
    Lattice2 g = lattice_from_angle(angle);
    Rotation3 r = rotation_power(angle, m);
    Sublattice s = intersect(g, full_sublattice(), rotated(g, *r.exact));
    if (auto idx = s.index())
        return {true, *idx};
    return {false, 0};
}

ShortVector shortest_vector(Lattice2 const& g, Sublattice const& sub)
{
    if (sub.rank < 2)
        throw ParameterError("shortest vector needs a rank-2 sublattice");
    std::array<BigInt, 2> cu{sub.coords(0, 0), sub.coords(1, 0)};
    std::array<BigInt, 2> cv{sub.coords(0, 1), sub.coords(1, 1)};
    QVec2 u = combine(g, cu[0], cu[1]);
    QVec2 v = combine(g, cv[0], cv[1]);
    for (int guard = 0; guard < 10000; ++guard)
    {
        if (dot(v, v) < dot(u, u))
        {
            std::swap(u, v);
            std::swap(cu, cv);
        }
        BigInt mu = round_nearest(dot(u, v) / dot(u, u));
        if (mu == 0)
            break;
        v = v - Quad(Rational(mu)) * u;
        cv[0] -= mu * cu[0];
        cv[1] -= mu * cu[1];
    }
    ShortVector out;
    out.coords = cu;
    out.vector = u;
    out.norm_squared = dot(u, u);
    out.norm = std::sqrt(out.norm_squared.to_double());
    return out;
}

//---------------------------------------------------------------------------//
namespace
{
AperiodicityCertificate exact_certificate(AngleSpec const& angle, int max_power, double radius,
                                          double a_len)
{
    AperiodicityCertificate cert;
    cert.exact = true;
    Lattice2 g = lattice_from_angle(angle);
    Sublattice s = full_sublattice();
    cert.index_chain.push_back(BigInt(1));
    for (int m = 1; m <= max_power; ++m)
    {
        Rotation3 r = rotation_power(angle, m);
        s = intersect(g, s, rotated(g, *r.exact));
        cert.index_chain.push_back(s.index());
    }
    bool increasing = true;
    for (std::size_t i = 1; i < cert.index_chain.size(); ++i)
    {
        auto const& prev = cert.index_chain[i - 1];
        auto const& cur = cert.index_chain[i];
        if (!prev)
            increasing = false;
        else if (cur && *cur <= *prev)
            increasing = false;
    }
    cert.chain_strictly_increasing = increasing;
    if (s.rank == 2)
    {
        cert.shortest = shortest_vector(g, s);
        cert.common_vector_within_radius = cert.shortest->norm * a_len <= radius;
    }
    else if (s.rank == 1)
    {
        // a rank-1 intersection still yields a common direction
        ShortVector sv;
        sv.coords = {s.coords(0, 0), s.coords(1, 0)};
        sv.vector = combine(g, sv.coords[0], sv.coords[1]);
        sv.norm_squared = dot(sv.vector, sv.vector);
        sv.norm = std::sqrt(sv.norm_squared.to_double());
        cert.shortest = sv;
        cert.common_vector_within_radius = sv.norm * a_len <= radius;
    }
    return cert;
}

AperiodicityCertificate empirical_certificate(AngleSpec const& angle, int max_power,
                                              double radius, double a_len)
{
    AperiodicityCertificate cert;
    cert.exact = false;
    cert.tolerance = 1e-9;
    Vec2 a{a_len, 0};
    Vec2 b{a_len * angle.cos(), a_len * angle.sin()};
    double det = cross(a, b);

    struct Frame
    {
        Vec2 p, q;
        double det;
    };
    std::vector<Frame> frames;
    for (int m = 1; m <= max_power; ++m)
    {
        Rotation3 r = rotation_power(angle, m);
        Vec2 p = r.apply(a), q = r.apply(b);
        frames.push_back({p, q, cross(p, q)});
    }
    // |i a + j b| <= radius bounds |j| <= radius / b2 and |i| <= (radius + |j b1|) / a
    long jmax = static_cast<long>(std::ceil(radius * a_len / det));
    for (long j = -jmax; j <= jmax; ++j)
    {
        double xshift = static_cast<double>(j) * b.x;
        long imin = static_cast<long>(std::floor((-radius - xshift) / a_len));
        long imax = static_cast<long>(std::ceil((radius - xshift) / a_len));
        for (long i = imin; i <= imax; ++i)
        {
            if (i == 0 && j == 0)
                continue;
            Vec2 x = static_cast<double>(i) * a + static_cast<double>(j) * b;
            if (norm(x) > radius)
                continue;
            ++cert.points_checked;
            bool common = true;
            for (auto const& f : frames)
            {
                double s = std::round(cross(x, f.q) / f.det);
                double t = std::round(cross(f.p, x) / f.det);
                Vec2 resid = x - (s * f.p + t * f.q);
                if (norm(resid) > cert.tolerance)
                {
                    common = false;
                    break;
                }
            }
            if (common)
                cert.near_common.push_back(x);
        }
    }
    cert.common_vector_within_radius = !cert.near_common.empty();
    return cert;
}
}  // namespace

AperiodicityCertificate aperiodicity_certificate(AngleSpec const& angle, int max_power,
                                                 double radius, double a_len)
{
    if (max_power < 1)
        throw ParameterError("aperiodicity certificate needs M >= 1");
    AperiodicityCertificate cert = angle.exact_trig()
                                       ? exact_certificate(angle, max_power, radius, a_len)
                                       : empirical_certificate(angle, max_power, radius, a_len);
    cert.angle = angle.describe();
    cert.max_power = max_power;
    cert.radius = radius;
    cert.a_len = a_len;
    return cert;
}

}  // namespace scd
