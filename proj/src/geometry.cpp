#include "scd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace scd
{
//---------------------------------------------------------------------------//
// AngleSpec
//---------------------------------------------------------------------------//
AngleSpec::AngleSpec(RationalCos v)
{
    if (v.q < 1 || v.p < 0 || v.p >= v.q)
        throw ParameterError("RationalCos needs 0 <= p < q");
    if (std::gcd(v.p, v.q) != 1)
        throw ParameterError("RationalCos needs gcd(p, q) = 1");
    value_ = v;
}

AngleSpec::AngleSpec(RationalPi v)
{
    if (v.den < 1 || v.num < 1)
        throw ParameterError("RationalPi needs positive num and den");
    std::int64_t g = std::gcd(v.num, v.den);
    v.num /= g;
    v.den /= g;
    if (2 * v.num > v.den)
        throw ParameterError("RationalPi needs num/den <= 1/2");
    value_ = v;
}

AngleSpec::AngleSpec(GenericAngle v)
{
    if (!(v.phi > 0) || v.phi > pi / 2 + 1e-15)
        throw ParameterError("generic angle must lie in (0, pi/2]");
    value_ = v;
}

double AngleSpec::radians() const
{
    return std::visit(
        [](auto const& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, RationalCos>)
                return std::acos(static_cast<double>(v.p) / static_cast<double>(v.q));
            else if constexpr (std::is_same_v<T, RationalPi>)
                return pi * static_cast<double>(v.num) / static_cast<double>(v.den);
            else
                return v.phi;
        },
        value_);
}

double AngleSpec::cos() const
{
    if (auto t = exact_trig())
        return to_double(t->cos);
    return std::cos(radians());
}

double AngleSpec::sin() const
{
    if (auto t = exact_trig())
        return t->sin.to_double();
    return std::sin(radians());
}

std::optional<ExactTrig> AngleSpec::exact_trig() const
{
    std::optional<std::pair<std::int64_t, std::int64_t>> pq;
    if (auto const* rc = std::get_if<RationalCos>(&value_))
        pq = {rc->p, rc->q};
    else if (auto const* rp = std::get_if<RationalPi>(&value_))
    {
        if (rp->num == 1 && rp->den == 2)
            pq = {0, 1};
        else if (rp->num == 1 && rp->den == 3)
            pq = {1, 2};
    }
    if (!pq)
        return std::nullopt;
    auto [p, q] = *pq;
    auto [s, d] = squarefree_split(q * q - p * p);
    ExactTrig t;
    t.cos = make_rational(p, q);
    t.sin = Quad(Rational(0), Rational(s, BigInt(q)), d);
    return t;
}

std::optional<Rational> AngleSpec::rational_cos() const
{
    if (auto t = exact_trig())
        return t->cos;
    return std::nullopt;
}

bool AngleSpec::is_commensurate() const
{
    if (std::holds_alternative<RationalPi>(value_))
        return true;
    if (auto const* rc = std::get_if<RationalCos>(&value_))
        return (rc->p == 0 && rc->q == 1) || (rc->p == 1 && rc->q == 2);
    return false;
}

std::optional<int> AngleSpec::rotation_order() const
{
    if (auto const* rp = std::get_if<RationalPi>(&value_))
        return static_cast<int>(2 * rp->den / std::gcd(2 * rp->den, rp->num));
    if (auto const* rc = std::get_if<RationalCos>(&value_))
    {
        if (rc->p == 0 && rc->q == 1)
            return 4;
        if (rc->p == 1 && rc->q == 2)
            return 6;
    }
    return std::nullopt;
}

std::string AngleSpec::describe() const
{
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&](auto const& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, RationalCos>)
                os << "arccos(" << v.p << "/" << v.q << ")";
            else if constexpr (std::is_same_v<T, RationalPi>)
                os << v.num << "/" << v.den << " pi";
            else
                os << v.phi << " rad";
        },
        value_);
    return os.str();
}

//---------------------------------------------------------------------------//
// Tile
//---------------------------------------------------------------------------//
void TileParams::validate() const
{
    if (!(lambda > 0 && lambda < 1))
        throw ParameterError("lambda must lie in (0, 1), got " + std::to_string(lambda));
    if (!(a_len > 0) || !std::isfinite(a_len))
        throw ParameterError("a_len must be positive");
    if (!(c3 > 0) || !std::isfinite(c3))
        throw ParameterError("c3 must be positive");
    if (!(b2() > 0))
        throw ParameterError("b2 must be positive (degenerate rhomb)");
}

Vec3 TileMesh::centroid() const
{
    Vec3 s;
    for (auto const& v : vertices)
        s += v;
    return (1.0 / 8.0) * s;
}

bool TileMesh::contains(Vec3 p, double tol) const
{
    for (auto const& h : halfspaces)
        if (dot(h.normal, p) > h.offset + tol)
            return false;
    return true;
}

bool TileMesh::contains_interior(Vec3 p, double tol) const
{
    for (auto const& h : halfspaces)
        if (dot(h.normal, p) >= h.offset - tol)
            return false;
    return true;
}

namespace
{
Vec3 newell_normal(std::array<Vec3, 8> const& v, std::vector<int> const& face)
{
    Vec3 n;
    for (std::size_t i = 0; i < face.size(); ++i)
    {
        Vec3 const& cur = v[face[i]];
        Vec3 const& nxt = v[face[(i + 1) % face.size()]];
        n.x += (cur.y - nxt.y) * (cur.z + nxt.z);
        n.y += (cur.z - nxt.z) * (cur.x + nxt.x);
        n.z += (cur.x - nxt.x) * (cur.y + nxt.y);
    }
    return n;
}
}  // namespace

TileMesh build_tile(TileParams const& params)
{
    params.validate();
    TileMesh mesh;
    mesh.params = params;
    Vec3 a = params.a(), b = params.b(), c = params.c(), d = params.d();
    mesh.vertices = {Vec3{}, a, b, a + b, c, a + c, d, b + d};

    // Two triangular end caps and two side quads per prism; the rhomb
    // {0,1,3,2} is shared by both prisms and stays internal.
    mesh.faces = {{0, 2, 4}, {1, 3, 5}, {0, 1, 5, 4}, {2, 3, 5, 4},
                  {0, 1, 6}, {2, 3, 7}, {0, 2, 7, 6}, {1, 3, 7, 6}};

    Vec3 center = mesh.centroid();
    for (auto& face : mesh.faces)
    {
        Vec3 fc;
        for (int i : face)
            fc += mesh.vertices[i];
        fc = (1.0 / static_cast<double>(face.size())) * fc;
        Vec3 n = newell_normal(mesh.vertices, face);
        if (dot(n, fc - center) < 0)
        {
            std::reverse(face.begin(), face.end());
            n = -n;
        }
        n = (1.0 / norm(n)) * n;
        mesh.halfspaces.push_back({n, dot(n, mesh.vertices[face[0]])});
        for (std::size_t i = 1; i + 1 < face.size(); ++i)
            mesh.triangles.push_back({face[0], face[i], face[i + 1]});
    }
    if (!is_convex_with_extreme_vertices(mesh))
        throw ParameterError("tile parameters produce a non-convex biprism");
    return mesh;
}

double tile_volume(TileMesh const& mesh)
{
    return mesh.params.a_len * mesh.params.b2() * mesh.params.c3;
}

double mesh_volume(TileMesh const& mesh)
{
    double v = 0;
    for (auto const& t : mesh.triangles)
        v += dot(mesh.vertices[t[0]], cross(mesh.vertices[t[1]], mesh.vertices[t[2]]));
    return v / 6.0;
}

bool is_convex_with_extreme_vertices(TileMesh const& mesh, double rel_tol)
{
    double scale = 0;
    for (auto const& v : mesh.vertices)
        scale = std::fmax(scale, norm(v));
    double tol = rel_tol * std::fmax(scale, 1.0) * 16;

    std::vector<std::vector<int>> incident(mesh.vertices.size());
    for (std::size_t f = 0; f < mesh.halfspaces.size(); ++f)
    {
        auto const& h = mesh.halfspaces[f];
        for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
        {
            double s = dot(h.normal, mesh.vertices[i]) - h.offset;
            if (s > tol)
                return false;
            if (s > -tol)
                incident[i].push_back(static_cast<int>(f));
        }
        for (int i : mesh.faces[f])
            if (std::fabs(dot(h.normal, mesh.vertices[i]) - h.offset) > tol)
                return false;
    }
    // A vertex is extreme iff the normals of its incident faces span R^3.
    for (auto const& inc : incident)
    {
        bool spans = false;
        for (std::size_t i = 0; i < inc.size() && !spans; ++i)
            for (std::size_t j = i + 1; j < inc.size() && !spans; ++j)
                for (std::size_t k = j + 1; k < inc.size() && !spans; ++k)
                {
                    Vec3 ni = mesh.halfspaces[inc[i]].normal;
                    Vec3 nj = mesh.halfspaces[inc[j]].normal;
                    Vec3 nk = mesh.halfspaces[inc[k]].normal;
                    spans = std::fabs(dot(ni, cross(nj, nk))) > 1e-9;
                }
        if (!spans)
            return false;
    }
    return true;
}

//---------------------------------------------------------------------------//
// Rotations
//---------------------------------------------------------------------------//
ExactRotation2 ExactRotation2::compose(ExactRotation2 const& o) const
{
    // [[c, s], [-s, c]] * [[c', s'], [-s', c']]
    return {c * o.c - s * o.s, c * o.s + s * o.c};
}

Rotation3 rotation_power(AngleSpec const& angle, int m)
{
    Rotation3 r;
    r.power = m;
    if (auto trig = angle.exact_trig())
    {
        ExactRotation2 base{Quad(trig->cos), trig->sin};
        if (m < 0)
            base = base.inverse();
        ExactRotation2 acc;
        unsigned e = static_cast<unsigned>(m < 0 ? -static_cast<long>(m) : m);
        while (e)
        {
            if (e & 1U)
                acc = acc.compose(base);
            base = base.compose(base);
            e >>= 1U;
        }
        r.exact = acc;
        double c = acc.c.to_double(), s = acc.s.to_double();
        r.matrix = Mat3{{{{c, s, 0}, {-s, c, 0}, {0, 0, 1}}}};
        return r;
    }
    double theta = static_cast<double>(m) * angle.radians();
    double c = std::cos(theta), s = std::sin(theta);
    r.matrix = Mat3{{{{c, s, 0}, {-s, c, 0}, {0, 0, 1}}}};
    return r;
}

}  // namespace scd
