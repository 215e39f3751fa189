#include <map>
#include <random>

#include "doctest.h"
#include "scd/geometry.hpp"

using namespace scd;

namespace
{
TileParams bcc_params()
{
    return TileParams{0.5, 1.0, AngleSpec(RationalPi{1, 2}), 0.5};
}

//! Volume as two triangular prisms: (0, b, c) swept by a plus (0, a, d) swept by b.
double prism_volume(TileParams const& p)
{
    Vec3 a = p.a(), b = p.b(), c = p.c(), d = p.d();
    return std::fabs(dot(a, cross(b, c))) / 2 + std::fabs(dot(b, cross(a, d))) / 2;
}

//! Containment from the prism parameterization, independent of the face planes.
bool in_tile(TileParams const& p, Vec3 x, double tol)
{
    auto solve = [](Vec3 u, Vec3 v, Vec3 w, Vec3 rhs) {
        double det = dot(u, cross(v, w));
        return std::array<double, 3>{dot(rhs, cross(v, w)) / det, dot(u, cross(rhs, w)) / det,
                                     dot(u, cross(v, rhs)) / det};
    };
    auto s1 = solve(p.a(), p.b(), p.c(), x);  // x = s a + beta b + gamma c
    bool in1 = s1[0] >= -tol && s1[0] <= 1 + tol && s1[1] >= -tol && s1[2] >= -tol && s1[1] + s1[2] <= 1 + tol;
    auto s2 = solve(p.b(), p.a(), p.d(), x);  // x = t b + alpha a + delta d
    bool in2 = s2[0] >= -tol && s2[0] <= 1 + tol && s2[1] >= -tol && s2[2] >= -tol && s2[1] + s2[2] <= 1 + tol;
    return in1 || in2;
}

TileParams random_params(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.05, 0.95), len(0.3, 3.0), ang(0.05, pi / 2);
    return TileParams{u(rng), len(rng), AngleSpec(GenericAngle{ang(rng)}), len(rng)};
}
}  // namespace

TEST_CASE("angle specifications")
{
    AngleSpec a(RationalCos{3, 5});
    CHECK(a.cos() == doctest::Approx(0.6));
    CHECK(a.sin() == doctest::Approx(0.8));
    CHECK_FALSE(a.is_commensurate());
    CHECK(AngleSpec(RationalPi{1, 2}).rotation_order() == 4);
    CHECK(AngleSpec(RationalPi{1, 3}).rotation_order() == 6);
    CHECK(AngleSpec(RationalPi{2, 10}).rotation_order() == 10);
    CHECK(AngleSpec(RationalCos{1, 2}).rotation_order() == 6);
    CHECK_FALSE(AngleSpec(RationalPi{1, 5}).exact_trig());
    CHECK_THROWS_AS(AngleSpec(RationalCos{2, 4}), ParameterError);
    CHECK_THROWS_AS(AngleSpec(RationalCos{5, 3}), ParameterError);
    CHECK_THROWS_AS(AngleSpec(RationalPi{2, 3}), ParameterError);
    CHECK_THROWS_AS(AngleSpec(GenericAngle{2.0}), ParameterError);
}

TEST_CASE("bcc tile vertices and mesh")
{
    TileMesh m = build_tile(bcc_params());
    std::array<Vec3, 8> expect{Vec3{0, 0, 0}, {1, 0, 0},      {0, 1, 0},         {1, 1, 0},
                               {0, 0.5, 0.5}, {1, 0.5, 0.5}, {0.5, 0, -0.5}, {0.5, 1, -0.5}};
    for (std::size_t i = 0; i < 8; ++i)
        CHECK(norm(m.vertices[i] - expect[i]) < 1e-15);
    CHECK(m.faces.size() == 8);
    CHECK(m.triangles.size() == 12);
    CHECK(tile_volume(m) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(mesh_volume(m) == doctest::Approx(0.5).epsilon(1e-12));

    // closed orientable surface: every directed edge appears once, its reverse once
    std::map<std::pair<int, int>, int> edges;
    for (auto const& f : m.faces)
        for (std::size_t i = 0; i < f.size(); ++i)
            ++edges[{f[i], f[(i + 1) % f.size()]}];
    for (auto const& [e, n] : edges)
    {
        CHECK(n == 1);
        CHECK(edges.count({e.second, e.first}) == 1);
    }
}

TEST_CASE("arccos(3/5) tile volume")
{
    TileParams p{0.5, 1.0, AngleSpec(RationalCos{3, 5}), 1.0};
    TileMesh m = build_tile(p);
    CHECK(tile_volume(m) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(std::fabs(mesh_volume(m) - prism_volume(p)) / prism_volume(p) < 1e-12);
}

TEST_CASE("invalid parameters")
{
    CHECK_THROWS_AS(build_tile(TileParams{0.0, 1.0, AngleSpec(RationalPi{1, 2}), 1.0}), ParameterError);
    CHECK_THROWS_AS(build_tile(TileParams{1.0, 1.0, AngleSpec(RationalPi{1, 2}), 1.0}), ParameterError);
    CHECK_THROWS_AS(build_tile(TileParams{0.5, -1.0, AngleSpec(RationalPi{1, 2}), 1.0}), ParameterError);
    CHECK_THROWS_AS(build_tile(TileParams{0.5, 1.0, AngleSpec(RationalPi{1, 2}), 0.0}), ParameterError);
}

TEST_CASE("random tiles: convex, volume matches prism oracle, containment agrees (property)")
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial)
    {
        TileParams p = random_params(rng);
        TileMesh m = build_tile(p);
        CHECK(is_convex_with_extreme_vertices(m));
        CHECK(std::fabs(mesh_volume(m) - prism_volume(p)) <= 1e-12 * prism_volume(p));
        CHECK(std::fabs(tile_volume(m) - prism_volume(p)) <= 1e-12 * prism_volume(p));

        std::uniform_real_distribution<double> u(-1, 1);
        double scale = 2 * std::fmax(p.a_len, p.c3);
        for (int s = 0; s < 50; ++s)
        {
            Vec3 x{scale * u(rng), scale * u(rng), scale * u(rng)};
            bool strict = m.contains_interior(x, 1e-9);
            bool loose = m.contains(x, 1e-9);
            if (strict)
                CHECK(in_tile(p, x, 1e-7));
            if (!loose)
                CHECK_FALSE(in_tile(p, x, -1e-7));
        }
    }
}

TEST_CASE("rotation R maps b onto a")
{
    for (AngleSpec a : {AngleSpec(RationalCos{3, 5}), AngleSpec(RationalPi{1, 3}), AngleSpec(GenericAngle{1.0})})
    {
        TileParams p{0.5, 2.0, a, 1.0};
        Rotation3 r = rotation_power(a, 1);
        CHECK(norm(r * p.b() - p.a()) < 1e-14);
        CHECK(r.matrix.det() == doctest::Approx(1.0));
    }
}

TEST_CASE("exact rotation powers")
{
    Rotation3 r4 = rotation_power(AngleSpec(RationalPi{1, 2}), 4);
    REQUIRE(r4.exact);
    CHECK(r4.exact->is_identity());
    Rotation3 r6 = rotation_power(AngleSpec(RationalPi{1, 3}), 6);
    REQUIRE(r6.exact);
    CHECK(r6.exact->is_identity());
    Rotation3 back = rotation_power(AngleSpec(RationalCos{3, 5}), -3);
    Rotation3 fwd = rotation_power(AngleSpec(RationalCos{3, 5}), 3);
    CHECK(back.exact->compose(*fwd.exact).is_identity());
    // cos(3 phi) for cos phi = 3/5: 4c^3 - 3c = -117/125
    CHECK(fwd.exact->c == Quad(make_rational(-117, 125)));
}
