//! \file geometry.hpp
//! \brief The biprism prototile, its angle specification, and stacking rotations.
#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "scd/exact.hpp"
#include "scd/vec.hpp"

namespace scd
{
//! Thrown when a parameter set violates a documented invariant.
class ParameterError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

//---------------------------------------------------------------------------//
// ANGLES
//---------------------------------------------------------------------------//
//! phi = arccos(p/q), 0 <= p < q, gcd(p, q) = 1.
struct RationalCos
{
    std::int64_t p{0};
    std::int64_t q{1};
};

//! phi = (num/den) * pi with 0 < num/den <= 1/2.
struct RationalPi
{
    std::int64_t num{1};
    std::int64_t den{2};
};

//! Any phi in (0, pi/2], declared incommensurate with pi.
struct GenericAngle
{
    double phi{1.0};
};

//! cos and sin of an angle in exact arithmetic; sin lies in Q(sqrt d).
struct ExactTrig
{
    Rational cos;
    Quad sin;
};

/*!
 * Stacking angle between consecutive layers.
 *
 * The three representations keep commensurability a declared property:
 * RationalPi is always commensurate, GenericAngle never is, and RationalCos
 * is commensurate only for cos phi in {0, 1/2}.
 */
class AngleSpec
{
  public:
    using Variant = std::variant<RationalCos, RationalPi, GenericAngle>;

    AngleSpec() : AngleSpec(RationalPi{1, 2}) {}
    AngleSpec(RationalCos v);  // NOLINT
    AngleSpec(RationalPi v);  // NOLINT
    AngleSpec(GenericAngle v);  // NOLINT

    Variant const& value() const { return value_; }
    double radians() const;
    double cos() const;
    double sin() const;

    //! Exact cos/sin when cos phi is rational (quarter turn, pi/3, arccos(p/q)).
    std::optional<ExactTrig> exact_trig() const;
    //! Rational cos phi when known exactly.
    std::optional<Rational> rational_cos() const;

    bool is_commensurate() const;
    //! Smallest k >= 1 with R^k = id, when commensurate.
    std::optional<int> rotation_order() const;

    std::string describe() const;

  private:
    Variant value_;
};

//---------------------------------------------------------------------------//
// TILE
//---------------------------------------------------------------------------//
struct TileParams
{
    double lambda{0.5};
    double a_len{1.0};
    AngleSpec angle{};
    double c3{0.5};

    double b1() const { return a_len * angle.cos(); }
    double b2() const { return a_len * angle.sin(); }

    Vec3 a() const { return {a_len, 0, 0}; }
    Vec3 b() const { return {b1(), b2(), 0}; }
    Vec3 c() const { return lambda * b() + Vec3{0, 0, c3}; }
    Vec3 d() const { return lambda * a() - Vec3{0, 0, c3}; }

    //! Throws ParameterError naming the violated invariant.
    void validate() const;
};

//! Oriented plane n.x <= offset bounding the tile.
struct HalfSpace
{
    Vec3 normal;  //!< outward, unit length
    double offset;
};

/*!
 * Convex biprism conv(0, a, b, a+b, c, a+c, d, b+d).
 *
 * Vertex order is fixed: 0, a, b, a+b, c, a+c, d, b+d. The rhomb
 * {0, a, b, a+b} is the interior gluing facet of the two prisms and is not a
 * boundary face.
 */
struct TileMesh
{
    TileParams params;
    std::array<Vec3, 8> vertices;
    //! Boundary faces as vertex-index polygons, counterclockwise from outside.
    std::vector<std::vector<int>> faces;
    //! Fan triangulation of faces, counterclockwise from outside.
    std::vector<std::array<int, 3>> triangles;
    std::vector<HalfSpace> halfspaces;

    Vec3 centroid() const;
    //! Closed membership with absolute tolerance.
    bool contains(Vec3 p, double tol = 1e-12) const;
    //! Strict interior membership: at least tol inside every face.
    bool contains_interior(Vec3 p, double tol = 1e-12) const;
};

TileMesh build_tile(TileParams const& params);

//! a_len * b2 * c3.
double tile_volume(TileMesh const& mesh);

//! Divergence-theorem volume of the triangulated boundary.
double mesh_volume(TileMesh const& mesh);

//! Check each vertex is extreme and each face supports the hull.
bool is_convex_with_extreme_vertices(TileMesh const& mesh, double rel_tol = 1e-12);

//---------------------------------------------------------------------------//
// ROTATIONS
//---------------------------------------------------------------------------//
//! Planar block [[c, s], [-s, c]] in exact arithmetic.
struct ExactRotation2
{
    Quad c{1};
    Quad s{0};

    QVec2 apply(QVec2 const& v) const { return {c * v[0] + s * v[1], -s * v[0] + c * v[1]}; }
    ExactRotation2 compose(ExactRotation2 const& o) const;
    ExactRotation2 inverse() const { return {c, -s}; }
    bool is_identity() const { return c == Quad(1) && s.is_zero(); }
};

/*!
 * Rotation about the e3 axis by -m*phi.
 *
 * The floating matrix is always present; the exact planar block is filled in
 * whenever the angle has exact trigonometric values.
 */
struct Rotation3
{
    Mat3 matrix = Mat3::identity();
    std::optional<ExactRotation2> exact;
    int power{0};

    Vec3 operator*(Vec3 v) const { return matrix * v; }
    Vec2 apply(Vec2 v) const { return (matrix * Vec3{v, 0}).xy(); }
};

Rotation3 rotation_power(AngleSpec const& angle, int m);

}  // namespace scd
