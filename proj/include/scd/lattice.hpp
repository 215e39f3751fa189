//! \file lattice.hpp
//! \brief Exact planar lattice algebra: duals, rotated copies, coincidences.
#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "scd/exact.hpp"
#include "scd/geometry.hpp"

namespace scd
{
//---------------------------------------------------------------------------//
//! Planar lattice Z*basis[0] + Z*basis[1] with entries in some Q(sqrt d).
struct Lattice2
{
    std::array<QVec2, 2> basis;

    Quad det() const;
    //! Points per unit area, 1/|det|.
    Quad density() const;
    std::array<Vec2, 2> basis_f() const;
};

//! Basis of the reciprocal lattice {y : y.x in Z for all x in the primal}.
struct DualLattice2
{
    std::array<QVec2, 2> basis;

    Lattice2 as_lattice() const { return {basis}; }
};

//! Gamma = Z a + Z b with a = (a_len, 0), b = a_len (cos phi, sin phi).
Lattice2 lattice_from_angle(AngleSpec const& angle, Rational const& a_len = Rational(1));

Lattice2 rotated(Lattice2 const& g, ExactRotation2 const& r);

DualLattice2 dual_lattice(Lattice2 const& g);

//! True when both bases span the same lattice (integer unimodular change).
bool same_lattice(Lattice2 const& x, Lattice2 const& y);

//! Verify (R^m Gamma)^* == R^m Gamma^* exactly. Needs an exact rotation.
bool rotated_dual_identity_check(Lattice2 const& g, Rotation3 const& r, int m);

//---------------------------------------------------------------------------//
// COINCIDENCE EQUATION
//---------------------------------------------------------------------------//
/*!
 * Integers with kappa (1,0) + lambda (b1,b2) = mu (b1,b2) + nu (b1^2-b2^2, 2 b1 b2)
 * and kappa != 0 != nu, where b2 = sqrt(1 - b1^2).
 */
struct CoincidenceSolution
{
    BigInt kappa;
    BigInt lambda;
    BigInt mu;
    BigInt nu;
};

//! Symbolic refutation for irrational b1.
struct NoSolutionCertificate
{
    std::vector<std::string> steps;
};

//! b1 known only to be irrational; the value is informational.
struct IrrationalB1
{
    double approx{0};
};

using CoincidenceInput = std::variant<Rational, IrrationalB1>;
using CoincidenceResult = std::variant<CoincidenceSolution, NoSolutionCertificate>;

/*!
 * Minimal solution of the coincidence equation.
 *
 * Ordering: smallest |nu|, then |kappa|, then |mu|, then |lambda|, with
 * nu > 0. Throws ParameterError for b1 outside [0, 1).
 */
CoincidenceResult coincidence_solve(CoincidenceInput const& b1);

//! Exact substitution check of both components (the second divided by b2).
bool satisfies_coincidence(CoincidenceSolution const& s, Rational const& b1);

//---------------------------------------------------------------------------//
// INTERSECTIONS
//---------------------------------------------------------------------------//
//! Sublattice of Gamma given by integer coordinates in Gamma's basis.
struct Sublattice
{
    IntMatrix coords;  //!< 2 x rank, columns are generators
    std::size_t rank{0};

    //! [Gamma : sub], or nullopt when rank < 2.
    std::optional<BigInt> index() const;
};

//! Intersect a sublattice of g (in g-coordinates) with another lattice.
Sublattice intersect(Lattice2 const& g, Sublattice const& sub, Lattice2 const& other);

//! Gamma itself as a sublattice.
Sublattice full_sublattice();

struct CslIndex
{
    bool finite{false};
    BigInt index{0};
};

//! [Gamma : Gamma cap R^m Gamma] for a lattice built from the angle.
CslIndex csl_index(AngleSpec const& angle, int m);

struct ShortVector
{
    std::array<BigInt, 2> coords;  //!< in Gamma's basis
    QVec2 vector;
    Quad norm_squared;
    double norm{0};
};

//! Shortest nonzero vector of a rank-2 sublattice by exact Lagrange reduction.
ShortVector shortest_vector(Lattice2 const& g, Sublattice const& sub);

/*!
 * Evidence that the rotated copies R^m Gamma, 0 <= m <= M, share no short
 * common translation.
 *
 * Exact mode (cos phi rational): index chain of the nested intersections and
 * the shortest common vector. Empirical mode (otherwise): count of nonzero
 * Gamma points within radius lying within tolerance of every R^m Gamma.
 */
struct AperiodicityCertificate
{
    std::string angle;
    int max_power{0};
    double radius{0};
    double a_len{1};
    bool exact{false};

    std::vector<std::optional<BigInt>> index_chain;  //!< nullopt = infinite
    bool chain_strictly_increasing{false};
    std::optional<ShortVector> shortest;

    std::size_t points_checked{0};
    double tolerance{0};
    std::vector<Vec2> near_common;

    bool common_vector_within_radius{false};
};

AperiodicityCertificate aperiodicity_certificate(AngleSpec const& angle, int max_power,
                                                 double radius, double a_len = 1.0);

}  // namespace scd
