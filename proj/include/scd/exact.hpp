//! \file exact.hpp
//! \brief Exact arithmetic: rationals, real quadratic fields, integer matrices.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace scd
{
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

Rational make_rational(std::int64_t num, std::int64_t den);
double to_double(Rational const& r);
std::string to_string(Rational const& r);

//! Parse "p/q", "p", or a finite decimal like "0.25" into an exact rational.
Rational parse_rational(std::string const& text);

//! Split n > 0 as s^2 * d with d squarefree. Returns {s, d}.
std::pair<BigInt, std::int64_t> squarefree_split(std::int64_t n);

//---------------------------------------------------------------------------//
/*!
 * Element re + im * sqrt(d) of the real quadratic field Q(sqrt(d)).
 *
 * d is squarefree and >= 1; when d == 1 the imaginary part is folded into the
 * real part so every value has a unique representation. Binary operations
 * require both operands to share d unless one of them is rational.
 */
class Quad
{
  public:
    Quad() = default;
    Quad(Rational re) : re_(std::move(re)) {}  // NOLINT
    Quad(std::int64_t v) : re_(v) {}  // NOLINT
    Quad(Rational re, Rational im, std::int64_t d);

    Rational const& re() const { return re_; }
    Rational const& im() const { return im_; }
    std::int64_t radicand() const { return d_; }
    bool is_rational() const { return im_ == 0; }
    bool is_zero() const { return re_ == 0 && im_ == 0; }

    //! Exact sign: -1, 0, or 1.
    int sign() const;
    double to_double() const;
    Quad conjugate() const { return Quad(re_, -im_, d_); }
    //! re^2 - d im^2 (the field norm, not the Euclidean one).
    Rational field_norm() const { return re_ * re_ - Rational(d_) * im_ * im_; }

    Quad operator-() const { return Quad(-re_, -im_, d_); }
    friend Quad operator+(Quad const& a, Quad const& b);
    friend Quad operator-(Quad const& a, Quad const& b);
    friend Quad operator*(Quad const& a, Quad const& b);
    friend Quad operator/(Quad const& a, Quad const& b);
    friend bool operator==(Quad const& a, Quad const& b);
    friend bool operator<(Quad const& a, Quad const& b) { return (a - b).sign() < 0; }

    std::string str() const;

  private:
    Rational re_{0};
    Rational im_{0};
    std::int64_t d_{1};

    static std::int64_t common_radicand(Quad const& a, Quad const& b);
};

//! Nearest integer to an exact quadratic number (ties toward +infinity).
BigInt round_nearest(Quad const& x);

using QVec2 = std::array<Quad, 2>;

inline Quad dot(QVec2 const& a, QVec2 const& b) { return a[0] * b[0] + a[1] * b[1]; }
inline QVec2 operator+(QVec2 const& a, QVec2 const& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline QVec2 operator-(QVec2 const& a, QVec2 const& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline QVec2 operator*(Quad const& s, QVec2 const& a) { return {s * a[0], s * a[1]}; }

//---------------------------------------------------------------------------//
//! Dense integer matrix, row-major.
class IntMatrix
{
  public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static IntMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    BigInt& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    BigInt const& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    IntMatrix operator*(IntMatrix const& o) const;
    bool operator==(IntMatrix const&) const = default;

    //! Keep columns [first, first+count).
    IntMatrix column_block(std::size_t first, std::size_t count) const;
    //! Keep rows [first, first+count).
    IntMatrix row_block(std::size_t first, std::size_t count) const;

  private:
    std::size_t rows_{0};
    std::size_t cols_{0};
    std::vector<BigInt> data_;
};

//! Result of column-style Hermite reduction: input * transform == echelon.
struct ColumnEchelon
{
    IntMatrix echelon;
    IntMatrix transform;  //!< unimodular
    std::size_t rank{0};
};

//! Column Hermite normal form via extended-gcd column operations.
ColumnEchelon column_hermite(IntMatrix const& a);

//! Basis (as columns) of the integer kernel {x in Z^n : a x = 0}.
IntMatrix integer_kernel(IntMatrix const& a);

//! Basis (as columns) of the Z-module generated by the columns of gens.
IntMatrix module_basis(IntMatrix const& gens);

BigInt det2(IntMatrix const& m);

}  // namespace scd
