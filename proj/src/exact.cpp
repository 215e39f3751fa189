#include "scd/exact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scd
{
namespace mp = boost::multiprecision;

Rational make_rational(std::int64_t num, std::int64_t den)
{
    if (den == 0)
        throw std::invalid_argument("rational with zero denominator");
    return Rational(BigInt(num), BigInt(den));
}

double to_double(Rational const& r)
{
    return r.convert_to<double>();
}

std::string to_string(Rational const& r)
{
    if (mp::denominator(r) == 1)
        return mp::numerator(r).str();
    return mp::numerator(r).str() + "/" + mp::denominator(r).str();
}

namespace
{
//! Decimal integer; BigInt's own parser would read a leading 0 as octal.
BigInt parse_decimal(std::string s)
{
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+'))
    {
        neg = s[0] == '-';
        s.erase(0, 1);
    }
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw std::runtime_error("bad digits");
    s.erase(0, std::min(s.find_first_not_of('0'), s.size() - 1));
    BigInt v(s);
    return neg ? BigInt(-v) : v;
}
}  // namespace

Rational parse_rational(std::string const& text)
{
    auto bad = [&] { return std::invalid_argument("not a rational number: '" + text + "'"); };
    if (text.empty())
        throw bad();
    try
    {
        if (auto slash = text.find('/'); slash != std::string::npos)
        {
            BigInt num = parse_decimal(text.substr(0, slash));
            BigInt den = parse_decimal(text.substr(slash + 1));
            if (den == 0)
                throw bad();
            return Rational(num, den);
        }
        if (auto dot_pos = text.find('.'); dot_pos != std::string::npos)
        {
            std::string digits = text.substr(0, dot_pos) + text.substr(dot_pos + 1);
            std::size_t decimals = text.size() - dot_pos - 1;
            if (digits.empty() || digits == "-" || digits == "+")
                throw bad();
            BigInt num = parse_decimal(digits);
            BigInt den = mp::pow(BigInt(10), static_cast<unsigned>(decimals));
            return Rational(num, den);
        }
        return Rational(parse_decimal(text));
    }
    catch (std::runtime_error const&)
    {
        throw bad();
    }
}

std::pair<BigInt, std::int64_t> squarefree_split(std::int64_t n)
{
    if (n <= 0)
        throw std::invalid_argument("squarefree_split needs a positive integer");
    BigInt s = 1;
    std::int64_t d = n;
    for (std::int64_t f = 2; f * f <= d; ++f)
    {
        while (d % (f * f) == 0)
        {
            d /= f * f;
            s *= f;
        }
    }
    return {s, d};
}

//---------------------------------------------------------------------------//
Quad::Quad(Rational re, Rational im, std::int64_t d) : re_(std::move(re)), im_(std::move(im)), d_(d)
{
    if (d_ < 1)
        throw std::invalid_argument("quadratic field radicand must be >= 1");
    if (d_ == 1)
    {
        re_ += im_;
        im_ = 0;
    }
    if (im_ == 0)
        d_ = 1;
}

std::int64_t Quad::common_radicand(Quad const& a, Quad const& b)
{
    if (a.im_ == 0)
        return b.d_;
    if (b.im_ == 0 || a.d_ == b.d_)
        return a.d_;
    throw std::domain_error("mixing elements of different quadratic fields");
}

Quad operator+(Quad const& a, Quad const& b)
{
    return Quad(a.re_ + b.re_, a.im_ + b.im_, Quad::common_radicand(a, b));
}

Quad operator-(Quad const& a, Quad const& b)
{
    return Quad(a.re_ - b.re_, a.im_ - b.im_, Quad::common_radicand(a, b));
}

Quad operator*(Quad const& a, Quad const& b)
{
    std::int64_t d = Quad::common_radicand(a, b);
    return Quad(a.re_ * b.re_ + Rational(d) * a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_, d);
}

Quad operator/(Quad const& a, Quad const& b)
{
    if (b.is_zero())
        throw std::domain_error("division by zero in Q(sqrt d)");
    Rational n = b.field_norm();
    Quad inv(b.re_ / n, -b.im_ / n, b.d_);
    return a * inv;
}

bool operator==(Quad const& a, Quad const& b)
{
    return a.re_ == b.re_ && a.im_ == b.im_;
}

int Quad::sign() const
{
    int sr = re_.sign();
    int si = im_.sign();
    if (si == 0)
        return sr;
    if (sr == 0)
        return si;
    if (sr == si)
        return sr;
    // opposite signs: compare re^2 with d im^2
    Rational lhs = re_ * re_;
    Rational rhs = Rational(d_) * im_ * im_;
    if (lhs == rhs)
        return 0;  // unreachable for squarefree d > 1, kept for d == 1 safety
    return lhs > rhs ? sr : si;
}

double Quad::to_double() const
{
    return scd::to_double(re_) + scd::to_double(im_) * std::sqrt(static_cast<double>(d_));
}

std::string Quad::str() const
{
    if (im_ == 0)
        return to_string(re_);
    std::string s = to_string(re_) + (im_ > 0 ? "+" : "-");
    Rational a = im_ > 0 ? im_ : Rational(-im_);
    return s + to_string(a) + "*sqrt(" + std::to_string(d_) + ")";
}

BigInt round_nearest(Quad const& x)
{
    double approx = std::floor(x.to_double() + 0.5);
    BigInt n(static_cast<long long>(approx));
    // Adjust until n - 1/2 <= x < n + 1/2 holds exactly.
    Rational half(1, 2);
    for (int guard = 0; guard < 64; ++guard)
    {
        if ((x - Quad(Rational(n) + half)).sign() >= 0)
            n += 1;
        else if ((x - Quad(Rational(n) - half)).sign() < 0)
            n -= 1;
        else
            return n;
    }
    throw std::logic_error("round_nearest failed to converge");
}

//---------------------------------------------------------------------------//
IntMatrix IntMatrix::identity(std::size_t n)
{
    IntMatrix r(n, n);
    for (std::size_t i = 0; i < n; ++i)
        r(i, i) = 1;
    return r;
}

IntMatrix IntMatrix::operator*(IntMatrix const& o) const
{
    if (cols_ != o.rows_)
        throw std::invalid_argument("integer matrix shape mismatch");
    IntMatrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k)
        {
            if ((*this)(i, k) == 0)
                continue;
            for (std::size_t j = 0; j < o.cols_; ++j)
                r(i, j) += (*this)(i, k) * o(k, j);
        }
    return r;
}

IntMatrix IntMatrix::column_block(std::size_t first, std::size_t count) const
{
    IntMatrix r(rows_, count);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < count; ++j)
            r(i, j) = (*this)(i, first + j);
    return r;
}

IntMatrix IntMatrix::row_block(std::size_t first, std::size_t count) const
{
    IntMatrix r(count, cols_);
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            r(i, j) = (*this)(first + i, j);
    return r;
}

namespace
{
// Apply [[s, -b/g], [t, a/g]] to columns (p, q) of both matrices.
void combine_columns(IntMatrix& h, IntMatrix& u, std::size_t p, std::size_t q,
                     BigInt const& s, BigInt const& t, BigInt const& x, BigInt const& y)
{
    auto apply = [&](IntMatrix& m) {
        for (std::size_t i = 0; i < m.rows(); ++i)
        {
            BigInt cp = m(i, p);
            BigInt cq = m(i, q);
            m(i, p) = s * cp + t * cq;
            m(i, q) = x * cp + y * cq;
        }
    };
    apply(h);
    apply(u);
}

void extended_gcd(BigInt const& a, BigInt const& b, BigInt& g, BigInt& s, BigInt& t)
{
    BigInt old_r = a, r = b, old_s = 1, cur_s = 0, old_t = 0, cur_t = 1;
    while (r != 0)
    {
        BigInt q = old_r / r;
        BigInt tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * cur_s;
        old_s = cur_s;
        cur_s = tmp;
        tmp = old_t - q * cur_t;
        old_t = cur_t;
        cur_t = tmp;
    }
    g = old_r;
    s = old_s;
    t = old_t;
    if (g < 0)
    {
        g = -g;
        s = -s;
        t = -t;
    }
}

BigInt floor_div(BigInt const& a, BigInt const& b)
{
    BigInt q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        q -= 1;
    return q;
}
}  // namespace

ColumnEchelon column_hermite(IntMatrix const& a)
{
    ColumnEchelon out{a, IntMatrix::identity(a.cols()), 0};
    IntMatrix& h = out.echelon;
    IntMatrix& u = out.transform;
    std::size_t pivot = 0;
    for (std::size_t row = 0; row < h.rows() && pivot < h.cols(); ++row)
    {
        for (std::size_t j = pivot + 1; j < h.cols(); ++j)
        {
            if (h(row, j) == 0)
                continue;
            BigInt av = h(row, pivot), bv = h(row, j), g, s, t;
            extended_gcd(av, bv, g, s, t);
            combine_columns(h, u, pivot, j, s, t, -bv / g, av / g);
        }
        if (h(row, pivot) == 0)
            continue;
        if (h(row, pivot) < 0)
        {
            for (std::size_t i = 0; i < h.rows(); ++i)
                h(i, pivot) = -h(i, pivot);
            for (std::size_t i = 0; i < u.rows(); ++i)
                u(i, pivot) = -u(i, pivot);
        }
        // reduce earlier pivot columns modulo this pivot
        for (std::size_t j = 0; j < pivot; ++j)
        {
            BigInt f = floor_div(h(row, j), h(row, pivot));
            if (f == 0)
                continue;
            for (std::size_t i = 0; i < h.rows(); ++i)
                h(i, j) -= f * h(i, pivot);
            for (std::size_t i = 0; i < u.rows(); ++i)
                u(i, j) -= f * u(i, pivot);
        }
        ++pivot;
    }
    out.rank = pivot;
    return out;
}

IntMatrix integer_kernel(IntMatrix const& a)
{
    ColumnEchelon ce = column_hermite(a);
    return ce.transform.column_block(ce.rank, a.cols() - ce.rank);
}

IntMatrix module_basis(IntMatrix const& gens)
{
    ColumnEchelon ce = column_hermite(gens);
    return ce.echelon.column_block(0, ce.rank);
}

BigInt det2(IntMatrix const& m)
{
    if (m.rows() != 2 || m.cols() != 2)
        throw std::invalid_argument("det2 needs a 2x2 matrix");
    return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

}  // namespace scd
