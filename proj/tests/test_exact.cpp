#include <random>

#include "doctest.h"
#include "scd/exact.hpp"

using namespace scd;

TEST_CASE("rational parsing")
{
    CHECK(parse_rational("3/5") == make_rational(3, 5));
    CHECK(parse_rational("-4") == Rational(-4));
    CHECK(parse_rational("0.25") == make_rational(1, 4));
    CHECK(parse_rational("010/05") == Rational(2));
    CHECK(parse_rational("-0.5") == make_rational(-1, 2));
    CHECK(parse_rational("0") == Rational(0));
    CHECK_THROWS(parse_rational("abc"));
    CHECK_THROWS(parse_rational("1.2.3"));
    CHECK_THROWS(parse_rational("1/0"));
}

TEST_CASE("squarefree split")
{
    // 5^2 - 3^2 = 16 = 4^2 * 1 ; 3^2 - 1 = 8 = 2^2 * 2 ; 4 - 1 = 3
    CHECK(squarefree_split(16) == std::pair<BigInt, std::int64_t>{4, 1});
    CHECK(squarefree_split(8) == std::pair<BigInt, std::int64_t>{2, 2});
    CHECK(squarefree_split(3) == std::pair<BigInt, std::int64_t>{1, 3});
    CHECK(squarefree_split(72) == std::pair<BigInt, std::int64_t>{6, 2});
}

TEST_CASE("quadratic field arithmetic")
{
    Quad r2(Rational(0), Rational(1), 2);  // sqrt 2
    CHECK(r2 * r2 == Quad(2));
    Quad x(Rational(1), Rational(1), 2);  // 1 + sqrt 2
    Quad inv = Quad(1) / x;  // sqrt 2 - 1
    CHECK(inv == Quad(Rational(-1), Rational(1), 2));
    CHECK(x.field_norm() == Rational(-1));
    CHECK(x.sign() == 1);
    CHECK(Quad(Rational(-3, 2), Rational(1), 2).sign() == -1);  // -1.5 + 1.414
    CHECK(Quad(Rational(3, 2), Rational(-1), 2).sign() == 1);
    CHECK(round_nearest(Quad(Rational(0), Rational(3), 2)) == 4);  // 4.24
    CHECK(x.to_double() == doctest::Approx(1 + std::sqrt(2.0)));
    CHECK_THROWS_AS(r2 + Quad(Rational(0), Rational(1), 3), std::domain_error);
}

namespace
{
IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int range)
{
    std::uniform_int_distribution<int> d(-range, range);
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            m(i, j) = d(rng);
    return m;
}

BigInt det(IntMatrix m)
{
    // fraction-free Bareiss elimination
    std::size_t n = m.rows();
    BigInt sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k)
    {
        if (m(k, k) == 0)
        {
            std::size_t p = k + 1;
            while (p < n && m(p, k) == 0)
                ++p;
            if (p == n)
                return 0;
            for (std::size_t j = 0; j < n; ++j)
                std::swap(m(k, j), m(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}
}  // namespace

TEST_CASE("column Hermite form: a * U == H with U unimodular (property)")
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial)
    {
        auto a = random_matrix(rng, 4, 6, 9);
        auto e = column_hermite(a);
        CHECK(a * e.transform == e.echelon);
        BigInt d = det(e.transform);
        CHECK((d == 1 || d == -1));
        CHECK(e.rank <= 4);
        // columns beyond the rank are zero
        for (std::size_t j = e.rank; j < 6; ++j)
            for (std::size_t i = 0; i < 4; ++i)
                CHECK(e.echelon(i, j) == 0);
    }
}

TEST_CASE("integer kernel annihilates and has the right dimension (property)")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial)
    {
        auto a = random_matrix(rng, 3, 5, 6);
        auto k = integer_kernel(a);
        auto prod = a * k;
        for (std::size_t i = 0; i < prod.rows(); ++i)
            for (std::size_t j = 0; j < prod.cols(); ++j)
                CHECK(prod(i, j) == 0);
        CHECK(k.cols() == 5 - column_hermite(a).rank);
    }
}

TEST_CASE("module basis of redundant generators")
{
    IntMatrix g(2, 3);
    g(0, 0) = 2;
    g(1, 0) = 0;
    g(0, 1) = 0;
    g(1, 1) = 3;
    g(0, 2) = 4;
    g(1, 2) = 6;
    auto b = module_basis(g);
    REQUIRE(b.cols() == 2);
    CHECK(abs(det2(b)) == 6);
}
