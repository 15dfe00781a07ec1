#include <doctest.h>

#include <random>

#include "jkpencil/matrix.hpp"
#include "jkpencil/polynomial.hpp"
#include "jkpencil/ratfunc.hpp"
#include "jkpencil/upoly.hpp"

using namespace jkp;

namespace {

const std::vector<std::string> kXY{"x", "y", "z"};

RatFunc rf(const char* s) { return parse_ratfunc(s, kXY); }
Polynomial poly(const char* s) { return parse_polynomial(s, kXY); }

UPoly up(std::initializer_list<long> c) {
  std::vector<Rational> v;
  for (long x : c) v.emplace_back(x);
  return UPoly(std::move(v));
}

UPoly remultiply(const std::vector<Factor>& fs) {
  UPoly r(1);
  for (const auto& f : fs) r *= pow(f.factor, f.multiplicity);
  return r;
}

}  // namespace

TEST_CASE("rationals parse and print canonically") {
  CHECK(to_string(parse_rational("6/4")) == "3/2");
  CHECK(to_string(parse_rational("-10/5")) == "-2");
  CHECK(to_string(parse_rational(" 7 ")) == "7");
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("1.5"), Error);
  CHECK_THROWS_AS(parse_rational("x"), Error);
}

TEST_CASE("mat_rank examples") {
  CHECK(rank(QMatrix(3, 3)) == 0);
  CHECK(rank(QMatrix::identity(5)) == 5);
  Matrix<RatFunc> m{{rf("x"), rf("x^2")}, {RatFunc(1), rf("x")}};
  CHECK(rank(m) == 1);
}

TEST_CASE("rank of random products with known rank") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> d(-3, 3);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t rows = 2 + trial % 5, cols = 3 + trial % 4, r = trial % 4;
    QMatrix L(rows, r), R(r, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < r; ++j) L(i, j) = d(rng);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < cols; ++j) R(i, j) = d(rng);
    // Force the factors to full rank so the product has rank exactly r.
    for (std::size_t i = 0; i < std::min({rows, r, cols}); ++i) {
      L(i, i) += 10;
      R(i, i) += 10;
    }
    const std::size_t expected = std::min({rows, r, cols});
    CHECK(rank(L * R) == expected);
  }
}

TEST_CASE("solve_linear examples and substitution property") {
  auto x = solve(QMatrix::identity(2), QVector{3, 5});
  REQUIRE(x);
  CHECK((*x)[0] == 3);
  CHECK((*x)[1] == 5);

  QMatrix m{{1, 1}};
  auto y = solve(m, QVector{2});
  REQUIRE(y);
  CHECK(m.apply(*y) == QVector{2});

  QMatrix col{{1}, {0}};
  CHECK_FALSE(solve(col, QVector{0, 1}));

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> d(-4, 4);
  for (int trial = 0; trial < 30; ++trial) {
    QMatrix a(4, 5);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 5; ++j) a(i, j) = d(rng);
    QVector b{d(rng), d(rng), d(rng), d(rng)};
    if (auto s = solve(a, b)) CHECK(a.apply(*s) == b);
  }
}

TEST_CASE("kernel, inverse, determinant") {
  QMatrix a{{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
  auto k = kernel(a);
  CHECK(k.cols() == 1);
  CHECK((a * k).is_zero());
  CHECK(determinant(a) == 0);
  QMatrix b{{2, 1}, {1, 1}};
  auto inv = inverse(b);
  REQUIRE(inv);
  CHECK(b * *inv == QMatrix::identity(2));
  CHECK(determinant(b) == 1);
  CHECK_FALSE(inverse(a));
}

TEST_CASE("factor_rational examples") {
  auto f1 = factor_rational(up({-1, 0, 1}));
  REQUIRE(f1.size() == 2);
  CHECK(f1[0].factor == UPoly::linear(-1));
  CHECK(f1[1].factor == UPoly::linear(1));

  auto f2 = factor_rational(pow(UPoly::linear(2), 4));
  REQUIRE(f2.size() == 1);
  CHECK(f2[0].factor == UPoly::linear(2));
  CHECK(f2[0].multiplicity == 4);

  auto f3 = factor_rational(up({1, 0, 2, 0, 1}));
  REQUIRE(f3.size() == 1);
  CHECK(f3[0].factor == up({1, 0, 1}));
  CHECK(f3[0].multiplicity == 2);

  CHECK_THROWS_AS(factor_rational(UPoly::monomial(1, 33)), Error);
}

TEST_CASE("factor_rational handles hard irreducibles and mixed products") {
  // x^4 - 10x^2 + 1 is irreducible but splits modulo every prime.
  auto sd = factor_rational(up({1, 0, -10, 0, 1}));
  REQUIRE(sd.size() == 1);
  CHECK(sd[0].factor.degree() == 4);

  auto f = factor_rational(up({-4, 0, 0, 0, 1}));  // (t^2-2)(t^2+2)
  REQUIRE(f.size() == 2);
  CHECK(f[0].factor == up({-2, 0, 1}));
  CHECK(f[1].factor == up({2, 0, 1}));

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> d(-5, 5);
  for (int trial = 0; trial < 25; ++trial) {
    UPoly p(Rational(1, 3 + trial % 4));
    const int nf = 1 + trial % 4;
    for (int i = 0; i < nf; ++i) {
      const int degree = 1 + (trial + i) % 3;
      std::vector<Rational> c(static_cast<std::size_t>(degree + 1));
      for (auto& x : c) x = d(rng);
      c.back() = 1 + std::abs(d(rng));
      p *= pow(UPoly(c), 1 + (i % 2));
    }
    if (p.degree() > kMaxFactorDegree || p.degree() < 1) continue;
    auto fs = factor_rational(p);
    CHECK(remultiply(fs) == p.monic());
    for (const auto& fc : fs) {
      CHECK(fc.factor.leading() == 1);
      if (fc.factor.degree() >= 2) {
        for (long r = -12; r <= 12; ++r) CHECK(fc.factor.eval(Rational(r)) != 0);
      }
    }
  }
}

TEST_CASE("univariate resultant") {
  CHECK(resultant(UPoly::linear(1), UPoly::linear(3)) == -2);
  CHECK(resultant(up({-1, 0, 1}), UPoly::linear(1)) == 0);
  CHECK(resultant(up({1, 0, 1}), up({-2, 0, 1})) == 9);
}

TEST_CASE("multivariate polynomial parse, print and arithmetic") {
  Polynomial p = poly("3/2*x^2*y - x + 1/3");
  CHECK(p.to_string(kXY) == "3/2*x^2*y-x+1/3");
  CHECK(poly(p.to_string(kXY).c_str()) == p);
  CHECK(poly("(x+y)^2") == poly("x^2+2*x*y+y^2"));
  CHECK(poly("x*y").derivative(0) == poly("y"));
  CHECK_THROWS_AS(poly("x+w"), Error);
  CHECK_THROWS_AS(poly("1/x"), Error);
  CHECK_THROWS_AS(poly("x^"), Error);
}

TEST_CASE("multivariate gcd and exact division") {
  CHECK(gcd(poly("x^2-y^2"), poly("x^2+2*x*y+y^2")) == poly("x+y"));
  CHECK(gcd(poly("x*z+2*z"), poly("x^2+4*x+4")) == poly("x+2"));
  CHECK(gcd(poly("3*x*y"), poly("6*x^2")) == poly("x"));
  CHECK(gcd(poly("x+1"), poly("y+1")).is_one());
  auto q = divide_exact(poly("x^3-y^3"), poly("x-y"));
  REQUIRE(q);
  CHECK(*q == poly("x^2+x*y+y^2"));
  CHECK_FALSE(divide_exact(poly("x^2+1"), poly("x-1")));
}

TEST_CASE("rational function normal form and field identities") {
  RatFunc a = rf("(x^2-1)/(2*x+2)");
  CHECK(a == rf("x/2-1/2"));
  RatFunc b = rf("1/(x/2+1)");
  CHECK(b.den() == poly("x+2"));
  CHECK(b.num() == poly("2"));

  std::mt19937_64 rng(5);
  const char* pool[] = {"x", "y+1", "x*y-z", "1/(x+2)", "(y^2+1)/(x-z)", "3/(2*x*y+1)", "x/(y+z)"};
  for (int i = 0; i < 40; ++i) {
    RatFunc f = rf(pool[rng() % 7]) * rf(pool[rng() % 7]) + rf(pool[rng() % 7]);
    RatFunc g = rf(pool[rng() % 7]) - rf(pool[rng() % 7]) * rf(pool[rng() % 7]);
    CHECK((f + g) - g == f);
    if (!f.is_zero()) CHECK(f * (RatFunc(1) / f) == RatFunc(1));
  }
  CHECK(rf("1/(x+2)").derivative(0) == rf("-1/(x^2+4*x+4)"));
}
