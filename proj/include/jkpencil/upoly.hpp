#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jkpencil/rational.hpp"

namespace jkp {

// Dense univariate polynomial over Q; coefficient i multiplies t^i.
// The coefficient vector never ends in a zero.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<Rational> coeffs);
  UPoly(const Rational& c);  // NOLINT(google-explicit-constructor)
  UPoly(long c) : UPoly(Rational(c)) {}  // NOLINT(google-explicit-constructor)

  static UPoly monomial(const Rational& c, std::size_t degree);
  static UPoly variable() { return monomial(1, 1); }
  // t - r
  static UPoly linear(const Rational& r);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  const std::vector<Rational>& coefficients() const { return c_; }
  Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
  const Rational& leading() const;

  UPoly monic() const;
  UPoly derivative() const;
  Rational eval(const Rational& x) const;

  UPoly operator-() const;
  UPoly& operator+=(const UPoly& o);
  UPoly& operator-=(const UPoly& o);
  UPoly& operator*=(const UPoly& o);
  UPoly& operator*=(const Rational& s);
  friend UPoly operator+(UPoly a, const UPoly& b) { return a += b; }
  friend UPoly operator-(UPoly a, const UPoly& b) { return a -= b; }
  friend UPoly operator*(UPoly a, const UPoly& b) { return a *= b; }
  friend UPoly operator*(UPoly a, const Rational& s) { return a *= s; }
  friend UPoly operator*(const Rational& s, UPoly a) { return a *= s; }
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

  std::string to_string(std::string_view var = "t") const;

 private:
  void trim();
  std::vector<Rational> c_;
};

// Quotient and remainder; throws Error(Internal) on division by zero.
std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);
UPoly operator/(const UPoly& a, const UPoly& b);
UPoly operator%(const UPoly& a, const UPoly& b);

UPoly pow(const UPoly& p, unsigned e);
// Monic gcd; gcd(0, 0) = 0.
UPoly gcd(const UPoly& a, const UPoly& b);

struct ExtendedGcd {
  UPoly g, s, t;  // s*a + t*b = g, g monic
};
ExtendedGcd extended_gcd(const UPoly& a, const UPoly& b);

// p(q(t))
UPoly compose(const UPoly& p, const UPoly& q);
// t^n p(1/t) for n >= deg p
UPoly reverse(const UPoly& p, std::size_t n);
Rational resultant(const UPoly& a, const UPoly& b);

// Total order used for canonical factor lists: by degree, then the
// coefficient sequence from the leading term downwards.
bool canonical_less(const UPoly& a, const UPoly& b);

struct Factor {
  UPoly factor;
  unsigned multiplicity;
};

// Yun's algorithm; factors are monic and pairwise coprime.
std::vector<Factor> squarefree_decomposition(const UPoly& p);

// Irreducible monic factors over Q with multiplicities, in canonical order.
// Throws DegreeTooLarge (precondition) above degree 32 and for p = 0.
std::vector<Factor> factor_rational(const UPoly& p);

// Monic irreducible factors of a squarefree polynomial, unsorted.
std::vector<UPoly> factor_squarefree(const UPoly& p);

inline constexpr int kMaxFactorDegree = 32;

}  // namespace jkp
