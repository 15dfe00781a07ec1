#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jkpencil/polynomial.hpp"

namespace jkp {

// Quotient of polynomials in lowest terms with a monic denominator, so two
// equal functions always have identical representations.
class RatFunc {
 public:
  RatFunc() = default;
  RatFunc(const Rational& c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  RatFunc(long c) : RatFunc(Rational(c)) {}         // NOLINT(google-explicit-constructor)
  RatFunc(Polynomial p) : num_(std::move(p)), den_(1) {}  // NOLINT(google-explicit-constructor)

  // Throws Error(Internal, "DivisionByZero") when den is zero.
  static RatFunc fraction(const Polynomial& num, const Polynomial& den);

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  std::size_t nvars() const { return std::max(num_.nvars(), den_.nvars()); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_one(); }
  bool is_constant() const { return num_.is_constant() && den_.is_one(); }
  Rational constant_value() const { return num_.constant_value(); }
  // Term count of numerator and denominator; used to rank pivots.
  std::size_t complexity() const { return num_.size() + den_.size(); }

  RatFunc derivative(std::size_t var) const;
  // Throws Error(Precondition, "PoleAtPoint") when the denominator vanishes.
  Rational evaluate(std::span<const Rational> point) const;
  RatFunc remap(std::size_t nvars, std::span<const std::size_t> map) const;

  RatFunc operator-() const;
  RatFunc& operator+=(const RatFunc& o);
  RatFunc& operator-=(const RatFunc& o);
  RatFunc& operator*=(const RatFunc& o);
  RatFunc& operator/=(const RatFunc& o);
  friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
  friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
  friend RatFunc operator*(RatFunc a, const RatFunc& b) { return a *= b; }
  friend RatFunc operator/(RatFunc a, const RatFunc& b) { return a /= b; }
  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  RatFunc inverse() const;
  std::string to_string(const std::vector<std::string>& names) const;

 private:
  Polynomial num_;
  Polynomial den_{1};
};

// Grammar documented in docs/polynomial-grammar.md; '/' is allowed.
RatFunc parse_ratfunc(std::string_view text, const std::vector<std::string>& names);

}  // namespace jkp
