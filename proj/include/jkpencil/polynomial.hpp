#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jkpencil/rational.hpp"

namespace jkp {

// Sparse multivariate polynomial over Q. Terms are kept sorted in
// descending graded-lexicographic order (earlier variables rank higher)
// and never carry a zero coefficient.
//
// A polynomial with zero variables is a bare constant; it combines with a
// polynomial over any number of variables.
class Polynomial {
 public:
  using Exponents = std::vector<std::uint16_t>;
  struct Term {
    Exponents exp;
    unsigned degree = 0;
    Rational coef;
  };

  Polynomial() = default;
  Polynomial(const Rational& c);  // NOLINT(google-explicit-constructor)
  Polynomial(long c) : Polynomial(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  Polynomial(std::size_t nvars, const Rational& c);

  static Polynomial zero(std::size_t nvars) { return Polynomial(nvars, Rational(0)); }
  static Polynomial variable(std::size_t nvars, std::size_t index, unsigned power = 1);
  static Polynomial monomial(const Rational& c, Exponents exp);
  // Sorts and merges arbitrary terms.
  static Polynomial from_terms(std::size_t nvars, std::vector<Term> terms);

  std::size_t nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  // Constant term value; only meaningful when is_constant().
  Rational constant_value() const;
  bool is_one() const;

  const Term& leading_term() const;
  const Rational& leading_coefficient() const { return leading_term().coef; }
  unsigned total_degree() const { return terms_.empty() ? 0 : terms_.front().degree; }
  unsigned degree_in(std::size_t var) const;
  std::vector<bool> used_variables() const;

  Polynomial monic() const;
  Polynomial derivative(std::size_t var) const;
  Rational evaluate(std::span<const Rational> point) const;
  // Coefficient polynomials with respect to var; entry i multiplies var^i.
  std::vector<Polynomial> coefficients_in(std::size_t var) const;
  static Polynomial from_coefficients_in(std::size_t nvars, std::size_t var,
                                         const std::vector<Polynomial>& coeffs);
  // Re-embed into a chart with more variables: old variable i becomes index map[i].
  Polynomial remap(std::size_t nvars, std::span<const std::size_t> map) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  Polynomial& operator*=(const Rational& s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
  friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }
  friend bool operator==(const Polynomial& a, const Polynomial& b);

  std::string to_string(const std::vector<std::string>& names) const;

  // Widens a bare constant to nvars variables; no-op when already there.
  void promote_to(std::size_t nvars);

  // Descending graded-lex comparison of exponent vectors: returns <0, 0, >0.
  static int compare(const Term& a, const Term& b);

 private:
  Polynomial(std::size_t nvars, std::vector<Term> sorted_terms)
      : nvars_(nvars), terms_(std::move(sorted_terms)) {}
  static std::size_t unify(Polynomial& a, const Polynomial& b);

  std::size_t nvars_ = 0;
  std::vector<Term> terms_;
};

// Quotient when b divides a exactly, std::nullopt otherwise.
std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b);

// Monic gcd (leading coefficient 1); gcd(0, 0) = 0.
Polynomial gcd(const Polynomial& a, const Polynomial& b);

Polynomial pow(const Polynomial& p, unsigned e);

Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& names);

}  // namespace jkp
