#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jkpencil/matrix.hpp"
#include "jkpencil/upoly.hpp"

namespace jkp {

// Pair of skew-symmetric forms; A plays the role of the second form and B
// of the first (symplectic) one.
struct SkewPencil {
  QMatrix A, B;
  std::size_t n() const { return A.rows(); }
};

// Validates shapes and skew-symmetry; errors name the offending entry.
SkewPencil make_pencil(QMatrix A, QMatrix B);

// (C^T A C, C^T B C)
SkewPencil congruence(const SkewPencil& p, const QMatrix& C);

// Restriction to the column span of V: (V^T A V, V^T B V).
SkewPencil restrict_pencil(const SkewPencil& p, const QMatrix& V);

// det(t B - A); made monic when B is invertible.
UPoly char_poly(const SkewPencil& p);

// det(t E - M) by evaluation and interpolation.
UPoly matrix_char_poly(const QMatrix& M);

// B^{-1} A; throws DegenerateB when det B = 0.
QMatrix recursion_operator(const SkewPencil& p);

// f(M) by Horner's scheme.
QMatrix poly_at(const UPoly& f, const QMatrix& M);

std::optional<Rational> rational_sqrt(const Rational& q);

// Semisimple part of M given a squarefree f with f(M) nilpotent, by the
// Newton iteration S <- S - f(S) f'(S)^{-1} started at S = M.
QMatrix semisimple_part(const QMatrix& M, const UPoly& f);

class EigenvalueClass {
 public:
  enum class Kind { Finite, Irreducible, Infinity };

  static EigenvalueClass finite(const Rational& value);
  // f monic irreducible of degree >= 2
  static EigenvalueClass irreducible(const UPoly& f);
  static EigenvalueClass infinity();
  // Linear monic factors become Finite classes.
  static EigenvalueClass from_factor(const UPoly& f);

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_infinity() const { return kind_ == Kind::Infinity; }
  bool is_irreducible() const { return kind_ == Kind::Irreducible; }
  const Rational& value() const { return value_; }
  // t - value for finite classes, f for irreducible ones, 1 for infinity.
  const UPoly& polynomial() const { return poly_; }
  unsigned degree() const { return is_irreducible() ? static_cast<unsigned>(poly_.degree()) : 1; }

  // Quadratic data for f = t^2 - p t + q: alpha = p/2, beta^2 = q - p^2/4.
  bool is_quadratic() const { return is_irreducible() && poly_.degree() == 2; }
  Rational alpha() const;
  Rational beta_squared() const;
  // Rational beta > 0 when the discriminant is negative and beta^2 is a square.
  std::optional<Rational> beta() const;
  // Classes for which a canonical basis over Q exists.
  bool rationally_realizable() const;

  // "2", "inf", or the polynomial such as "t^2+1".
  std::string label() const;

  friend bool operator==(const EigenvalueClass& a, const EigenvalueClass& b);
  // Finite ascending, then irreducible factors, then infinity.
  friend bool operator<(const EigenvalueClass& a, const EigenvalueClass& b);

 private:
  Kind kind_ = Kind::Finite;
  Rational value_;
  UPoly poly_;
};

// Column span inside Q^n, kept as a matrix with independent columns.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient) : ambient_(ambient), basis_(ambient, 0) {}
  // Spans the columns of m, dropping dependent ones.
  static Subspace span(const QMatrix& m);
  static Subspace span(std::size_t ambient, const std::vector<QVector>& vectors);
  static Subspace whole(std::size_t n) { return Subspace(n, QMatrix::identity(n)); }

  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return basis_.cols(); }
  const QMatrix& basis() const { return basis_; }

  bool contains(const QVector& v) const;
  bool contains(const Subspace& w) const;
  // Rows form a basis of the linear forms vanishing on the subspace.
  QMatrix annihilator() const;

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.dim() == b.dim() && a.contains(b);
  }

 private:
  Subspace(std::size_t ambient, QMatrix basis) : ambient_(ambient), basis_(std::move(basis)) {}
  std::size_t ambient_ = 0;
  QMatrix basis_;
};

Subspace operator+(const Subspace& a, const Subspace& b);
Subspace intersect(const Subspace& a, const Subspace& b);
Subspace image_of(const QMatrix& m);
Subspace kernel_of(const QMatrix& m);
// M W
Subspace apply(const QMatrix& m, const Subspace& w);

struct EigenComponent {
  EigenvalueClass eigenvalue;
  Subspace space;
  SkewPencil restricted;
};

// Generalized eigenspaces of P = B^{-1} A in canonical class order.
std::vector<EigenComponent> eigen_split(const SkewPencil& p);

}  // namespace jkp
