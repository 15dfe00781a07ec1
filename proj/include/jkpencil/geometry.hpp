#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jkpencil/jk.hpp"
#include "jkpencil/matrix.hpp"
#include "jkpencil/ratfunc.hpp"

namespace jkp {

using RMatrix = Matrix<RatFunc>;

// Ordered coordinate names; every coefficient on the chart is a RatFunc in
// these variables, variable i having index i.
class Chart {
 public:
  Chart() = default;
  // Throws Malformed DuplicateVariable.
  explicit Chart(std::vector<std::string> variables);

  std::size_t size() const { return vars_.size(); }
  const std::vector<std::string>& variables() const { return vars_; }
  const std::string& name(std::size_t i) const { return vars_.at(i); }
  // Throws Malformed UnknownVariable.
  std::size_t index(const std::string& name) const;
  RatFunc coordinate(std::size_t i) const;
  RatFunc coordinate(const std::string& name) const { return coordinate(index(name)); }
  RatFunc parse(const std::string& text) const { return parse_ratfunc(text, vars_); }

  friend bool operator==(const Chart& a, const Chart& b) { return a.vars_ == b.vars_; }

 private:
  std::vector<std::string> vars_;
};

// Throws ChartMismatch (precondition) unless a == b.
void require_same_chart(const Chart& a, const Chart& b);

struct VectorField {
  Chart chart;
  std::vector<RatFunc> components;

  static VectorField zero(const Chart& c);
  // The coordinate field d/dx_i.
  static VectorField coordinate(const Chart& c, std::size_t i);
  static VectorField coordinate(const Chart& c, const std::string& name) {
    return coordinate(c, c.index(name));
  }

  std::size_t dimension() const { return components.size(); }
  bool is_zero() const;
  // X(f) = sum_j X_j df/dx_j
  RatFunc apply(const RatFunc& f) const;
  std::string to_string() const;

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(const RatFunc& f);
  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  friend VectorField operator*(const RatFunc& f, VectorField a) { return a *= f; }
  friend VectorField operator*(VectorField a, const RatFunc& f) { return a *= f; }
  friend bool operator==(const VectorField& a, const VectorField& b) {
    return a.chart == b.chart && a.components == b.components;
  }
};

// Component matrix: column j holds fields[j].
RMatrix field_matrix(const std::vector<VectorField>& fields);

using IndexTuple = std::vector<std::size_t>;

// Forms of degree at most 3, stored on strictly increasing index tuples
// with nonzero coefficients only.
struct DiffForm {
  Chart chart;
  unsigned degree = 0;
  std::map<IndexTuple, RatFunc> coefficients;

  static DiffForm zero(const Chart& c, unsigned degree);
  static DiffForm function(const Chart& c, const RatFunc& f);
  static DiffForm differential(const Chart& c, std::size_t i);
  // Degree-2 form with omega(d_i, d_j) = M(i, j); M must be skew.
  static DiffForm from_matrix(const Chart& c, const RMatrix& M);

  // Adds f * dx_I for an arbitrary index list, sorting it with the
  // permutation sign; repeated indices contribute nothing.
  void add_term(IndexTuple idx, const RatFunc& f);
  const RatFunc& coefficient(const IndexTuple& idx) const;
  bool is_zero() const { return coefficients.empty(); }
  // Coefficient matrix of a 2-form.
  RMatrix matrix() const;
  std::string to_string() const;

  DiffForm& operator+=(const DiffForm& o);
  DiffForm& operator-=(const DiffForm& o);
  DiffForm& operator*=(const RatFunc& f);
  friend DiffForm operator+(DiffForm a, const DiffForm& b) { return a += b; }
  friend DiffForm operator-(DiffForm a, const DiffForm& b) { return a -= b; }
  friend DiffForm operator*(const RatFunc& f, DiffForm a) { return a *= f; }
  friend bool operator==(const DiffForm& a, const DiffForm& b) {
    return a.chart == b.chart && a.degree == b.degree && a.coefficients == b.coefficients;
  }
};

// Throws DegreeTooHigh (precondition) when the result would exceed degree 3.
DiffForm wedge(const DiffForm& a, const DiffForm& b);
// Throws DegreeTooHigh (precondition) for degree >= 3.
DiffForm exterior_derivative(const DiffForm& w);

// Gram matrix G(a, b) = omega(u_a, u_b) of a 2-form on a list of fields.
RMatrix gram_matrix(const DiffForm& omega, const std::vector<VectorField>& fields);

struct OperatorField {
  Chart chart;
  RMatrix matrix;

  static OperatorField identity(const Chart& c);
  static OperatorField scalar(const Chart& c, const RatFunc& f);
  VectorField apply(const VectorField& X) const;

  OperatorField& operator+=(const OperatorField& o);
  OperatorField& operator-=(const OperatorField& o);
  friend OperatorField operator+(OperatorField a, const OperatorField& b) { return a += b; }
  friend OperatorField operator-(OperatorField a, const OperatorField& b) { return a -= b; }
  friend OperatorField operator*(const OperatorField& a, const OperatorField& b);
  friend bool operator==(const OperatorField& a, const OperatorField& b) {
    return a.chart == b.chart && a.matrix == b.matrix;
  }
};

VectorField lie_bracket(const VectorField& X, const VectorField& Y);

// [PX, PY] - P[PX, Y] - P[X, PY] + P^2[X, Y]
VectorField nijenhuis(const OperatorField& P, const VectorField& X, const VectorField& Y);
// Checks coordinate pairs i < j only; the tensor is function-linear.
bool nijenhuis_vanishes(const OperatorField& P);

// P with omega0(u, P v) = omega1(u, v), i.e. matrix W0^{-1} W1.
// Throws DegenerateForm (precondition).
OperatorField operator_field(const DiffForm& omega0, const DiffForm& omega1);

struct CompatibilityReport {
  bool nondegenerate0 = false;
  bool closed0 = false;
  bool closed1 = false;
  bool nijenhuis_zero = false;  // false whenever omega0 is degenerate
  bool all() const { return nondegenerate0 && closed0 && closed1 && nijenhuis_zero; }
};

CompatibilityReport compatibility_check(const DiffForm& omega0, const DiffForm& omega1);

struct BracketWitness {
  std::size_t i = 0, j = 0;
  VectorField bracket;
};

struct InvolutivityVerdict {
  bool involutive = true;
  std::optional<BracketWitness> witness;  // first failing pair in (i, j) order
};

// Generic-point Frobenius test over the rational-function field. Throws
// DependentGenerators (precondition) when the generic rank is short.
InvolutivityVerdict involutivity_check(const std::vector<VectorField>& fields);

// Rational coordinates -> constant matrices -> jk_invariants of
// (A, B) = (omega1, omega0). Throws PoleAtPoint (precondition).
JKInvariants jk_invariants_at_point(const DiffForm& omega0, const DiffForm& omega1,
                                    const std::vector<Rational>& point);

QMatrix evaluate(const RMatrix& M, const std::vector<Rational>& point);
RMatrix to_rmatrix(const QMatrix& M);

// Span membership and equality over the rational-function field.
bool span_contains(const std::vector<VectorField>& gens, const VectorField& X);
bool same_span(const std::vector<VectorField>& a, const std::vector<VectorField>& b);

// Coefficients c_0..c_n of det(t E - P), by Faddeev-LeVerrier; c_n = 1.
std::vector<RatFunc> characteristic_coefficients(const OperatorField& P);

}  // namespace jkp
