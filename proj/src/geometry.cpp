#include "jkpencil/geometry.hpp"

#include <algorithm>
#include <set>

#include "jkpencil/parallel.hpp"
#include "jkpencil/pencil.hpp"

namespace jkp {

Chart::Chart(std::vector<std::string> variables) : vars_(std::move(variables)) {
  std::set<std::string> seen;
  for (const auto& v : vars_)
    if (!seen.insert(v).second) throw_malformed("DuplicateVariable", "chart variable '" + v + "' repeats");
}

std::size_t Chart::index(const std::string& name) const {
  const auto it = std::find(vars_.begin(), vars_.end(), name);
  if (it == vars_.end()) throw_malformed("UnknownVariable", "no chart variable named '" + name + "'");
  return static_cast<std::size_t>(it - vars_.begin());
}

RatFunc Chart::coordinate(std::size_t i) const { return RatFunc(Polynomial::variable(size(), i)); }

void require_same_chart(const Chart& a, const Chart& b) {
  if (!(a == b)) throw_precondition("ChartMismatch", "operands live on different charts");
}

// ---------------------------------------------------------------------------

VectorField VectorField::zero(const Chart& c) { return {c, std::vector<RatFunc>(c.size())}; }

VectorField VectorField::coordinate(const Chart& c, std::size_t i) {
  VectorField X = zero(c);
  X.components.at(i) = RatFunc(1);
  return X;
}

bool VectorField::is_zero() const {
  return std::all_of(components.begin(), components.end(), [](const RatFunc& f) { return f.is_zero(); });
}

RatFunc VectorField::apply(const RatFunc& f) const {
  RatFunc out;
  for (std::size_t j = 0; j < components.size(); ++j) {
    if (components[j].is_zero()) continue;
    RatFunc df = f.derivative(j);
    if (!df.is_zero()) out += components[j] * df;
  }
  return out;
}

std::string VectorField::to_string() const {
  std::string s;
  for (std::size_t j = 0; j < components.size(); ++j) {
    if (components[j].is_zero()) continue;
    if (!s.empty()) s += " + ";
    s += "(" + components[j].to_string(chart.variables()) + ")*d/d" + chart.name(j);
  }
  return s.empty() ? "0" : s;
}

VectorField& VectorField::operator+=(const VectorField& o) {
  require_same_chart(chart, o.chart);
  for (std::size_t j = 0; j < components.size(); ++j) components[j] += o.components[j];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  require_same_chart(chart, o.chart);
  for (std::size_t j = 0; j < components.size(); ++j) components[j] -= o.components[j];
  return *this;
}

VectorField& VectorField::operator*=(const RatFunc& f) {
  for (auto& c : components) c *= f;
  return *this;
}

RMatrix field_matrix(const std::vector<VectorField>& fields) {
  const std::size_t n = fields.empty() ? 0 : fields.front().dimension();
  RMatrix M(n, fields.size());
  for (std::size_t j = 0; j < fields.size(); ++j) {
    require_same_chart(fields.front().chart, fields[j].chart);
    for (std::size_t i = 0; i < n; ++i) M(i, j) = fields[j].components[i];
  }
  return M;
}

// ---------------------------------------------------------------------------

namespace {

constexpr unsigned kMaxDegree = 3;

// Sorts idx in place; returns the permutation sign, or 0 on a repeat.
int sort_with_sign(IndexTuple& idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i)
    for (std::size_t j = i; j > 0 && idx[j - 1] > idx[j]; --j) {
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  for (std::size_t i = 1; i < idx.size(); ++i)
    if (idx[i] == idx[i - 1]) return 0;
  return sign;
}

}  // namespace

DiffForm DiffForm::zero(const Chart& c, unsigned degree) {
  if (degree > kMaxDegree) throw_precondition("DegreeTooHigh", "forms above degree 3 are not supported");
  return {c, degree, {}};
}

DiffForm DiffForm::function(const Chart& c, const RatFunc& f) {
  DiffForm w = zero(c, 0);
  w.add_term({}, f);
  return w;
}

DiffForm DiffForm::differential(const Chart& c, std::size_t i) {
  DiffForm w = zero(c, 1);
  w.add_term({i}, RatFunc(1));
  return w;
}

DiffForm DiffForm::from_matrix(const Chart& c, const RMatrix& M) {
  if (M.rows() != c.size() || M.cols() != c.size()) throw_malformed("ShapeMismatch", "2-form matrix size");
  DiffForm w = zero(c, 2);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!M(i, i).is_zero()) throw_malformed("NotSkewSymmetric", "diagonal entry " + std::to_string(i));
    for (std::size_t j = i + 1; j < c.size(); ++j) {
      if (!(M(j, i) == -M(i, j)))
        throw_malformed("NotSkewSymmetric",
                        "entries (" + std::to_string(i) + "," + std::to_string(j) + ") and transpose");
      w.add_term({i, j}, M(i, j));
    }
  }
  return w;
}

void DiffForm::add_term(IndexTuple idx, const RatFunc& f) {
  if (idx.size() != degree) throw_internal("DegreeMismatch", "index tuple length differs from degree");
  if (f.is_zero()) return;
  for (std::size_t i : idx)
    if (i >= chart.size()) throw_internal("IndexOutOfRange", "form index beyond chart");
  const int sign = sort_with_sign(idx);
  if (sign == 0) return;
  auto it = coefficients.find(idx);
  if (it == coefficients.end()) {
    coefficients.emplace(std::move(idx), sign > 0 ? f : -f);
    return;
  }
  if (sign > 0)
    it->second += f;
  else
    it->second -= f;
  if (it->second.is_zero()) coefficients.erase(it);
}

const RatFunc& DiffForm::coefficient(const IndexTuple& idx) const {
  static const RatFunc kZero;
  const auto it = coefficients.find(idx);
  return it == coefficients.end() ? kZero : it->second;
}

RMatrix DiffForm::matrix() const {
  if (degree != 2) throw_internal("DegreeMismatch", "coefficient matrix needs a 2-form");
  RMatrix M(chart.size(), chart.size());
  for (const auto& [idx, f] : coefficients) {
    M(idx[0], idx[1]) = f;
    M(idx[1], idx[0]) = -f;
  }
  return M;
}

std::string DiffForm::to_string() const {
  std::string s;
  for (const auto& [idx, f] : coefficients) {
    if (!s.empty()) s += " + ";
    s += "(" + f.to_string(chart.variables()) + ")";
    for (std::size_t k = 0; k < idx.size(); ++k) s += (k ? "^d" : "*d") + chart.name(idx[k]);
  }
  return s.empty() ? "0" : s;
}

DiffForm& DiffForm::operator+=(const DiffForm& o) {
  require_same_chart(chart, o.chart);
  if (degree != o.degree) throw_internal("DegreeMismatch", "sum of forms of different degree");
  for (const auto& [idx, f] : o.coefficients) add_term(idx, f);
  return *this;
}

DiffForm& DiffForm::operator-=(const DiffForm& o) {
  require_same_chart(chart, o.chart);
  if (degree != o.degree) throw_internal("DegreeMismatch", "difference of forms of different degree");
  for (const auto& [idx, f] : o.coefficients) add_term(idx, -f);
  return *this;
}

DiffForm& DiffForm::operator*=(const RatFunc& f) {
  if (f.is_zero()) {
    coefficients.clear();
    return *this;
  }
  for (auto& [idx, c] : coefficients) c *= f;
  return *this;
}

DiffForm wedge(const DiffForm& a, const DiffForm& b) {
  require_same_chart(a.chart, b.chart);
  DiffForm out = DiffForm::zero(a.chart, a.degree + b.degree);
  for (const auto& [ia, fa] : a.coefficients)
    for (const auto& [ib, fb] : b.coefficients) {
      IndexTuple idx = ia;
      idx.insert(idx.end(), ib.begin(), ib.end());
      out.add_term(std::move(idx), fa * fb);
    }
  return out;
}

DiffForm exterior_derivative(const DiffForm& w) {
  if (w.degree >= kMaxDegree)
    throw_precondition("DegreeTooHigh", "exterior derivative of a form of degree " + std::to_string(w.degree));
  DiffForm out = DiffForm::zero(w.chart, w.degree + 1);
  for (const auto& [idx, f] : w.coefficients)
    for (std::size_t j = 0; j < w.chart.size(); ++j) {
      RatFunc df = f.derivative(j);
      if (df.is_zero()) continue;
      IndexTuple t{j};
      t.insert(t.end(), idx.begin(), idx.end());
      out.add_term(std::move(t), df);
    }
  return out;
}

RMatrix gram_matrix(const DiffForm& omega, const std::vector<VectorField>& fields) {
  const RMatrix F = field_matrix(fields);
  return F.transpose() * omega.matrix() * F;
}

// ---------------------------------------------------------------------------

OperatorField OperatorField::identity(const Chart& c) { return {c, RMatrix::identity(c.size())}; }

OperatorField OperatorField::scalar(const Chart& c, const RatFunc& f) {
  OperatorField P = identity(c);
  for (std::size_t i = 0; i < c.size(); ++i) P.matrix(i, i) = f;
  return P;
}

VectorField OperatorField::apply(const VectorField& X) const {
  require_same_chart(chart, X.chart);
  VectorField out = VectorField::zero(chart);
  for (std::size_t i = 0; i < chart.size(); ++i)
    for (std::size_t j = 0; j < chart.size(); ++j)
      if (!matrix(i, j).is_zero() && !X.components[j].is_zero()) out.components[i] += matrix(i, j) * X.components[j];
  return out;
}

OperatorField& OperatorField::operator+=(const OperatorField& o) {
  require_same_chart(chart, o.chart);
  matrix = matrix + o.matrix;
  return *this;
}

OperatorField& OperatorField::operator-=(const OperatorField& o) {
  require_same_chart(chart, o.chart);
  matrix = matrix - o.matrix;
  return *this;
}

OperatorField operator*(const OperatorField& a, const OperatorField& b) {
  require_same_chart(a.chart, b.chart);
  return {a.chart, a.matrix * b.matrix};
}

// ---------------------------------------------------------------------------

VectorField lie_bracket(const VectorField& X, const VectorField& Y) {
  require_same_chart(X.chart, Y.chart);
  VectorField out = VectorField::zero(X.chart);
  for (std::size_t i = 0; i < out.dimension(); ++i) out.components[i] = X.apply(Y.components[i]) - Y.apply(X.components[i]);
  return out;
}

VectorField nijenhuis(const OperatorField& P, const VectorField& X, const VectorField& Y) {
  require_same_chart(P.chart, X.chart);
  require_same_chart(X.chart, Y.chart);
  const VectorField PX = P.apply(X), PY = P.apply(Y);
  VectorField out = lie_bracket(PX, PY);
  out -= P.apply(lie_bracket(PX, Y) + lie_bracket(X, PY));
  out += P.apply(P.apply(lie_bracket(X, Y)));
  return out;
}

bool nijenhuis_vanishes(const OperatorField& P) {
  const Chart& c = P.chart;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j) pairs.emplace_back(i, j);
  std::vector<char> ok(pairs.size(), 0);
  parallel_for(pairs.size(), [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    ok[k] = nijenhuis(P, VectorField::coordinate(c, i), VectorField::coordinate(c, j)).is_zero();
  });
  return std::all_of(ok.begin(), ok.end(), [](char b) { return b != 0; });
}

OperatorField operator_field(const DiffForm& omega0, const DiffForm& omega1) {
  require_same_chart(omega0.chart, omega1.chart);
  auto inv = inverse(omega0.matrix());
  if (!inv) throw_precondition("DegenerateForm", "omega0 is degenerate as a rational-function matrix");
  return {omega0.chart, *inv * omega1.matrix()};
}

CompatibilityReport compatibility_check(const DiffForm& omega0, const DiffForm& omega1) {
  require_same_chart(omega0.chart, omega1.chart);
  if (omega0.degree != 2 || omega1.degree != 2) throw_precondition("DegreeMismatch", "compatibility needs two 2-forms");
  CompatibilityReport r;
  r.closed0 = exterior_derivative(omega0).is_zero();
  r.closed1 = exterior_derivative(omega1).is_zero();
  auto inv = inverse(omega0.matrix());
  r.nondegenerate0 = inv.has_value();
  if (inv) r.nijenhuis_zero = nijenhuis_vanishes({omega0.chart, *inv * omega1.matrix()});
  return r;
}

InvolutivityVerdict involutivity_check(const std::vector<VectorField>& fields) {
  InvolutivityVerdict v;
  const std::size_t r = fields.size();
  if (r == 0) return v;
  const RMatrix G = field_matrix(fields);
  const std::size_t n = G.rows();

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j) pairs.emplace_back(i, j);
  std::vector<VectorField> brackets(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t k) {
    brackets[k] = lie_bracket(fields[pairs[k].first], fields[pairs[k].second]);
  });

  // Eliminate on the generator columns only; a bracket lies in the span iff
  // its column vanishes below the generator pivots.
  RMatrix aug(n, r + pairs.size());
  aug.set_block(0, 0, G);
  for (std::size_t k = 0; k < pairs.size(); ++k)
    for (std::size_t i = 0; i < n; ++i) aug(i, r + k) = brackets[k].components[i];
  const auto ech = rref(std::move(aug), r);
  if (ech.rank() < r)
    throw_precondition("DependentGenerators", "generic rank " + std::to_string(ech.rank()) + " is below the " +
                                                  std::to_string(r) + " generators");
  for (std::size_t k = 0; k < pairs.size(); ++k)
    for (std::size_t i = r; i < n; ++i)
      if (!ech.reduced(i, r + k).is_zero()) {
        v.involutive = false;
        v.witness = BracketWitness{pairs[k].first, pairs[k].second, brackets[k]};
        return v;
      }
  return v;
}

QMatrix evaluate(const RMatrix& M, const std::vector<Rational>& point) {
  QMatrix out(M.rows(), M.cols());
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j)
      if (!M(i, j).is_zero()) out(i, j) = M(i, j).evaluate(point);
  return out;
}

RMatrix to_rmatrix(const QMatrix& M) {
  RMatrix out(M.rows(), M.cols());
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j)
      if (sgn(M(i, j)) != 0) out(i, j) = RatFunc(M(i, j));
  return out;
}

bool span_contains(const std::vector<VectorField>& gens, const VectorField& X) {
  if (gens.empty()) return X.is_zero();
  const RMatrix G = field_matrix(gens);
  return rank(hstack(G, field_matrix({X}))) == rank(G);
}

bool same_span(const std::vector<VectorField>& a, const std::vector<VectorField>& b) {
  if (a.empty() || b.empty()) {
    const auto& other = a.empty() ? b : a;
    return other.empty() || rank(field_matrix(other)) == 0;
  }
  const RMatrix A = field_matrix(a), B = field_matrix(b);
  const std::size_t ra = rank(A);
  return ra == rank(B) && ra == rank(hstack(A, B));
}

std::vector<RatFunc> characteristic_coefficients(const OperatorField& P) {
  const std::size_t n = P.chart.size();
  std::vector<RatFunc> c(n + 1);
  c[n] = RatFunc(1);
  RMatrix M(n, n);
  const RMatrix& A = P.matrix;
  for (std::size_t k = 1; k <= n; ++k) {
    M = A * M;
    for (std::size_t i = 0; i < n; ++i) M(i, i) += c[n - k + 1];
    const RMatrix AM = A * M;
    RatFunc tr;
    for (std::size_t i = 0; i < n; ++i) tr += AM(i, i);
    c[n - k] = -tr / RatFunc(static_cast<long>(k));
  }
  return c;
}

JKInvariants jk_invariants_at_point(const DiffForm& omega0, const DiffForm& omega1,
                                    const std::vector<Rational>& point) {
  require_same_chart(omega0.chart, omega1.chart);
  if (point.size() != omega0.chart.size()) throw_malformed("ShapeMismatch", "point length differs from chart size");
  return jk_invariants(make_pencil(evaluate(omega1.matrix(), point), evaluate(omega0.matrix(), point)));
}

}  // namespace jkp
