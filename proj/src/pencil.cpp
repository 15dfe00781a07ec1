#include "jkpencil/pencil.hpp"

#include <sstream>

namespace jkp {

SkewPencil make_pencil(QMatrix A, QMatrix B) {
  const std::size_t n = A.rows();
  if (A.cols() != n || B.rows() != n || B.cols() != n) {
    throw_malformed("ShapeMismatch", "A and B must both be n x n");
  }
  for (const auto* m : {&A, &B}) {
    const char* name = m == &A ? "A" : "B";
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        if ((*m)(i, j) != -(*m)(j, i)) {
          std::ostringstream msg;
          msg << name << "[" << i << "][" << j << "] = " << to_string((*m)(i, j)) << " but " << name
              << "[" << j << "][" << i << "] = " << to_string((*m)(j, i));
          throw_malformed("NotSkewSymmetric", msg.str());
        }
  }
  return {std::move(A), std::move(B)};
}

SkewPencil congruence(const SkewPencil& p, const QMatrix& C) {
  const QMatrix Ct = C.transpose();
  return {Ct * p.A * C, Ct * p.B * C};
}

SkewPencil restrict_pencil(const SkewPencil& p, const QMatrix& V) { return congruence(p, V); }

namespace {

UPoly interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
  UPoly acc;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (sgn(ys[i]) == 0) continue;
    UPoly term(ys[i]);
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (j == i) continue;
      term *= UPoly::linear(xs[j]);
      term *= 1 / (xs[i] - xs[j]);
    }
    acc += term;
  }
  return acc;
}

UPoly det_pencil(const QMatrix& A, const QMatrix& B) {
  const std::size_t n = A.rows();
  std::vector<Rational> xs, ys;
  for (std::size_t i = 0; i <= n; ++i) {
    Rational t(static_cast<long>(i));
    xs.push_back(t);
    ys.push_back(determinant(B * t - A));
  }
  return interpolate(xs, ys);
}

}  // namespace

UPoly char_poly(const SkewPencil& p) {
  UPoly chi = det_pencil(p.A, p.B);
  if (chi.degree() == static_cast<int>(p.n())) chi = chi.monic();
  return chi;
}

UPoly matrix_char_poly(const QMatrix& M) { return det_pencil(M, QMatrix::identity(M.rows())); }

QMatrix recursion_operator(const SkewPencil& p) {
  auto inv = inverse(p.B);
  if (!inv) throw_precondition("DegenerateB", "the form B is degenerate");
  return *inv * p.A;
}

QMatrix poly_at(const UPoly& f, const QMatrix& M) {
  const std::size_t n = M.rows();
  QMatrix acc(n, n);
  const auto& c = f.coefficients();
  for (std::size_t i = c.size(); i-- > 0;) {
    acc = acc * M;
    for (std::size_t k = 0; k < n; ++k) acc(k, k) += c[i];
  }
  return acc;
}

std::optional<Rational> rational_sqrt(const Rational& q) {
  if (sgn(q) < 0) return std::nullopt;
  if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t())) {
    return std::nullopt;
  }
  Rational r;
  r.get_num() = sqrt(q.get_num());
  r.get_den() = sqrt(q.get_den());
  return r;
}

QMatrix semisimple_part(const QMatrix& M, const UPoly& f) {
  const UPoly df = f.derivative();
  QMatrix S = M;
  const std::size_t n = M.rows();
  std::size_t limit = 2;
  while ((std::size_t{1} << (limit - 2)) < n) ++limit;
  for (std::size_t it = 0; it < limit; ++it) {
    const QMatrix fs = poly_at(f, S);
    if (fs.is_zero()) return S;
    auto inv = inverse(poly_at(df, S));
    if (!inv) throw_internal("NewtonStalled", "f'(S) is singular; f is not squarefree");
    S = S - fs * *inv;
  }
  if (!poly_at(f, S).is_zero()) throw_internal("NewtonStalled", "semisimple part did not converge");
  return S;
}

// ---------------------------------------------------------------------------

EigenvalueClass EigenvalueClass::finite(const Rational& value) {
  EigenvalueClass c;
  c.kind_ = Kind::Finite;
  c.value_ = value;
  c.poly_ = UPoly::linear(value);
  return c;
}

EigenvalueClass EigenvalueClass::irreducible(const UPoly& f) {
  if (f.degree() < 2) throw_internal("BadClass", "irreducible class needs degree >= 2");
  EigenvalueClass c;
  c.kind_ = Kind::Irreducible;
  c.poly_ = f.monic();
  return c;
}

EigenvalueClass EigenvalueClass::infinity() {
  EigenvalueClass c;
  c.kind_ = Kind::Infinity;
  c.poly_ = UPoly(1);
  return c;
}

EigenvalueClass EigenvalueClass::from_factor(const UPoly& f) {
  if (f.degree() == 1) return finite(-f.coeff(0) / f.coeff(1));
  return irreducible(f);
}

Rational EigenvalueClass::alpha() const { return -poly_.coeff(1) / 2; }

Rational EigenvalueClass::beta_squared() const {
  const Rational c1 = poly_.coeff(1);
  return poly_.coeff(0) - c1 * c1 / 4;
}

std::optional<Rational> EigenvalueClass::beta() const {
  if (!is_quadratic()) return std::nullopt;
  const Rational b2 = beta_squared();
  if (sgn(b2) <= 0) return std::nullopt;
  return rational_sqrt(b2);
}

bool EigenvalueClass::rationally_realizable() const {
  return !is_irreducible() || beta().has_value();
}

std::string EigenvalueClass::label() const {
  switch (kind_) {
    case Kind::Finite:
      return to_string(value_);
    case Kind::Infinity:
      return "inf";
    case Kind::Irreducible:
      break;
  }
  return poly_.to_string("t");
}

bool operator==(const EigenvalueClass& a, const EigenvalueClass& b) {
  return a.kind_ == b.kind_ && a.poly_ == b.poly_;
}

bool operator<(const EigenvalueClass& a, const EigenvalueClass& b) {
  if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) < static_cast<int>(b.kind_);
  if (a.kind_ == EigenvalueClass::Kind::Infinity) return false;
  return canonical_less(a.poly_, b.poly_);
}

// ---------------------------------------------------------------------------

Subspace Subspace::span(const QMatrix& m) {
  const auto e = rref(m);
  return Subspace(m.rows(), m.select_columns(e.pivots));
}

Subspace Subspace::span(std::size_t ambient, const std::vector<QVector>& vectors) {
  if (vectors.empty()) return Subspace(ambient);
  return span(QMatrix::from_columns(ambient, vectors));
}

bool Subspace::contains(const QVector& v) const {
  if (dim() == ambient_) return true;
  bool zero = true;
  for (const auto& x : v)
    if (sgn(x) != 0) zero = false;
  if (zero) return true;
  if (dim() == 0) return false;
  return solve(basis_, v).has_value();
}

bool Subspace::contains(const Subspace& w) const {
  if (w.dim() == 0 || dim() == ambient_) return true;
  if (w.dim() > dim()) return false;
  return rank(hstack(basis_, w.basis_)) == dim();
}

QMatrix Subspace::annihilator() const {
  if (dim() == 0) return QMatrix::identity(ambient_);
  return kernel(basis_.transpose()).transpose();
}

Subspace operator+(const Subspace& a, const Subspace& b) {
  if (a.dim() == 0) return b;
  if (b.dim() == 0) return a;
  return Subspace::span(hstack(a.basis(), b.basis()));
}

Subspace intersect(const Subspace& a, const Subspace& b) {
  const std::size_t n = a.ambient();
  if (a.dim() == 0 || b.dim() == 0) return Subspace(n);
  if (a.dim() == n) return b;
  if (b.dim() == n) return a;
  // x in a and b iff annihilator(b) x = 0 with x = A c.
  const QMatrix k = kernel(b.annihilator() * a.basis());
  if (k.cols() == 0) return Subspace(n);
  return Subspace::span(a.basis() * k);
}

Subspace image_of(const QMatrix& m) { return Subspace::span(m); }

Subspace kernel_of(const QMatrix& m) {
  const QMatrix k = kernel(m);
  if (k.cols() == 0) return Subspace(m.cols());
  return Subspace::span(k);
}

Subspace apply(const QMatrix& m, const Subspace& w) {
  if (w.dim() == 0) return Subspace(m.rows());
  return Subspace::span(m * w.basis());
}

std::vector<EigenComponent> eigen_split(const SkewPencil& p) {
  const QMatrix P = recursion_operator(p);
  std::vector<EigenComponent> out;
  if (p.n() == 0) return out;
  for (const auto& f : factor_rational(matrix_char_poly(P))) {
    const QMatrix K = kernel(poly_at(pow(f.factor, f.multiplicity), P));
    const Subspace space = Subspace::span(K);
    out.push_back({EigenvalueClass::from_factor(f.factor), space, restrict_pencil(p, space.basis())});
  }
  return out;
}

}  // namespace jkp
