#include "jkpencil/upoly.hpp"

#include <algorithm>
#include <sstream>

#include "jkpencil/error.hpp"

namespace jkp {

UPoly::UPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

UPoly::UPoly(const Rational& c) {
  if (sgn(c) != 0) c_.push_back(c);
}

UPoly UPoly::monomial(const Rational& c, std::size_t degree) {
  std::vector<Rational> v(degree + 1);
  v[degree] = c;
  return UPoly(std::move(v));
}

UPoly UPoly::linear(const Rational& r) { return UPoly(std::vector<Rational>{-r, Rational(1)}); }

void UPoly::trim() {
  while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
}

const Rational& UPoly::leading() const {
  if (c_.empty()) throw_internal("ZeroPolynomial", "leading coefficient of zero polynomial");
  return c_.back();
}

UPoly UPoly::monic() const {
  if (c_.empty()) return *this;
  UPoly r = *this;
  Rational inv = 1 / c_.back();
  for (auto& x : r.c_) x *= inv;
  return r;
}

UPoly UPoly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Rational> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
  return UPoly(std::move(d));
}

Rational UPoly::eval(const Rational& x) const {
  Rational acc = 0;
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

UPoly UPoly::operator-() const {
  UPoly r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

UPoly& UPoly::operator+=(const UPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

UPoly& UPoly::operator-=(const UPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

UPoly& UPoly::operator*=(const UPoly& o) {
  if (c_.empty() || o.c_.empty()) {
    c_.clear();
    return *this;
  }
  std::vector<Rational> r(c_.size() + o.c_.size() - 1);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (sgn(c_[i]) == 0) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  }
  c_ = std::move(r);
  trim();
  return *this;
}

UPoly& UPoly::operator*=(const Rational& s) {
  if (sgn(s) == 0) {
    c_.clear();
    return *this;
  }
  for (auto& x : c_) x *= s;
  return *this;
}

std::string UPoly::to_string(std::string_view var) const {
  if (c_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = c_.size(); i-- > 0;) {
    const Rational& c = c_[i];
    if (sgn(c) == 0) continue;
    Rational a = abs(c);
    if (first) {
      if (sgn(c) < 0) out << "-";
    } else {
      out << (sgn(c) < 0 ? "-" : "+");
    }
    first = false;
    if (i == 0) {
      out << jkp::to_string(a);
      continue;
    }
    if (a != 1) out << jkp::to_string(a) << "*";
    out << var;
    if (i > 1) out << "^" << i;
  }
  return out.str();
}

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
  if (b.is_zero()) throw_internal("DivisionByZero", "polynomial division by zero");
  if (a.degree() < b.degree()) return {UPoly(), a};
  std::vector<Rational> r = a.coefficients();
  const auto& bc = b.coefficients();
  const std::size_t db = bc.size() - 1;
  std::vector<Rational> q(r.size() - db);
  Rational inv = 1 / bc.back();
  for (std::size_t k = r.size(); k-- > db;) {
    if (sgn(r[k]) == 0) continue;
    Rational f = r[k] * inv;
    q[k - db] = f;
    for (std::size_t j = 0; j <= db; ++j) r[k - db + j] -= f * bc[j];
  }
  r.resize(db);
  return {UPoly(std::move(q)), UPoly(std::move(r))};
}

UPoly operator/(const UPoly& a, const UPoly& b) { return divmod(a, b).first; }
UPoly operator%(const UPoly& a, const UPoly& b) { return divmod(a, b).second; }

UPoly pow(const UPoly& p, unsigned e) {
  UPoly result(1), base = p;
  while (e > 0) {
    if (e & 1U) result *= base;
    e >>= 1U;
    if (e > 0) base *= base;
  }
  return result;
}

UPoly gcd(const UPoly& a, const UPoly& b) {
  UPoly x = a, y = b;
  while (!y.is_zero()) {
    UPoly r = x % y;
    x = std::move(y);
    y = r.monic();
  }
  return x.monic();
}

ExtendedGcd extended_gcd(const UPoly& a, const UPoly& b) {
  UPoly r0 = a, r1 = b, s0(1), s1, t0, t1(1);
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    UPoly s2 = s0 - q * s1;
    UPoly t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {UPoly(), UPoly(), UPoly()};
  Rational inv = 1 / r0.leading();
  return {r0 * inv, s0 * inv, t0 * inv};
}

UPoly compose(const UPoly& p, const UPoly& q) {
  UPoly acc;
  const auto& c = p.coefficients();
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * q + UPoly(c[i]);
  return acc;
}

UPoly reverse(const UPoly& p, std::size_t n) {
  if (p.is_zero()) return p;
  if (static_cast<std::size_t>(p.degree()) > n) {
    throw_internal("BadReverse", "reverse length below degree");
  }
  std::vector<Rational> c(n + 1);
  const auto& pc = p.coefficients();
  for (std::size_t i = 0; i < pc.size(); ++i) c[n - i] = pc[i];
  return UPoly(std::move(c));
}

Rational resultant(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return 0;
  const int m = a.degree(), n = b.degree();
  if (m == 0) {
    Rational r = 1;
    for (int i = 0; i < n; ++i) r *= a.leading();
    return r;
  }
  if (n == 0) {
    Rational r = 1;
    for (int i = 0; i < m; ++i) r *= b.leading();
    return r;
  }
  UPoly r = a % b;
  if (r.is_zero()) return 0;
  const int k = r.degree();
  Rational factor = 1;
  for (int i = 0; i < m - k; ++i) factor *= b.leading();
  if ((m * n) % 2 == 1) factor = -factor;
  return factor * resultant(b, r);
}

bool canonical_less(const UPoly& a, const UPoly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  // Linear monic factors t - r order by the root r.
  if (a.degree() == 1) {
    Rational ra = -a.coeff(0) / a.coeff(1), rb = -b.coeff(0) / b.coeff(1);
    if (ra != rb) return ra < rb;
    return false;
  }
  for (int i = a.degree(); i >= 0; --i) {
    const Rational ca = a.coeff(static_cast<std::size_t>(i));
    const Rational cb = b.coeff(static_cast<std::size_t>(i));
    if (ca != cb) return ca < cb;
  }
  return false;
}

std::vector<Factor> squarefree_decomposition(const UPoly& p) {
  std::vector<Factor> out;
  if (p.is_constant()) return out;
  UPoly f = p.monic();
  UPoly fp = f.derivative();
  UPoly a = gcd(f, fp);
  UPoly b = f / a;
  UPoly c = fp / a;
  UPoly d = c - b.derivative();
  unsigned i = 1;
  while (!b.is_constant()) {
    UPoly g = gcd(b, d);
    if (!g.is_constant()) out.push_back({g, i});
    b = b / g;
    c = d / g;
    d = c - b.derivative();
    ++i;
  }
  return out;
}

std::vector<Factor> factor_rational(const UPoly& p) {
  if (p.is_zero()) throw_precondition("ZeroPolynomial", "cannot factor the zero polynomial");
  if (p.degree() > kMaxFactorDegree) {
    throw_precondition("DegreeTooLarge",
                       "degree " + std::to_string(p.degree()) + " exceeds " +
                           std::to_string(kMaxFactorDegree));
  }
  std::vector<Factor> out;
  for (const auto& sf : squarefree_decomposition(p)) {
    for (auto& g : factor_squarefree(sf.factor)) out.push_back({std::move(g), sf.multiplicity});
  }
  std::sort(out.begin(), out.end(),
            [](const Factor& x, const Factor& y) { return canonical_less(x.factor, y.factor); });
  return out;
}

}  // namespace jkp
