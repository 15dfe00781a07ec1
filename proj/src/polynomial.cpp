#include "jkpencil/polynomial.hpp"

#include <algorithm>
#include <sstream>

#include "jkpencil/error.hpp"

namespace jkp {

namespace {

Polynomial::Term shifted(const Polynomial::Term& t, const Polynomial::Exponents& e, unsigned d,
                         const Rational& c) {
  Polynomial::Term r{t.exp, t.degree + d, t.coef * c};
  for (std::size_t i = 0; i < e.size(); ++i) r.exp[i] = static_cast<std::uint16_t>(r.exp[i] + e[i]);
  return r;
}

}  // namespace

Polynomial::Polynomial(const Rational& c) {
  if (sgn(c) != 0) terms_.push_back({{}, 0, c});
}

Polynomial::Polynomial(std::size_t nvars, const Rational& c) : nvars_(nvars) {
  if (sgn(c) != 0) terms_.push_back({Exponents(nvars, 0), 0, c});
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t index, unsigned power) {
  if (index >= nvars) throw_internal("VariableMismatch", "variable index out of range");
  Exponents e(nvars, 0);
  e[index] = static_cast<std::uint16_t>(power);
  return Polynomial(nvars, std::vector<Term>{{std::move(e), power, Rational(1)}});
}

Polynomial Polynomial::monomial(const Rational& c, Exponents exp) {
  const std::size_t n = exp.size();
  if (sgn(c) == 0) return zero(n);
  unsigned d = 0;
  for (auto x : exp) d += x;
  return Polynomial(n, std::vector<Term>{{std::move(exp), d, c}});
}

int Polynomial::compare(const Term& a, const Term& b) {
  if (a.degree != b.degree) return a.degree < b.degree ? -1 : 1;
  for (std::size_t i = 0; i < a.exp.size(); ++i) {
    if (a.exp[i] != b.exp[i]) return a.exp[i] < b.exp[i] ? -1 : 1;
  }
  return 0;
}

Polynomial Polynomial::from_terms(std::size_t nvars, std::vector<Term> terms) {
  for (auto& t : terms) {
    if (t.exp.size() != nvars) throw_internal("VariableMismatch", "term length differs from nvars");
    t.degree = 0;
    for (auto x : t.exp) t.degree += x;
  }
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return compare(a, b) > 0; });
  std::vector<Term> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && compare(out.back(), t) == 0) {
      out.back().coef += t.coef;
    } else {
      if (!out.empty() && sgn(out.back().coef) == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && sgn(out.back().coef) == 0) out.pop_back();
  return Polynomial(nvars, std::move(out));
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].degree == 0);
}

Rational Polynomial::constant_value() const {
  if (terms_.empty() || terms_.back().degree != 0) return 0;
  return terms_.back().coef;
}

bool Polynomial::is_one() const {
  return terms_.size() == 1 && terms_[0].degree == 0 && terms_[0].coef == 1;
}

const Polynomial::Term& Polynomial::leading_term() const {
  if (terms_.empty()) throw_internal("ZeroPolynomial", "leading term of zero polynomial");
  return terms_.front();
}

unsigned Polynomial::degree_in(std::size_t var) const {
  unsigned d = 0;
  for (const auto& t : terms_)
    if (var < t.exp.size()) d = std::max<unsigned>(d, t.exp[var]);
  return d;
}

std::vector<bool> Polynomial::used_variables() const {
  std::vector<bool> used(nvars_, false);
  for (const auto& t : terms_)
    for (std::size_t i = 0; i < nvars_; ++i)
      if (t.exp[i] != 0) used[i] = true;
  return used;
}

Polynomial Polynomial::monic() const {
  if (terms_.empty() || terms_.front().coef == 1) return *this;
  return *this * (1 / terms_.front().coef);
}

Polynomial Polynomial::derivative(std::size_t var) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (var >= t.exp.size() || t.exp[var] == 0) continue;
    Term d = t;
    d.coef *= t.exp[var];
    d.exp[var] = static_cast<std::uint16_t>(d.exp[var] - 1);
    d.degree -= 1;
    out.push_back(std::move(d));
  }
  // Every surviving term loses the same amount, so the order is unchanged.
  return Polynomial(nvars_, std::move(out));
}

Rational Polynomial::evaluate(std::span<const Rational> point) const {
  Rational acc = 0, m;
  for (const auto& t : terms_) {
    m = t.coef;
    for (std::size_t i = 0; i < t.exp.size(); ++i) {
      for (unsigned k = 0; k < t.exp[i]; ++k) m *= point[i];
    }
    acc += m;
  }
  return acc;
}

std::vector<Polynomial> Polynomial::coefficients_in(std::size_t var) const {
  std::vector<std::vector<Term>> groups(degree_in(var) + 1);
  for (const auto& t : terms_) {
    Term c = t;
    c.degree -= t.exp[var];
    c.exp[var] = 0;
    groups[t.exp[var]].push_back(std::move(c));
  }
  std::vector<Polynomial> out;
  out.reserve(groups.size());
  for (auto& g : groups) out.push_back(Polynomial(nvars_, std::move(g)));
  return out;
}

Polynomial Polynomial::from_coefficients_in(std::size_t nvars, std::size_t var,
                                            const std::vector<Polynomial>& coeffs) {
  std::vector<Term> all;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    for (const auto& t : coeffs[i].terms_) {
      Term c = t;
      if (c.exp.size() != nvars) c.exp.assign(nvars, 0);
      c.exp[var] = static_cast<std::uint16_t>(c.exp[var] + i);
      all.push_back(std::move(c));
    }
  }
  return from_terms(nvars, std::move(all));
}

Polynomial Polynomial::remap(std::size_t nvars, std::span<const std::size_t> map) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    Term c{Exponents(nvars, 0), t.degree, t.coef};
    for (std::size_t i = 0; i < t.exp.size(); ++i) c.exp[map[i]] = t.exp[i];
    out.push_back(std::move(c));
  }
  return from_terms(nvars, std::move(out));
}

void Polynomial::promote_to(std::size_t nvars) {
  if (nvars_ == nvars) return;
  if (nvars_ != 0) throw_internal("VariableMismatch", "polynomials over different variable sets");
  for (auto& t : terms_) t.exp.assign(nvars, 0);
  nvars_ = nvars;
}

std::size_t Polynomial::unify(Polynomial& a, const Polynomial& b) {
  if (a.nvars_ == b.nvars_ || b.nvars_ == 0) return a.nvars_;
  a.promote_to(b.nvars_);
  return a.nvars_;
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& t : r.terms_) t.coef = -t.coef;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.terms_.empty()) return *this;
  unify(*this, o);
  if (o.nvars_ != nvars_) {
    Polynomial p = o;
    p.promote_to(nvars_);
    return *this += p;
  }
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() && j < o.terms_.size()) {
    int c = compare(terms_[i], o.terms_[j]);
    if (c > 0) {
      out.push_back(std::move(terms_[i++]));
    } else if (c < 0) {
      out.push_back(o.terms_[j++]);
    } else {
      Term t = std::move(terms_[i++]);
      t.coef += o.terms_[j++].coef;
      if (sgn(t.coef) != 0) out.push_back(std::move(t));
    }
  }
  for (; i < terms_.size(); ++i) out.push_back(std::move(terms_[i]));
  for (; j < o.terms_.size(); ++j) out.push_back(o.terms_[j]);
  terms_ = std::move(out);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) { return *this += -o; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.terms_.empty() || b.terms_.empty()) {
    return Polynomial::zero(std::max(a.nvars_, b.nvars_));
  }
  if (a.nvars_ != b.nvars_) {
    Polynomial x = a, y = b;
    if (x.nvars_ == 0) x.promote_to(y.nvars_);
    if (y.nvars_ == 0) y.promote_to(x.nvars_);
    return x * y;
  }
  const std::size_t n = a.nvars_;
  // Multiplying by a single term keeps the order intact.
  if (a.terms_.size() == 1 || b.terms_.size() == 1) {
    const Polynomial& m = a.terms_.size() == 1 ? a : b;
    const Polynomial& p = a.terms_.size() == 1 ? b : a;
    const auto& mt = m.terms_[0];
    std::vector<Polynomial::Term> out;
    out.reserve(p.terms_.size());
    for (const auto& t : p.terms_) out.push_back(shifted(t, mt.exp, mt.degree, mt.coef));
    return Polynomial(n, std::move(out));
  }
  std::vector<Polynomial::Term> prods;
  prods.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_) prods.push_back(shifted(s, t.exp, t.degree, t.coef));
  std::sort(prods.begin(), prods.end(), [](const Polynomial::Term& x, const Polynomial::Term& y) {
    return Polynomial::compare(x, y) > 0;
  });
  std::vector<Polynomial::Term> out;
  out.reserve(prods.size());
  for (auto& t : prods) {
    if (!out.empty() && Polynomial::compare(out.back(), t) == 0) {
      out.back().coef += t.coef;
    } else {
      if (!out.empty() && sgn(out.back().coef) == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && sgn(out.back().coef) == 0) out.pop_back();
  return Polynomial(n, std::move(out));
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
  *this = *this * o;
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& s) {
  if (sgn(s) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coef *= s;
  return *this;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    const auto& s = a.terms_[i];
    const auto& t = b.terms_[i];
    if (s.coef != t.coef || s.degree != t.degree) return false;
    if (s.degree == 0) continue;  // constants compare across variable counts
    if (s.exp != t.exp) return false;
  }
  return true;
}

std::string Polynomial::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& t : terms_) {
    const int s = sgn(t.coef);
    if (s < 0) {
      out << "-";
    } else if (!first) {
      out << "+";
    }
    first = false;
    Rational a = abs(t.coef);
    bool need_star = false;
    if (t.degree == 0 || a != 1) {
      out << jkp::to_string(a);
      need_star = true;
    }
    for (std::size_t i = 0; i < t.exp.size(); ++i) {
      if (t.exp[i] == 0) continue;
      if (need_star) out << "*";
      out << (i < names.size() ? names[i] : "v" + std::to_string(i));
      if (t.exp[i] > 1) out << "^" << t.exp[i];
      need_star = true;
    }
  }
  return out.str();
}

std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw_internal("DivisionByZero", "polynomial division by zero");
  if (a.is_zero()) return Polynomial::zero(std::max(a.nvars(), b.nvars()));
  if (b.is_constant()) return a * (1 / b.constant_value());
  if (a.nvars() != b.nvars()) return std::nullopt;  // a is a constant, b is not
  if (a.total_degree() < b.total_degree()) return std::nullopt;
  const std::size_t n = a.nvars();
  const auto& lb = b.leading_term();
  std::vector<Polynomial::Term> q;
  Polynomial r = a;
  while (!r.is_zero()) {
    const auto& lt = r.leading_term();
    Polynomial::Exponents e(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (lt.exp[i] < lb.exp[i]) return std::nullopt;
      e[i] = static_cast<std::uint16_t>(lt.exp[i] - lb.exp[i]);
    }
    Rational c = lt.coef / lb.coef;
    Polynomial t = Polynomial::monomial(c, e);
    q.push_back(t.terms().front());
    r -= t * b;
  }
  return Polynomial::from_terms(n, std::move(q));
}

Polynomial pow(const Polynomial& p, unsigned e) {
  Polynomial result(p.nvars(), Rational(1)), base = p;
  while (e > 0) {
    if (e & 1U) result *= base;
    e >>= 1U;
    if (e > 0) base *= base;
  }
  return result;
}

}  // namespace jkp
