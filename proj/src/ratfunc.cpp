#include "jkpencil/ratfunc.hpp"

#include "jkpencil/error.hpp"

namespace jkp {

namespace {

Polynomial exact(const Polynomial& a, const Polynomial& b) {
  if (b.is_one()) return a;
  auto q = divide_exact(a, b);
  if (!q) throw_internal("InexactDivision", "expected exact polynomial division");
  return *q;
}

}  // namespace

RatFunc RatFunc::fraction(const Polynomial& num, const Polynomial& den) {
  if (den.is_zero()) throw_internal("DivisionByZero", "rational function with zero denominator");
  RatFunc r;
  if (num.is_zero()) {
    r.num_ = Polynomial::zero(std::max(num.nvars(), den.nvars()));
    return r;
  }
  if (den.is_constant()) {
    r.num_ = num * (1 / den.constant_value());
    return r;
  }
  Polynomial g = gcd(num, den);
  Polynomial n = exact(num, g), d = exact(den, g);
  const Rational lc = d.leading_coefficient();
  if (lc != 1) {
    n *= 1 / lc;
    d *= 1 / lc;
  }
  r.num_ = std::move(n);
  r.den_ = std::move(d);
  return r;
}

RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFunc& RatFunc::operator+=(const RatFunc& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_.is_one() && o.den_.is_one()) {
    num_ += o.num_;
    return *this;
  }
  if (den_ == o.den_) return *this = fraction(num_ + o.num_, den_);
  Polynomial g = gcd(den_, o.den_);
  if (g.is_one()) {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ = den_ * o.den_;
    return *this;
  }
  Polynomial d1 = exact(den_, g), d2 = exact(o.den_, g);
  Polynomial n = num_ * d2 + o.num_ * d1;
  Polynomial d = d1 * o.den_;
  if (n.is_zero()) return *this = RatFunc();
  Polynomial h = gcd(n, g);
  num_ = exact(n, h);
  den_ = exact(d, h);
  return *this;
}

RatFunc& RatFunc::operator-=(const RatFunc& o) { return *this += -o; }

RatFunc& RatFunc::operator*=(const RatFunc& o) {
  if (is_zero()) return *this;
  if (o.is_zero()) return *this = RatFunc();
  if (den_.is_one() && o.den_.is_one()) {
    num_ *= o.num_;
    return *this;
  }
  Polynomial g1 = o.den_.is_one() ? Polynomial(1) : gcd(num_, o.den_);
  Polynomial g2 = den_.is_one() ? Polynomial(1) : gcd(o.num_, den_);
  Polynomial n = exact(num_, g1) * exact(o.num_, g2);
  Polynomial d = exact(den_, g2) * exact(o.den_, g1);
  num_ = std::move(n);
  den_ = std::move(d);
  return *this;
}

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw_internal("DivisionByZero", "inverse of zero rational function");
  RatFunc r;
  const Rational lc = num_.leading_coefficient();
  r.num_ = den_ * (1 / lc);
  r.den_ = num_ * (1 / lc);
  return r;
}

RatFunc& RatFunc::operator/=(const RatFunc& o) { return *this *= o.inverse(); }

RatFunc RatFunc::derivative(std::size_t var) const {
  if (den_.is_one()) return RatFunc(num_.derivative(var));
  Polynomial dd = den_.derivative(var);
  if (dd.is_zero()) return fraction(num_.derivative(var), den_);
  return fraction(num_.derivative(var) * den_ - num_ * dd, den_ * den_);
}

Rational RatFunc::evaluate(std::span<const Rational> point) const {
  Rational d = den_.evaluate(point);
  if (sgn(d) == 0) throw_precondition("PoleAtPoint", "denominator vanishes at the point");
  return num_.evaluate(point) / d;
}

RatFunc RatFunc::remap(std::size_t nvars, std::span<const std::size_t> map) const {
  RatFunc r;
  r.num_ = num_.remap(nvars, map);
  r.den_ = den_.remap(nvars, map);
  return r;
}

std::string RatFunc::to_string(const std::vector<std::string>& names) const {
  if (den_.is_one()) return num_.to_string(names);
  std::string n = num_.to_string(names);
  if (num_.size() > 1) n = "(" + n + ")";
  return n + "/(" + den_.to_string(names) + ")";
}

}  // namespace jkp
