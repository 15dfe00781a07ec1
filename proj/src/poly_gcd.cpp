#include <algorithm>

#include "jkpencil/error.hpp"
#include "jkpencil/polynomial.hpp"
#include "jkpencil/upoly.hpp"

namespace jkp {

namespace {

Polynomial one_like(std::size_t nvars) { return Polynomial(nvars, Rational(1)); }

UPoly to_upoly(const Polynomial& p, std::size_t var) {
  std::vector<Rational> c(p.degree_in(var) + 1);
  for (const auto& t : p.terms()) c[t.exp[var]] = t.coef;
  return UPoly(std::move(c));
}

Polynomial from_upoly(const UPoly& u, std::size_t nvars, std::size_t var) {
  std::vector<Polynomial::Term> terms;
  const auto& c = u.coefficients();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (sgn(c[i]) == 0) continue;
    Polynomial::Exponents e(nvars, 0);
    e[var] = static_cast<std::uint16_t>(i);
    terms.push_back({std::move(e), 0, c[i]});
  }
  return Polynomial::from_terms(nvars, std::move(terms));
}

// gcd of a polynomial's coefficients with respect to var, folded into seed.
Polynomial fold_coefficients(Polynomial seed, const Polynomial& p, std::size_t var) {
  auto cs = p.coefficients_in(var);
  std::sort(cs.begin(), cs.end(),
            [](const Polynomial& x, const Polynomial& y) { return x.size() < y.size(); });
  for (const auto& c : cs) {
    if (c.is_zero()) continue;
    seed = gcd(seed, c);
    if (seed.is_constant()) return one_like(p.nvars());
  }
  return seed;
}

Polynomial content_in(const Polynomial& p, std::size_t var) {
  return fold_coefficients(Polynomial::zero(p.nvars()), p, var);
}

Polynomial primitive_in(const Polynomial& p, std::size_t var) {
  Polynomial c = content_in(p, var);
  if (c.is_constant()) return p;
  return *divide_exact(p, c);
}

// lc(b)^k * a reduced modulo b as polynomials in var.
Polynomial pseudo_remainder(Polynomial a, const Polynomial& b, std::size_t var) {
  const unsigned db = b.degree_in(var);
  const Polynomial lb = b.coefficients_in(var).back();
  while (!a.is_zero() && a.degree_in(var) >= db) {
    const unsigned da = a.degree_in(var);
    Polynomial la = a.coefficients_in(var).back();
    Polynomial shift = Polynomial::variable(a.nvars(), var, da - db);
    a = lb * a - la * shift * b;
  }
  return a;
}

}  // namespace

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  const std::size_t n = std::max(a.nvars(), b.nvars());
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return one_like(n);
  if (a == b) return a.monic();

  // One operand dividing the other is common when normalizing fractions.
  const Polynomial& small = a.size() <= b.size() ? a : b;
  const Polynomial& large = a.size() <= b.size() ? b : a;
  if (divide_exact(large, small)) return small.monic();

  const auto ua = a.used_variables();
  const auto ub = b.used_variables();
  for (std::size_t v = 0; v < n; ++v) {
    if (ua[v] == ub[v]) continue;
    const Polynomial& with = ua[v] ? a : b;
    const Polynomial& without = ua[v] ? b : a;
    return fold_coefficients(without, with, v).monic();
  }

  std::size_t used = 0, var = n, best = ~std::size_t{0};
  for (std::size_t v = 0; v < n; ++v) {
    if (!ua[v]) continue;
    ++used;
    const std::size_t d = std::max(a.degree_in(v), b.degree_in(v));
    if (d < best) {
      best = d;
      var = v;
    }
  }
  if (used == 1) return from_upoly(gcd(to_upoly(a, var), to_upoly(b, var)), n, var);

  const Polynomial ca = content_in(a, var);
  const Polynomial cb = content_in(b, var);
  const Polynomial c = gcd(ca, cb);
  Polynomial pa = ca.is_constant() ? a : *divide_exact(a, ca);
  Polynomial pb = cb.is_constant() ? b : *divide_exact(b, cb);
  if (pa.degree_in(var) < pb.degree_in(var)) std::swap(pa, pb);
  Polynomial g;
  for (;;) {
    Polynomial r = pseudo_remainder(pa, pb, var);
    if (r.is_zero()) {
      g = pb;
      break;
    }
    if (r.degree_in(var) == 0) {
      g = one_like(n);
      break;
    }
    pa = std::move(pb);
    pb = primitive_in(r, var);
  }
  return (c * g).monic();
}

}  // namespace jkp
