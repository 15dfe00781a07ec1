// Factorization of squarefree polynomials over Q by the Zassenhaus method:
// factor modulo a small prime, Hensel-lift to a modulus above the Mignotte
// bound, then recombine lifted factors by trial division over Z.
#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>

#include "jkpencil/error.hpp"
#include "jkpencil/upoly.hpp"

namespace jkp {

namespace {

using ZPoly = std::vector<Integer>;
using FpPoly = std::vector<std::int64_t>;

template <class P>
void trim(P& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int deg(const FpPoly& a) { return static_cast<int>(a.size()) - 1; }

std::int64_t md(std::int64_t a, std::int64_t p) {
  a %= p;
  return a < 0 ? a + p : a;
}

std::int64_t pow_mod(std::int64_t b, std::int64_t e, std::int64_t p) {
  std::int64_t r = 1;
  b = md(b, p);
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

std::int64_t inv_mod(std::int64_t a, std::int64_t p) { return pow_mod(a, p - 2, p); }

FpPoly fp_sub(FpPoly a, const FpPoly& b, std::int64_t p) {
  if (b.size() > a.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = md(a[i] - b[i], p);
  trim(a);
  return a;
}

FpPoly fp_add(FpPoly a, const FpPoly& b, std::int64_t p) {
  if (b.size() > a.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + b[i]) % p;
  trim(a);
  return a;
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b, std::int64_t p) {
  if (a.empty() || b.empty()) return {};
  FpPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  trim(r);
  return r;
}

std::pair<FpPoly, FpPoly> fp_divmod(FpPoly a, const FpPoly& b, std::int64_t p) {
  const int db = deg(b);
  if (deg(a) < db) return {{}, a};
  FpPoly q(a.size() - b.size() + 1, 0);
  const std::int64_t inv = inv_mod(b.back(), p);
  for (int k = deg(a); k >= db; --k) {
    std::int64_t c = a[k] * inv % p;
    if (c == 0) continue;
    q[k - db] = c;
    for (int j = 0; j <= db; ++j) a[k - db + j] = md(a[k - db + j] - c * b[j], p);
  }
  a.resize(db);
  trim(a);
  trim(q);
  return {q, a};
}

FpPoly fp_rem(const FpPoly& a, const FpPoly& b, std::int64_t p) { return fp_divmod(a, b, p).second; }

FpPoly fp_monic(FpPoly a, std::int64_t p) {
  if (a.empty()) return a;
  const std::int64_t inv = inv_mod(a.back(), p);
  for (auto& c : a) c = c * inv % p;
  return a;
}

FpPoly fp_gcd(FpPoly a, FpPoly b, std::int64_t p) {
  while (!b.empty()) {
    FpPoly r = fp_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return fp_monic(a, p);
}

// s*a + t*b = 1 for coprime a, b.
std::pair<FpPoly, FpPoly> fp_bezout(const FpPoly& a, const FpPoly& b, std::int64_t p) {
  FpPoly r0 = a, r1 = b, s0{1}, s1, t0, t1{1};
  while (!r1.empty()) {
    auto [q, r] = fp_divmod(r0, r1, p);
    FpPoly s2 = fp_sub(s0, fp_mul(q, s1, p), p);
    FpPoly t2 = fp_sub(t0, fp_mul(q, t1, p), p);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (deg(r0) != 0) throw_internal("HenselFailure", "factors not coprime modulo p");
  const std::int64_t inv = inv_mod(r0[0], p);
  for (auto& c : s0) c = c * inv % p;
  for (auto& c : t0) c = c * inv % p;
  return {s0, t0};
}

FpPoly fp_powmod(FpPoly base, const Integer& e, const FpPoly& m, std::int64_t p) {
  FpPoly r{1};
  base = fp_rem(base, m, p);
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    r = fp_rem(fp_mul(r, r, p), m, p);
    if (mpz_tstbit(e.get_mpz_t(), i)) r = fp_rem(fp_mul(r, base, p), m, p);
  }
  return r;
}

FpPoly fp_derivative(const FpPoly& a, std::int64_t p) {
  FpPoly d;
  for (std::size_t i = 1; i < a.size(); ++i) d.push_back(a[i] * static_cast<std::int64_t>(i) % p);
  trim(d);
  return d;
}

void equal_degree_split(const FpPoly& g, int d, std::int64_t p, std::mt19937_64& rng,
                        std::vector<FpPoly>& out) {
  if (deg(g) == d) {
    out.push_back(g);
    return;
  }
  Integer e;
  mpz_ui_pow_ui(e.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(d));
  e = (e - 1) / 2;
  std::uniform_int_distribution<std::int64_t> coef(0, p - 1);
  for (;;) {
    FpPoly a(static_cast<std::size_t>(deg(g)));
    for (auto& c : a) c = coef(rng);
    trim(a);
    if (deg(a) < 1) continue;
    FpPoly b = fp_sub(fp_powmod(a, e, g, p), FpPoly{1}, p);
    FpPoly u = fp_gcd(g, b, p);
    if (deg(u) > 0 && deg(u) < deg(g)) {
      equal_degree_split(u, d, p, rng, out);
      equal_degree_split(fp_monic(fp_divmod(g, u, p).first, p), d, p, rng, out);
      return;
    }
  }
}

// Monic irreducible factors of a monic squarefree polynomial over F_p.
std::vector<FpPoly> fp_factor(FpPoly f, std::int64_t p) {
  std::mt19937_64 rng(0x5eed + static_cast<std::uint64_t>(p));
  std::vector<FpPoly> out;
  const FpPoly x{0, 1};
  FpPoly h = x;
  Integer pz(static_cast<long>(p));
  for (int d = 1; 2 * d <= deg(f); ++d) {
    h = fp_powmod(h, pz, f, p);
    FpPoly g = fp_gcd(f, fp_sub(h, x, p), p);
    if (deg(g) > 0) {
      equal_degree_split(g, d, p, rng, out);
      f = fp_monic(fp_divmod(f, g, p).first, p);
      h = fp_rem(h, f, p);
    }
  }
  if (deg(f) > 0) out.push_back(f);
  return out;
}

FpPoly reduce(const ZPoly& a, std::int64_t p) {
  FpPoly r(a.size());
  Integer pz(static_cast<long>(p)), t;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mpz_fdiv_r(t.get_mpz_t(), a[i].get_mpz_t(), pz.get_mpz_t());
    r[i] = t.get_si();
  }
  trim(r);
  return r;
}

ZPoly lift_fp(const FpPoly& a) {
  ZPoly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = static_cast<long>(a[i]);
  return r;
}

ZPoly z_mul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1, Integer(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

void z_mod(ZPoly& a, const Integer& m) {
  for (auto& c : a) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
  trim(a);
}

void z_symmetric(ZPoly& a, const Integer& m) {
  z_mod(a, m);
  Integer half = m / 2;
  for (auto& c : a)
    if (c > half) c -= m;
  trim(a);
}

// Lift F = g0*h0 (mod p), h0 monic, to F = g*h (mod p^k).
std::pair<ZPoly, ZPoly> hensel_lift(const ZPoly& F, const FpPoly& g0, const FpPoly& h0,
                                    std::int64_t p, unsigned k) {
  auto [s, t] = fp_bezout(g0, h0, p);
  ZPoly g = lift_fp(g0), h = lift_fp(h0);
  Integer pz(static_cast<long>(p)), pj = pz;
  Integer M;
  mpz_pow_ui(M.get_mpz_t(), pz.get_mpz_t(), k);
  Integer lc = F.back();
  mpz_fdiv_r(lc.get_mpz_t(), lc.get_mpz_t(), M.get_mpz_t());
  g.back() = lc;
  for (unsigned j = 1; j < k; ++j) {
    ZPoly diff = F;
    ZPoly gh = z_mul(g, h);
    if (gh.size() > diff.size()) diff.resize(gh.size(), Integer(0));
    for (std::size_t i = 0; i < gh.size(); ++i) diff[i] -= gh[i];
    trim(diff);
    ZPoly e(diff.size());
    for (std::size_t i = 0; i < diff.size(); ++i) {
      if (!mpz_divisible_p(diff[i].get_mpz_t(), pj.get_mpz_t())) {
        throw_internal("HenselFailure", "lifting invariant broken");
      }
      e[i] = diff[i] / pj;
    }
    FpPoly ep = reduce(e, p);
    auto [q, dh] = fp_divmod(fp_mul(s, ep, p), h0, p);
    FpPoly dg = fp_add(fp_mul(g0, q, p), fp_mul(t, ep, p), p);
    ZPoly dgz = lift_fp(dg), dhz = lift_fp(dh);
    Integer next = pj * pz;
    if (g.size() < dgz.size()) g.resize(dgz.size(), Integer(0));
    for (std::size_t i = 0; i < dgz.size(); ++i) g[i] += pj * dgz[i];
    if (h.size() < dhz.size()) h.resize(dhz.size(), Integer(0));
    for (std::size_t i = 0; i < dhz.size(); ++i) h[i] += pj * dhz[i];
    z_mod(g, next);
    z_mod(h, next);
    pj = next;
  }
  return {g, h};
}

std::vector<int> small_primes() {
  std::vector<int> primes;
  for (int n = 3; n < 4000; n += 2) {
    bool prime = true;
    for (int d = 3; d * d <= n; d += 2)
      if (n % d == 0) {
        prime = false;
        break;
      }
    if (prime) primes.push_back(n);
  }
  return primes;
}

UPoly to_upoly(const ZPoly& a) {
  std::vector<Rational> c(a.begin(), a.end());
  return UPoly(std::move(c));
}

ZPoly primitive(ZPoly a) {
  Integer g = 0;
  for (const auto& c : a) g = gcd(g, c);
  if (g != 0)
    for (auto& c : a) c /= g;
  if (!a.empty() && a.back() < 0)
    for (auto& c : a) c = -c;
  return a;
}

ZPoly to_primitive_integer(const UPoly& p) {
  Integer l = 1;
  for (const auto& c : p.coefficients()) l = lcm(l, c.get_den());
  ZPoly z;
  for (const auto& c : p.coefficients()) z.push_back(c.get_num() * (l / c.get_den()));
  return primitive(z);
}

// Exact quotient of a by b over Z, if b divides a.
std::optional<ZPoly> z_divide(const ZPoly& a, const ZPoly& b) {
  if (a.size() < b.size()) return std::nullopt;
  ZPoly r = a;
  ZPoly q(a.size() - b.size() + 1, Integer(0));
  for (std::size_t k = a.size(); k-- > b.size() - 1;) {
    if (r[k] == 0) continue;
    if (!mpz_divisible_p(r[k].get_mpz_t(), b.back().get_mpz_t())) return std::nullopt;
    Integer c = r[k] / b.back();
    q[k - (b.size() - 1)] = c;
    for (std::size_t j = 0; j < b.size(); ++j) r[k - (b.size() - 1) + j] -= c * b[j];
  }
  for (const auto& c : r)
    if (c != 0) return std::nullopt;
  trim(q);
  return q;
}

std::vector<ZPoly> zassenhaus(const ZPoly& f) {
  const int n = static_cast<int>(f.size()) - 1;
  if (n <= 1) return {f};
  const Integer lc = f.back();

  std::int64_t best_p = 0;
  std::vector<FpPoly> best;
  int good = 0;
  for (int pi : small_primes()) {
    const std::int64_t p = pi;
    if (mpz_divisible_ui_p(lc.get_mpz_t(), static_cast<unsigned long>(p))) continue;
    FpPoly fp = fp_monic(reduce(f, p), p);
    if (deg(fp_gcd(fp, fp_derivative(fp, p), p)) != 0) continue;
    auto fac = fp_factor(fp, p);
    if (best_p == 0 || fac.size() < best.size()) {
      best_p = p;
      best = std::move(fac);
    }
    if (++good == 5 || best.size() == 1) break;
  }
  if (best_p == 0) throw_internal("FactorFailure", "no suitable prime found");
  if (best.size() == 1) return {f};
  const std::int64_t p = best_p;

  Integer norm2 = 0;
  for (const auto& c : f) norm2 += c * c;
  Integer bound = sqrt(norm2) + 1;
  bound *= abs(lc);
  mpz_mul_2exp(bound.get_mpz_t(), bound.get_mpz_t(), static_cast<mp_bitcnt_t>(n));
  bound *= 2;
  unsigned k = 1;
  Integer M(static_cast<long>(p));
  while (M <= bound) {
    M *= p;
    ++k;
  }

  // Split the leading coefficient into the cofactor and peel off one monic
  // factor at a time.
  const std::size_t r = best.size();
  std::vector<ZPoly> lifted;
  ZPoly cur = f;
  z_mod(cur, M);
  for (std::size_t i = 0; i + 1 < r; ++i) {
    FpPoly g0 = reduce(ZPoly{lc}, p);
    for (std::size_t j = i + 1; j < r; ++j) g0 = fp_mul(g0, best[j], p);
    auto [g, h] = hensel_lift(cur, g0, best[i], p, k);
    lifted.push_back(std::move(h));
    cur = std::move(g);
  }
  {
    Integer inv;
    mpz_invert(inv.get_mpz_t(), cur.back().get_mpz_t(), M.get_mpz_t());
    for (auto& c : cur) c *= inv;
    z_mod(cur, M);
    lifted.push_back(std::move(cur));
  }

  std::vector<ZPoly> result;
  std::vector<std::size_t> remaining(r);
  for (std::size_t i = 0; i < r; ++i) remaining[i] = i;
  ZPoly fcur = f;
  std::size_t s = 1;
  while (2 * s <= remaining.size()) {
    bool found = false;
    std::vector<std::size_t> idx(s);
    for (std::size_t i = 0; i < s; ++i) idx[i] = i;
    for (;;) {
      ZPoly g{fcur.back()};
      for (std::size_t i : idx) {
        g = z_mul(g, lifted[remaining[i]]);
        z_mod(g, M);
      }
      z_symmetric(g, M);
      g = primitive(g);
      if (auto q = z_divide(fcur, g)) {
        result.push_back(g);
        fcur = *q;
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < remaining.size(); ++i)
          if (std::find(idx.begin(), idx.end(), i) == idx.end()) rest.push_back(remaining[i]);
        remaining = std::move(rest);
        found = true;
        break;
      }
      // next combination
      std::size_t pos = s;
      while (pos > 0 && idx[pos - 1] == remaining.size() - s + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t i = pos; i < s; ++i) idx[i] = idx[i - 1] + 1;
    }
    if (!found) ++s;
  }
  if (fcur.size() > 1) result.push_back(fcur);
  return result;
}

}  // namespace

std::vector<UPoly> factor_squarefree(const UPoly& p) {
  std::vector<UPoly> out;
  if (p.degree() < 1) return out;
  UPoly q = p.monic();
  if (sgn(q.coeff(0)) == 0) {
    out.push_back(UPoly::variable());
    q = q / UPoly::variable();
  }
  if (q.degree() == 1) {
    out.push_back(q);
  } else if (q.degree() > 1) {
    for (const auto& z : zassenhaus(to_primitive_integer(q))) out.push_back(to_upoly(z).monic());
  }
  return out;
}

}  // namespace jkp
