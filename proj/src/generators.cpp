#include "jkpencil/generators.hpp"

#include <algorithm>
#include <numeric>

namespace jkp {

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t i) {
  // splitmix64 finalizer over seed xor i
  std::uint64_t z = (seed ^ i) + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

QMatrix random_unimodular(std::size_t n, Rng& rng, std::size_t ops) {
  QMatrix C = QMatrix::identity(n);
  if (n == 0) return C;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  QMatrix P(n, n);
  for (std::size_t i = 0; i < n; ++i) P(i, perm[i]) = (rng() & 1) ? 1 : -1;
  if (ops == 0) ops = 2 * n;
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_int_distribution<int> coef(-2, 2);
  for (std::size_t k = 0; k < ops && n > 1; ++k) {
    const std::size_t i = idx(rng);
    std::size_t j = idx(rng);
    if (i == j) j = (j + 1) % n;
    int c = coef(rng);
    if (c == 0) c = 1;
    for (std::size_t r = 0; r < n; ++r) C(r, i) += C(r, j) * Rational(c);
  }
  return C * P;
}

std::vector<JKBlock> random_blocks(Rng& rng, const AssemblyOptions& opt) {
  std::vector<JKBlock> blocks;
  std::size_t dim = 0;
  std::uniform_int_distribution<long> eig(opt.eig_lo, opt.eig_hi);
  std::uniform_int_distribution<std::size_t> jsize(1, opt.max_jordan);
  std::uniform_int_distribution<std::size_t> ksize(0, opt.max_kronecker);
  std::uniform_int_distribution<int> kind(0, 9);
  const std::size_t target = std::uniform_int_distribution<std::size_t>(1, opt.max_dim)(rng);
  for (int attempt = 0; attempt < 40 && dim < target; ++attempt) {
    const int r = kind(rng);
    JKBlock b;
    if (opt.allow_kronecker && r >= 8) {
      b = JKBlock::kronecker(ksize(rng));
    } else if (opt.allow_infinity && r == 7) {
      b = JKBlock::jordan(EigenvalueClass::infinity(), jsize(rng));
    } else if (opt.allow_quadratic && r >= 5) {
      const long a = eig(rng);
      long bb = eig(rng);
      if (bb == 0) bb = 1;
      b = JKBlock::jordan(EigenvalueClass::irreducible(UPoly({Rational(a * a + bb * bb), Rational(-2 * a), Rational(1)})),
                          jsize(rng));
    } else {
      b = JKBlock::jordan(EigenvalueClass::finite(Rational(eig(rng))), jsize(rng));
    }
    if (dim + b.dimension() > opt.max_dim) continue;
    dim += b.dimension();
    blocks.push_back(b);
  }
  if (blocks.empty()) blocks.push_back(JKBlock::jordan(EigenvalueClass::finite(0), 1));
  sort_blocks(blocks);
  return blocks;
}

}  // namespace jkp

namespace jkp {

Polynomial random_polynomial(Rng& rng, std::size_t nvars, unsigned max_degree, std::size_t max_terms) {
  std::uniform_int_distribution<std::size_t> count(0, max_terms);
  std::uniform_int_distribution<long> coef(-3, 3);
  std::uniform_int_distribution<unsigned> deg(0, max_degree);
  std::uniform_int_distribution<std::size_t> var(0, nvars == 0 ? 0 : nvars - 1);
  std::vector<Polynomial::Term> terms;
  const std::size_t t = count(rng);
  for (std::size_t k = 0; k < t; ++k) {
    Polynomial::Term term;
    term.exp.assign(nvars, 0);
    const unsigned d = nvars == 0 ? 0 : deg(rng);
    for (unsigned e = 0; e < d; ++e) ++term.exp[var(rng)];
    term.degree = d;
    term.coef = Rational(coef(rng));
    if (sgn(term.coef) != 0) terms.push_back(std::move(term));
  }
  return Polynomial::from_terms(nvars, std::move(terms));
}

std::vector<Rational> random_point(Rng& rng, std::size_t nvars) {
  std::uniform_int_distribution<long> num(-7, 7), den(1, 5);
  std::vector<Rational> p;
  p.reserve(nvars);
  for (std::size_t i = 0; i < nvars; ++i) p.emplace_back(Rational(num(rng)) / Rational(den(rng)));
  return p;
}

}  // namespace jkp
