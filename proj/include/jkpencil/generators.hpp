#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "jkpencil/jk.hpp"
#include "jkpencil/polynomial.hpp"

namespace jkp {

using Rng = std::mt19937_64;

// Derives an independent seed for task i from a base seed.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t i);

// Product of random elementary row operations and signed permutations;
// det = +-1 and entries stay small.
QMatrix random_unimodular(std::size_t n, Rng& rng, std::size_t ops = 0);

struct AssemblyOptions {
  std::size_t max_dim = 12;
  std::size_t max_jordan = 3;
  std::size_t max_kronecker = 2;
  long eig_lo = -2, eig_hi = 3;
  bool allow_infinity = true;
  bool allow_kronecker = true;
  // Quadratic classes t^2 - 2 a t + a^2 + b^2 with integer b != 0.
  bool allow_quadratic = false;
};

// Random canonical block list of total dimension between 1 and max_dim.
std::vector<JKBlock> random_blocks(Rng& rng, const AssemblyOptions& opt);

// Sum of up to max_terms monomials of total degree <= max_degree with
// integer coefficients in [-3, 3]; may be zero.
Polynomial random_polynomial(Rng& rng, std::size_t nvars, unsigned max_degree, std::size_t max_terms = 4);

// Random rational point with small numerators and denominators.
std::vector<Rational> random_point(Rng& rng, std::size_t nvars);

}  // namespace jkp
