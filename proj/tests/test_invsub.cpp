#include <doctest.h>

#include "jkpencil/invsub.hpp"

using namespace jkp;

namespace {

HeightProfile prof(std::vector<std::size_t> k, std::vector<std::size_t> l) { return {std::move(k), std::move(l)}; }

JKDecomposition canonical_decomposition(const std::vector<JKBlock>& blocks) {
  const SkewPencil p = canonical_pencil(blocks);
  return {jk_invariants(p), QMatrix::identity(p.n())};
}

bool preserves(const QMatrix& Q, const SkewPencil& p) {
  return Q.transpose() * p.A * Q == p.A && Q.transpose() * p.B * Q == p.B && sgn(determinant(Q)) != 0;
}

const EigenvalueClass kI = EigenvalueClass::irreducible(UPoly({1, 0, 1}));

}  // namespace

TEST_CASE("enumeration and count examples") {
  CHECK(enumerate_invariant_subspaces(prof({3}, {1})) ==
        std::vector<HeightTuple>{{0}, {1}, {2}, {3}});
  CHECK(enumerate_invariant_subspaces(prof({2, 1}, {1, 1})) ==
        std::vector<HeightTuple>{{0, 0}, {1, 0}, {1, 1}, {2, 1}});
  CHECK(enumerate_invariant_subspaces(prof({3, 1}, {1, 2})).size() == 6);
  CHECK(invariant_subspace_count(prof({3, 1}, {2, 1})) == 6);
  CHECK(invariant_subspace_count(prof({4, 2, 1}, {1, 1, 1})) == 12);
  CHECK(invariant_subspace_count(prof({5}, {3})) == 6);
  CHECK_THROWS_AS(invariant_subspace_count(prof({1, 2}, {1, 1})), Error);
}

TEST_CASE("count formula matches enumeration for many profiles") {
  for (std::size_t k1 = 1; k1 <= 6; ++k1)
    for (std::size_t k2 = 0; k2 < k1; ++k2)
      for (std::size_t k3 = 0; k3 < std::max<std::size_t>(k2, 1); ++k3) {
        HeightProfile h{{k1}, {1}};
        if (k2 > 0) {
          h.heights.push_back(k2);
          h.mults.push_back(1);
        }
        if (k2 > 0 && k3 > 0) {
          h.heights.push_back(k3);
          h.mults.push_back(2);
        }
        const auto all = enumerate_invariant_subspaces(h);
        CHECK(all.size() == invariant_subspace_count(h));
        for (const auto& t : all) CHECK(satisfies_constraints(h, t));
      }
}

TEST_CASE("subspace_from_tuple examples") {
  const auto blocks = profile_blocks(prof({2, 1}, {1, 1}));
  const auto d = canonical_decomposition(blocks);
  CHECK(subspace_from_tuple(d, {0, 0}).dim() == 0);
  CHECK(subspace_from_tuple(d, {2, 1}).dim() == 6);
  const Subspace w = subspace_from_tuple(d, {1, 1});
  CHECK(w.dim() == 4);
  // Ker P cap Im P  +  Ker P, checked against brute force
  const QMatrix N = recursion_operator(canonical_pencil(blocks));
  const Subspace brute = intersect(kernel_of(N), image_of(N)) + kernel_of(N);
  CHECK(w == brute);
  CHECK(w == height_sum_subspace(blocks, {1, 1}));
  CHECK_THROWS_AS(subspace_from_tuple(d, {0, 1}), Error);
}

TEST_CASE("random automorphisms preserve both forms") {
  for (const auto& h : {prof({1}, {1}), prof({2, 1}, {1, 2}), prof({3, 1}, {2, 1}), prof({2}, {3})}) {
    const SkewPencil p = canonical_pencil(profile_blocks(h));
    for (std::uint64_t s = 0; s < 8; ++s) CHECK(preserves(random_automorphism(h, s), p));
  }
  // Rational nonzero eigenvalues, infinity and quadratic classes.
  const std::vector<JKBlock> mixed{JKBlock::jordan(EigenvalueClass::finite(2), 2),
                                   JKBlock::jordan(EigenvalueClass::finite(2), 1), JKBlock::jordan(kI, 2),
                                   JKBlock::jordan(kI, 1), JKBlock::jordan(EigenvalueClass::infinity(), 1)};
  const AutomorphismSampler sampler(mixed);
  Rng rng(5);
  for (int i = 0; i < 6; ++i) CHECK(preserves(sampler.sample(rng), sampler.pencil()));
}

TEST_CASE("is_invariant examples") {
  const auto blocks = profile_blocks(prof({2, 1}, {1, 1}));
  const auto d = canonical_decomposition(blocks);
  for (const auto& t : enumerate_invariant_subspaces(prof({2, 1}, {1, 1}))) {
    CHECK(is_invariant(subspace_from_tuple(d, t), d, 200, 1).invariant);
  }
  for (const auto& t : violating_tuples(prof({2, 1}, {1, 1}))) {
    const auto v = is_invariant(height_sum_subspace(blocks, t), d, 200, 1);
    CHECK_FALSE(v.invariant);
    CHECK(v.witness.has_value());
  }
  CHECK(is_invariant(Subspace::whole(6), d, 10, 1).invariant);

  // A chain top in one of two equal-height blocks is moved by a rotation.
  const auto two = canonical_decomposition(profile_blocks(prof({2}, {2})));
  QVector top(8);
  top[0] = 1;
  const auto v = is_invariant(Subspace::span(8, {top}), two, 50, 3);
  CHECK_FALSE(v.invariant);
  REQUIRE(v.witness);
  CHECK(preserves(*v.witness, canonical_pencil(two.invariants.blocks)));
}

TEST_CASE("complex structure examples") {
  const SkewPencil one = canonical_block(JKBlock::jordan(kI, 1));
  const auto J1 = complex_structure(one);
  CHECK(J1.J == recursion_operator(one));

  const SkewPencil two = canonical_block(JKBlock::jordan(kI, 2));
  const auto J2 = complex_structure(two);
  const QMatrix E = QMatrix::identity(8);
  CHECK(J2.J * J2.J == -E);
  const QMatrix P = recursion_operator(two);
  CHECK(P * J2.J == J2.J * P);
  CHECK((two.A * J2.J).transpose() == -(two.A * J2.J));
  CHECK((two.B * J2.J).transpose() == -(two.B * J2.J));

  const auto c5 = EigenvalueClass::irreducible(UPoly({5, -2, 1}));
  const SkewPencil q = canonical_block(JKBlock::jordan(c5, 1));
  CHECK(complex_structure(q).J == (recursion_operator(q) - QMatrix::identity(4)) * Rational(1, 2));

  QMatrix A(4, 4), B(4, 4);  // t^2 + 2: beta = sqrt 2
  B(0, 2) = 1, B(2, 0) = -1, B(1, 3) = 1, B(3, 1) = -1;
  A(0, 3) = -2, A(3, 0) = 2, A(1, 2) = 1, A(2, 1) = -1;
  try {
    complex_structure({A, B});
    FAIL("expected IrrationalBeta");
  } catch (const Error& e) {
    CHECK(e.code() == "IrrationalBeta");
  }
}

TEST_CASE("complexification keeps the block sizes") {
  const SkewPencil two = canonical_block(JKBlock::jordan(kI, 2));
  const auto J = complex_structure(two);
  CHECK(complex_jordan_sizes(two, J) == std::vector<std::size_t>{2});
  const auto c = complexify(two, J);
  CHECK(c.A_im == -(two.A * J.J));
  // B^C(Ju, v) = i B^C(u, v): real part B(Ju, v) equals -Im B^C(u, v).
  CHECK((J.J.transpose() * c.B_re) == -c.B_im);
  CHECK((J.J.transpose() * c.B_im) == c.B_re);

  Rng rng(8);
  const std::vector<JKBlock> blocks{JKBlock::jordan(kI, 2), JKBlock::jordan(kI, 1)};
  const SkewPencil p = congruence(canonical_pencil(blocks), random_unimodular(12, rng));
  CHECK(complex_jordan_sizes(p, complex_structure(p)) == std::vector<std::size_t>{2, 1});
}

TEST_CASE("real invariance check") {
  const SkewPencil two = canonical_block(JKBlock::jordan(kI, 2));
  const auto J = complex_structure(two);
  CHECK(real_invariance_check(Subspace::whole(8), two, J, 20, 1).invariant);
  QVector e(8);
  e[0] = 1;
  const auto line = real_invariance_check(Subspace::span(8, {e}), two, J, 20, 1);
  CHECK_FALSE(line.invariant);
  CHECK(line.reason == "not J-invariant");

  Rng rng(3);
  const std::vector<JKBlock> blocks{JKBlock::jordan(kI, 1), JKBlock::jordan(kI, 1)};
  const SkewPencil p = congruence(canonical_pencil(blocks), random_unimodular(8, rng));
  const auto Jp = complex_structure(p);
  const QMatrix P = recursion_operator(p);
  const Subspace ker = kernel_of(P * P + QMatrix::identity(8));
  CHECK(ker.dim() == 8);
  CHECK(real_invariance_check(ker, p, Jp, 50, 2).invariant);

  // Ker N on a real 2-block is invariant; a J-invariant plane inside a
  // two-block sum of equal heights is not.
  const auto J2 = complex_structure(two);
  const QMatrix N = recursion_operator(two) - semisimple_part(recursion_operator(two), kI.polynomial());
  CHECK(real_invariance_check(kernel_of(N), two, J2, 50, 2).invariant);
  QVector u(8);
  u[0] = 1;
  const QVector ju = Jp.J.apply(u);
  const auto plane = real_invariance_check(Subspace::span(8, {u, ju}), p, Jp, 50, 2);
  CHECK_FALSE(plane.invariant);
  REQUIRE(plane.witness);
  CHECK(preserves(*plane.witness, p));
}
