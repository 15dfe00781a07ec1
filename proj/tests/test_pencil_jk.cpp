#include <doctest.h>

#include "jkpencil/generators.hpp"
#include "jkpencil/jk.hpp"

using namespace jkp;

namespace {

const QMatrix kOmega{{0, 1}, {-1, 0}};

EigenvalueClass fin(long v) { return EigenvalueClass::finite(Rational(v)); }

SkewPencil conjugated(const std::vector<JKBlock>& blocks, Rng& rng) {
  return congruence(canonical_pencil(blocks), random_unimodular(canonical_pencil(blocks).n(), rng));
}

}  // namespace

TEST_CASE("char_poly examples") {
  CHECK(char_poly({kOmega * Rational(2), kOmega}) == pow(UPoly::linear(2), 2));
  CHECK(char_poly({QMatrix(2, 2), kOmega}) == UPoly::monomial(1, 2));
  // det(tB - A) with B = 0 is det(-A), a nonzero constant for this A.
  CHECK(char_poly({kOmega, QMatrix(2, 2)}) == UPoly(1));
}

TEST_CASE("char_poly transforms by det(C)^2 under congruence") {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto blocks = random_blocks(rng, {8, 2, 1, -2, 3, false, false, false});
    const SkewPencil p = canonical_pencil(blocks);
    CHECK(char_poly(congruence(p, random_unimodular(p.n(), rng))) == char_poly(p));
  }
}

TEST_CASE("recursion operator of a Jordan pair") {
  const SkewPencil p = canonical_block(JKBlock::jordan(fin(3), 2));
  const QMatrix P = recursion_operator(p);
  const QMatrix BP = p.B * P;
  CHECK(BP.transpose() == -BP);
  QMatrix expected(4, 4);
  expected(0, 0) = 3;
  expected(1, 0) = 1;
  expected(1, 1) = 3;
  expected(2, 2) = 3;
  expected(2, 3) = 1;
  expected(3, 3) = 3;
  CHECK(P == expected);
  CHECK_THROWS_AS(recursion_operator({kOmega, QMatrix(2, 2)}), Error);
}

TEST_CASE("make_pencil names the offending entry") {
  try {
    make_pencil(QMatrix{{0, 1}, {1, 0}}, kOmega);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == "NotSkewSymmetric");
    CHECK(std::string(e.what()).find("A[0][1]") != std::string::npos);
  }
}

TEST_CASE("eigen_split separates classes orthogonally") {
  Rng rng(4);
  const SkewPencil p = conjugated({JKBlock::jordan(fin(1), 1), JKBlock::jordan(fin(2), 1)}, rng);
  const auto comps = eigen_split(p);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].eigenvalue == fin(1));
  CHECK(comps[1].eigenvalue == fin(2));
  CHECK(comps[0].space.dim() == 2);
  CHECK((comps[0].space.basis().transpose() * p.B * comps[1].space.basis()).is_zero());

  const SkewPencil q = canonical_block(JKBlock::jordan(EigenvalueClass::irreducible(UPoly({1, 0, 1})), 1));
  const auto qc = eigen_split(q);
  REQUIRE(qc.size() == 1);
  CHECK(qc[0].eigenvalue.label() == "t^2+1");
  CHECK(qc[0].space.dim() == 4);
}

TEST_CASE("jk_invariants examples") {
  const auto one = jk_invariants({QMatrix(2, 2), kOmega});
  REQUIRE(one.blocks.size() == 1);
  CHECK(one.blocks[0] == JKBlock::jordan(fin(0), 1));

  const auto zero = jk_invariants({QMatrix(1, 1), QMatrix(1, 1)});
  REQUIRE(zero.blocks.size() == 1);
  CHECK(zero.blocks[0] == JKBlock::kronecker(0));

  Rng rng(9);
  const std::vector<JKBlock> blocks{JKBlock::jordan(fin(2), 2), JKBlock::jordan(fin(2), 1), JKBlock::kronecker(1)};
  const auto inv = jk_invariants(conjugated(blocks, rng));
  CHECK(inv.blocks == blocks);
  CHECK(inv.dimension() == 9);
}

TEST_CASE("infinite eigenvalue and pure Kronecker pencils") {
  Rng rng(12);
  const std::vector<JKBlock> blocks{JKBlock::jordan(fin(-1), 1), JKBlock::jordan(EigenvalueClass::infinity(), 2),
                                    JKBlock::kronecker(2), JKBlock::kronecker(0)};
  const SkewPencil p = conjugated(blocks, rng);
  CHECK(jk_invariants(p).blocks == blocks);
  CHECK(kronecker_indices(p) == std::vector<std::size_t>{2, 0});
  const auto d = jk_basis(p);
  CHECK(verify_canonical(d, p));
}

TEST_CASE("jk_basis examples") {
  const SkewPencil canon = canonical_block(JKBlock::jordan(fin(3), 2));
  JKDecomposition id{jk_invariants(canon), QMatrix::identity(4)};
  CHECK(verify_canonical(id, canon));

  const QMatrix C0{{1, 2, 0, 1}, {0, 1, 1, 0}, {1, 0, 1, 3}, {0, 0, 1, 1}};
  const SkewPencil p = congruence(canon, C0);
  const auto d = jk_basis(p);
  CHECK(verify_canonical(d, p));
  CHECK_FALSE(verify_canonical({d.invariants, QMatrix::identity(4)}, p));

  // Companion-type pencil with eigenvalues +-sqrt 2, each of multiplicity 2.
  QMatrix A(4, 4), B(4, 4);
  B(0, 2) = 1, B(2, 0) = -1, B(1, 3) = 1, B(3, 1) = -1;
  // X = companion matrix of t^2 - 2
  A(0, 3) = 2, A(3, 0) = -2, A(1, 2) = 1, A(2, 1) = -1;
  const SkewPencil comp{A, B};
  CHECK(char_poly(comp) == pow(UPoly({-2, 0, 1}), 2));
  const auto inv = jk_invariants(comp);
  REQUIRE(inv.blocks.size() == 1);
  CHECK(inv.blocks[0].eigenvalue.label() == "t^2-2");
  CHECK_FALSE(inv.realizable());
  try {
    jk_basis(comp);
    FAIL("expected NotRationallyRealizable");
  } catch (const Error& e) {
    CHECK(e.code() == "NotRationallyRealizable");
  }
}

TEST_CASE("verify_canonical rejects a permuted block order") {
  Rng rng(2);
  const std::vector<JKBlock> blocks{JKBlock::jordan(fin(0), 1), JKBlock::jordan(fin(1), 1)};
  const SkewPencil p = conjugated(blocks, rng);
  auto d = jk_basis(p);
  REQUIRE(verify_canonical(d, p));
  std::swap(d.invariants.blocks[0], d.invariants.blocks[1]);
  CHECK_FALSE(verify_canonical(d, p));
}

TEST_CASE("real quadratic blocks have rational canonical bases") {
  Rng rng(17);
  const auto cls = EigenvalueClass::irreducible(UPoly({5, -2, 1}));  // alpha 1, beta 2
  const std::vector<JKBlock> blocks{JKBlock::jordan(cls, 2), JKBlock::jordan(cls, 1)};
  const SkewPencil p = conjugated(blocks, rng);
  const auto d = jk_basis(p);
  CHECK(d.invariants.blocks == blocks);
  CHECK(verify_canonical(d, p));
}

TEST_CASE("roundtrip on random assemblies") {
  Rng rng(2024);
  AssemblyOptions opt;
  opt.max_dim = 10;
  opt.allow_quadratic = true;
  for (int trial = 0; trial < 40; ++trial) {
    const auto blocks = random_blocks(rng, opt);
    const SkewPencil p = conjugated(blocks, rng);
    const auto inv = jk_invariants(p);
    CHECK(inv.blocks == blocks);
    const auto d = jk_basis(p);
    CHECK(verify_canonical(d, p));
  }
}
