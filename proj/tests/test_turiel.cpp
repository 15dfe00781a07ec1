#include <doctest.h>

#include <functional>

#include "jkpencil/generators.hpp"
#include "jkpencil/turiel.hpp"

using namespace jkp;

namespace {

TurielSignature sig(std::vector<std::size_t> k) { return {std::move(k)}; }

EigenvalueClass fin(long v) { return EigenvalueClass::finite(Rational(v)); }

std::string error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

// Pole-free random point: x1_1 / 2 + 1 is nonzero for x1_1 != -2.
std::vector<Rational> point_for(const Chart& c, Rng& rng) {
  auto p = random_point(rng, c.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c.name(i) == "x1_1" && p[i] == -2) p[i] = 1;
  return p;
}

std::vector<std::size_t> jordan_sizes(const JKInvariants& inv) {
  std::vector<std::size_t> out;
  for (const auto& b : inv.blocks) out.push_back(b.size);
  return out;
}

}  // namespace

TEST_CASE("signature parsing and enumeration") {
  CHECK(TurielSignature::parse("2,1").k == std::vector<std::size_t>{2, 1});
  CHECK(error_code([] { TurielSignature::parse("1,2"); }) == "BadSignature");
  CHECK(error_code([] { TurielSignature::parse("2,x"); }) == "BadSignature");
  CHECK(TurielSignature::all(3, 3).size() == 19);
  CHECK(sig({2, 1}).jordan_sizes() == std::vector<std::size_t>{3, 1});
  CHECK(sig({2, 2}).profile().heights == std::vector<std::size_t>{3, 2});
  CHECK(sig({1, 1, 1}).profile().mults == std::vector<std::size_t>{1, 2});
}

TEST_CASE("flat structures") {
  const auto one = build_flat({{JKBlock::jordan(fin(0), 1)}});
  CHECK(one.chart.variables() == std::vector<std::string>{"u1_1", "w1_1"});
  CHECK(one.omega0 == wedge(DiffForm::differential(one.chart, 0), DiffForm::differential(one.chart, 1)));
  CHECK(one.omega1.is_zero());

  const auto two = build_flat({{JKBlock::jordan(fin(2), 1)}});
  CHECK(two.omega1 == Rational(2) * two.omega0);

  const FlatSpec mixed{{JKBlock::jordan(fin(1), 2), JKBlock::jordan(fin(3), 1)}};
  const auto m = build_flat(mixed);
  CHECK(m.chart.size() == 6);
  CHECK(compatibility_check(m.omega0, m.omega1).all());
  Rng rng(3);
  const auto a = jk_invariants_at_point(m.omega0, m.omega1, random_point(rng, 6));
  CHECK(a == jk_invariants_at_point(m.omega0, m.omega1, random_point(rng, 6)));
  CHECK(a.blocks == mixed.blocks);

  std::size_t count = 0;
  for (const auto& d : flat_distributions(mixed, m)) {
    CHECK(involutivity_check(d.fields).involutive);
    ++count;
  }
  CHECK(count == 3 * 2);
  CHECK(error_code([] { FlatSpec{{JKBlock::kronecker(1)}}.validate(); }) == "BadFlatSpec");
}

TEST_CASE("normal form for the minimal signature") {
  const auto b = build_normal_form(sig({1}));
  const Chart& c = b.chart;
  CHECK(c.variables() == std::vector<std::string>{"x1_1", "y1_1", "z", "lambda"});
  const DiffForm dx = DiffForm::differential(c, 0), dy = DiffForm::differential(c, 1);
  const DiffForm dz = DiffForm::differential(c, 2), dl = DiffForm::differential(c, 3);
  const DiffForm w0 = wedge(dx, dy) + wedge(dz, dl);
  CHECK(b.omega0 == w0);
  const DiffForm alpha = c.parse("3/2*y1_1") * dx + c.parse("1/2*x1_1") * dy;
  CHECK(b.omega1 == c.coordinate("lambda") * w0 + wedge(alpha, dl) + wedge(dy, dl));
  CHECK(exterior_derivative(b.omega1).is_zero());
}

TEST_CASE("normal form matrix for signature 2,1") {
  const auto b = build_normal_form(sig({2, 1}));
  const Chart& c = b.chart;
  CHECK(c.variables() ==
        std::vector<std::string>{"x1_1", "x1_2", "y1_1", "y1_2", "x2_1", "y2_1", "z", "lambda"});
  RMatrix W(8, 8);
  auto put = [&](const char* r, const char* col, const std::string& v) {
    const std::size_t i = c.index(r), j = c.index(col);
    W(i, j) = c.parse(v);
    W(j, i) = -W(i, j);
  };
  // J_2(lambda) on block 1, J_1(lambda) on block 2, lambda on (z, lambda).
  put("x1_1", "y1_1", "lambda");
  put("x1_1", "y1_2", "1");
  put("x1_2", "y1_2", "lambda");
  put("x2_1", "y2_1", "lambda");
  put("z", "lambda", "lambda");
  // alpha_1 = (3/2 y1_1, 5/2 y1_2), beta_1 + delta = (1/2 x1_1 + 1, 3/2 x1_2)
  put("x1_1", "lambda", "3/2*y1_1");
  put("x1_2", "lambda", "5/2*y1_2");
  put("y1_1", "lambda", "1/2*x1_1 + 1");
  put("y1_2", "lambda", "3/2*x1_2");
  put("x2_1", "lambda", "3/2*y2_1");
  put("y2_1", "lambda", "1/2*x2_1");
  CHECK(b.omega1.matrix() == W);
}

TEST_CASE("endomorphism field") {
  const auto s1 = sig({1});
  const OperatorField P = endomorphism_field(s1);
  const Chart& c = P.chart;
  const OperatorField N = P - OperatorField::scalar(c, c.coordinate("lambda"));
  // (P - lambda E) d/dy1_1 carries the delta term.
  VectorField expected = VectorField::zero(c);
  expected.components[c.index("z")] = c.parse("1/2*x1_1 + 1");
  CHECK(N.apply(VectorField::coordinate(c, "y1_1")) == expected);

  for (const auto& s : {s1, sig({2, 1}), sig({1, 1})}) {
    const auto b = build_normal_form(s);
    CHECK(operator_field(b.omega0, b.omega1) == endomorphism_field(s));
    // det(t E - P) = (t - lambda)^dim
    const auto coefs = characteristic_coefficients(endomorphism_field(s));
    const std::size_t n = s.dimension();
    Polynomial lam = b.chart.coordinate("lambda").num();
    Rational binom = 1;
    for (std::size_t i = 0; i <= n; ++i) {
      // coefficient of t^{n-i} is C(n, i) (-lambda)^i
      CHECK(coefs[n - i] == RatFunc(pow(-lam, static_cast<unsigned>(i)) * binom));
      binom = binom * Rational(static_cast<long>(n - i)) / Rational(static_cast<long>(i + 1));
    }
  }
}

TEST_CASE("frames") {
  const auto s1 = sig({1});
  const TurielFrame F = frames(s1);
  const Chart& c = F.e(1, 0).chart;
  CHECK(F.f(1, 0) == VectorField::coordinate(c, "z"));
  VectorField f11 = VectorField::zero(c);
  f11.components[c.index("y1_1")] = c.parse("1/(1/2*x1_1 + 1)");
  CHECK(F.f(1, 1) == f11);
  VectorField e10 = VectorField::zero(c);
  e10.components[c.index("lambda")] = RatFunc(-1);
  CHECK(F.e(1, 0) == e10);
  for (const auto& s : TurielSignature::all(2, 3)) CHECK(frame_gamma(s, 1).is_zero());

  const auto r = frame_check(sig({2, 1}));
  CHECK(r.gram0);
  CHECK(r.gram1);
  CHECK(r.recurrences);
}

TEST_CASE("chain ends of smaller blocks need the z term") {
  // With k_1 > k_s, dropping the d/dz term of e_s^1 breaks its
  // orthogonality to e_1^0; the closed form keeps it.
  const auto s = sig({2, 1});
  const TurielFrame F = frames(s);
  const auto b = build_normal_form(s);
  const Chart& c = b.chart;
  VectorField literal = VectorField::coordinate(c, "x2_1");
  literal.components[c.index("y1_1")] = c.parse("-(3/2*y2_1)/(1/2*x1_1 + 1)");
  CHECK_FALSE(gram_matrix(b.omega0, {F.e(1, 0), literal})(0, 1).is_zero());
  CHECK(gram_matrix(b.omega0, {F.e(1, 0), F.e(2, 1)})(0, 1).is_zero());
}

TEST_CASE("invariant distributions") {
  const auto s = sig({1, 1});
  CHECK(invariant_distribution(s, {0, 0}).empty());
  const auto whole = invariant_distribution(s, {2, 1});
  CHECK(whole.size() == s.dimension());
  CHECK(rank(field_matrix(whole)) == s.dimension());

  // Ker (P - lambda E): heights (2, 1) at tuple (1, 1).
  const auto ker = invariant_distribution(s, {1, 1});
  REQUIRE(ker.size() == 4);
  const Chart& c = ker[0].chart;
  VectorField u = VectorField::coordinate(c, "x2_1"), v = VectorField::coordinate(c, "y2_1");
  u.components[c.index("y1_1")] = c.parse("-(3/2*y2_1)/(1/2*x1_1 + 1)");
  v.components[c.index("y1_1")] = c.parse("-(1/2*x2_1)/(1/2*x1_1 + 1)");
  CHECK(ker[2] == u);
  CHECK(ker[3] == v);
  CHECK(error_code([&] { invariant_distribution(s, {0, 1}); }) == "TupleViolatesConstraints");
}

TEST_CASE("integrability verdicts") {
  const auto s = sig({1, 1});
  const auto r = integrability_verdict(s, {1, 1});
  CHECK_FALSE(r.predicted);
  CHECK_FALSE(r.computed);
  REQUIRE(r.witness);
  const Chart& c = r.witness->chart;
  VectorField expected = VectorField::zero(c);
  expected.components[c.index("y1_1")] = c.parse("1/(1/2*x1_1 + 1)");
  CHECK(*r.witness == expected);
  CHECK(r.witness_matches);
  CHECK(r.agrees());

  for (const auto& t : enumerate_invariant_subspaces(sig({1}).profile())) {
    const auto v = integrability_verdict(sig({1}), t);
    CHECK(v.computed);
    CHECK(v.agrees());
  }

  const auto s21 = sig({2, 1});
  const auto im = ker_im_tuple(s21, s21.dimension(), 1);
  CHECK(im == HeightTuple{2, 0});
  CHECK(integrability_verdict(s21, im).computed);
  CHECK(involutivity_check(ker_im_distribution(s21, s21.dimension(), 1)).involutive);
}

TEST_CASE("verdicts match the prediction on small signatures") {
  for (const auto& s : TurielSignature::all(2, 2))
    for (const auto& t : enumerate_invariant_subspaces(s.profile())) {
      const auto r = integrability_verdict(s, t);
      CHECK_MESSAGE(r.agrees(), s.to_string());
    }
}

TEST_CASE("kernel and image distributions") {
  const auto s = sig({1, 1});
  const auto whole = ker_im_distribution(s, s.dimension(), 0);
  CHECK(whole.size() == s.dimension());
  CHECK(ker_im_distribution(s, 0, 0).empty());
  CHECK(same_span(ker_im_distribution(s, 1, 0), invariant_distribution(s, {1, 1})));
  for (const auto& t : {sig({2, 1}), sig({2, 2})})
    for (std::size_t k = 0; k <= 3; ++k)
      for (std::size_t l = 0; k + l <= 3; ++l)
        CHECK(same_span(ker_im_distribution(t, k, l), invariant_distribution(t, ker_im_tuple(t, k, l))));
}

TEST_CASE("jk invariants of the normal form are constant in size") {
  Rng rng(5);
  for (const auto& s : {sig({1}), sig({2, 1}), sig({1, 1})}) {
    const auto b = build_normal_form(s);
    std::vector<std::size_t> sizes = s.jordan_sizes();
    for (int trial = 0; trial < 3; ++trial) {
      const auto p = point_for(b.chart, rng);
      const auto inv = jk_invariants_at_point(b.omega0, b.omega1, p);
      CHECK(jordan_sizes(inv) == sizes);
      for (const auto& blk : inv.blocks) CHECK(blk.eigenvalue == EigenvalueClass::finite(p.back()));
    }
  }
}

TEST_CASE("products") {
  const auto p0 = build_flat({{JKBlock::jordan(fin(0), 1)}}, "_a");
  const auto p1 = build_flat({{JKBlock::jordan(fin(1), 1)}}, "_b");
  const auto prod = product_build({p0, p1});
  CHECK(prod.structure.chart.size() == 4);
  Rng rng(9);
  const auto inv = jk_invariants_at_point(prod.structure.omega0, prod.structure.omega1, random_point(rng, 4));
  CHECK(inv.blocks == std::vector<JKBlock>{JKBlock::jordan(fin(0), 1), JKBlock::jordan(fin(1), 1)});

  CHECK(product_build({p0}).structure.omega1 == p0.omega1);
  CHECK(error_code([&] { product_build({p0, p0}); }) == "NameClash");
  const auto p0b = build_flat({{JKBlock::jordan(fin(0), 2)}}, "_c");
  CHECK(error_code([&] { product_build({p0, p0b}); }) == "NonCoprimeFactors");

  // Turiel (1) with eigenvalue coordinate lambda_t times flat lambda = 5.
  const auto s = sig({1});
  const auto t = build_normal_form(s, "_t");
  const FlatSpec fs{{JKBlock::jordan(fin(5), 1)}};
  const auto f = build_flat(fs, "_f");
  const auto tf = product_build({t, f});
  const auto flat_d = flat_distributions(fs, f);
  for (const auto& tt : enumerate_invariant_subspaces(s.profile())) {
    const auto tv = integrability_verdict(s, tt);
    // Re-express the Turiel generators on the suffixed chart.
    std::vector<VectorField> gens_t;
    for (const auto& X : invariant_distribution(s, tt)) gens_t.push_back(VectorField{t.chart, X.components});
    for (const auto& fd : flat_d) {
      std::vector<VectorField> gens;
      for (const auto& X : gens_t) gens.push_back(lift_field(tf, 0, X));
      for (const auto& X : fd.fields) gens.push_back(lift_field(tf, 1, X));
      CHECK(involutivity_check(gens).involutive == (tv.computed && involutivity_check(fd.fields).involutive));
    }
  }
}
