#include <doctest.h>

#include <functional>

#include "jkpencil/generators.hpp"
#include "jkpencil/geometry.hpp"

using namespace jkp;

namespace {

VectorField field(const Chart& c, const std::vector<std::string>& comps) {
  VectorField X = VectorField::zero(c);
  for (std::size_t i = 0; i < comps.size(); ++i) X.components[i] = c.parse(comps[i]);
  return X;
}

VectorField random_field(Rng& rng, const Chart& c, unsigned deg = 2) {
  VectorField X = VectorField::zero(c);
  for (auto& f : X.components) f = RatFunc(random_polynomial(rng, c.size(), deg, 3));
  return X;
}

OperatorField operator_from(const Chart& c, const std::vector<std::vector<std::string>>& rows) {
  OperatorField P{c, RMatrix(c.size(), c.size())};
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) P.matrix(i, j) = c.parse(rows[i][j]);
  return P;
}

std::string error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

const Chart kXY({"x", "y"});
const Chart kXYZ({"x", "y", "z"});
const Chart kXYZL({"x", "y", "z", "lambda"});

}  // namespace

TEST_CASE("chart rejects duplicate names") {
  CHECK(error_code([] { Chart({"x", "x"}); }) == "DuplicateVariable");
  CHECK(kXYZL.index("lambda") == 3);
}

TEST_CASE("lie bracket examples") {
  const auto dx = VectorField::coordinate(kXY, "x"), dy = VectorField::coordinate(kXY, "y");
  CHECK(lie_bracket(dx, dy).is_zero());
  CHECK(lie_bracket(dx, field(kXY, {"0", "x"})) == dy);
  CHECK(lie_bracket(field(kXY, {"0", "x"}), field(kXY, {"y", "0"})) == field(kXY, {"x", "-y"}));
  CHECK(error_code([&] { lie_bracket(dx, VectorField::coordinate(kXYZ, 0)); }) == "ChartMismatch");
}

TEST_CASE("exterior derivative examples") {
  const DiffForm dx = DiffForm::differential(kXYZL, 0), dy = DiffForm::differential(kXYZL, 1);
  const DiffForm dz = DiffForm::differential(kXYZL, 2), dl = DiffForm::differential(kXYZL, 3);
  const RatFunc x = kXYZL.coordinate("x"), lambda = kXYZL.coordinate("lambda");
  CHECK(exterior_derivative(x * dy) == wedge(dx, dy));
  CHECK(exterior_derivative(wedge(dx, dy)).is_zero());
  const DiffForm w0 = wedge(dx, dy) + wedge(dz, dl);
  CHECK(exterior_derivative(lambda * w0) == wedge(dl, wedge(dx, dy)));
  const DiffForm three = wedge(dx, wedge(dy, dz));
  CHECK(error_code([&] { exterior_derivative(three); }) == "DegreeTooHigh");
}

TEST_CASE("nijenhuis examples") {
  const Chart uv({"u", "v"});
  const auto du = VectorField::coordinate(uv, 0), dv = VectorField::coordinate(uv, 1);
  const OperatorField constant = operator_from(uv, {{"2", "1"}, {"-3", "5"}});
  CHECK(nijenhuis(constant, du, dv).is_zero());
  CHECK(nijenhuis_vanishes(constant));
  CHECK(nijenhuis(OperatorField::identity(uv), field(uv, {"u*v", "u"}), field(uv, {"v^2", "1"})).is_zero());

  // P = diag(v, u): [v du, u dv] = v dv - u du, [v du, dv] = -du,
  // [du, u dv] = dv, so N = v dv - u du - P(dv - du) = (v - u)(du + dv).
  const OperatorField diag = operator_from(uv, {{"v", "0"}, {"0", "u"}});
  CHECK(nijenhuis(diag, du, dv) == field(uv, {"v-u", "v-u"}));
  CHECK_FALSE(nijenhuis_vanishes(diag));

  // P = [[0, u], [0, 0]]: P du = 0 and P dv = u du, so
  // N(du, dv) = -P[du, u du] = -P du = 0.
  const OperatorField upper = operator_from(uv, {{"0", "u"}, {"0", "0"}});
  CHECK(nijenhuis(upper, du, dv).is_zero());
  CHECK(nijenhuis_vanishes(upper));
  const OperatorField lower = operator_from(uv, {{"0", "0"}, {"u", "0"}});
  // P du = u dv, P dv = 0: N(du, dv) = -P[u dv, dv] - P[du, 0] = 0.
  CHECK(nijenhuis(lower, du, dv).is_zero());
}

TEST_CASE("compatibility and operator field examples") {
  const DiffForm dx = DiffForm::differential(kXYZL, 0), dy = DiffForm::differential(kXYZL, 1);
  const DiffForm dz = DiffForm::differential(kXYZL, 2), dl = DiffForm::differential(kXYZL, 3);
  const RatFunc lambda = kXYZL.coordinate("lambda");
  const DiffForm w0 = wedge(dx, dy) + wedge(dz, dl);
  // d(lambda w0) = dlambda ^ dx ^ dy, so only closedness of omega1 fails.
  const auto scaled = compatibility_check(w0, lambda * w0);
  CHECK(scaled.nondegenerate0);
  CHECK(scaled.closed0);
  CHECK_FALSE(scaled.closed1);
  CHECK(scaled.nijenhuis_zero);
  CHECK(operator_field(w0, lambda * w0) == OperatorField::scalar(kXYZL, lambda));
  CHECK(operator_field(w0, w0) == OperatorField::identity(kXYZL));

  const DiffForm a = wedge(DiffForm::differential(kXY, 0), DiffForm::differential(kXY, 1));
  CHECK(compatibility_check(a, kXY.coordinate("x") * a).all());

  const DiffForm b0 = wedge(DiffForm::differential(kXYZ, 0), DiffForm::differential(kXYZ, 1));
  const DiffForm b1 = kXYZ.coordinate("x") * wedge(DiffForm::differential(kXYZ, 1), DiffForm::differential(kXYZ, 2));
  const auto r = compatibility_check(b0, b1);
  CHECK_FALSE(r.nondegenerate0);
  CHECK(r.closed0);
  CHECK_FALSE(r.nijenhuis_zero);
  CHECK(error_code([&] { operator_field(b0, b1); }) == "DegenerateForm");

  // omega0(u, P v) = omega1(u, v) for a non-constant pair.
  const DiffForm c1 = kXYZL.coordinate("x") * wedge(dx, dl) + lambda * w0;
  const OperatorField P = operator_field(w0, c1);
  CHECK(w0.matrix() * P.matrix == c1.matrix());
}

TEST_CASE("involutivity examples") {
  const auto dx = VectorField::coordinate(kXYZ, 0), dy = VectorField::coordinate(kXYZ, 1);
  CHECK(involutivity_check({dx, dy}).involutive);
  const auto twisted = field(kXYZ, {"0", "x", "1"});
  const auto v = involutivity_check({dx, twisted});
  CHECK_FALSE(v.involutive);
  REQUIRE(v.witness);
  CHECK(v.witness->bracket == dy);
  CHECK(involutivity_check({dx, dy, twisted}).involutive);
  CHECK(error_code([&] { involutivity_check({dx, dx * kXYZ.coordinate("y")}); }) == "DependentGenerators");
}

TEST_CASE("jk invariants at points") {
  const DiffForm w0 = wedge(DiffForm::differential(kXYZL, 0), DiffForm::differential(kXYZL, 1)) +
                      wedge(DiffForm::differential(kXYZL, 2), DiffForm::differential(kXYZL, 3));
  const DiffForm w1 = Rational(3) * w0;
  Rng rng(1);
  const auto at1 = jk_invariants_at_point(w0, w1, random_point(rng, 4));
  CHECK(at1 == jk_invariants_at_point(w0, w1, random_point(rng, 4)));
  REQUIRE(at1.blocks.size() == 2);
  CHECK(at1.blocks[0] == JKBlock::jordan(EigenvalueClass::finite(3), 1));

  const RatFunc pole = RatFunc(1) / kXYZL.coordinate("x");
  CHECK(error_code([&] { jk_invariants_at_point(w0, pole * w0, {0, 1, 1, 1}); }) == "PoleAtPoint");
}

TEST_CASE("d of d vanishes on random 1-forms") {
  Rng rng(7);
  const Chart c({"a", "b", "c", "d"});
  for (int trial = 0; trial < 50; ++trial) {
    DiffForm w = DiffForm::zero(c, 1);
    for (std::size_t i = 0; i < c.size(); ++i) w.add_term({i}, RatFunc(random_polynomial(rng, 4, 3)));
    CHECK(exterior_derivative(exterior_derivative(w)).is_zero());
  }
}

TEST_CASE("Jacobi identity on random fields") {
  Rng rng(11);
  const Chart c({"a", "b", "c"});
  for (int trial = 0; trial < 50; ++trial) {
    const auto X = random_field(rng, c), Y = random_field(rng, c), Z = random_field(rng, c);
    const auto s = lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X)) + lie_bracket(Z, lie_bracket(X, Y));
    CHECK(s.is_zero());
  }
}

TEST_CASE("Nijenhuis torsion is function-linear") {
  Rng rng(13);
  const Chart c({"a", "b", "c"});
  for (int trial = 0; trial < 50; ++trial) {
    OperatorField P{c, RMatrix(3, 3)};
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) P.matrix(i, j) = RatFunc(random_polynomial(rng, 3, 2, 2));
    const auto X = random_field(rng, c, 1), Y = random_field(rng, c, 1);
    const RatFunc f(random_polynomial(rng, 3, 2, 3));
    CHECK(nijenhuis(P, f * X, Y) == f * nijenhuis(P, X, Y));
    CHECK(nijenhuis(P, X, f * Y) == f * nijenhuis(P, X, Y));
  }
}

TEST_CASE("involutivity agrees with pointwise ranks") {
  Rng rng(17);
  const Chart c({"a", "b", "c", "d"});
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<VectorField> gens;
    const std::size_t r = 2 + static_cast<std::size_t>(trial % 2);
    for (std::size_t k = 0; k < r; ++k) {
      VectorField X = VectorField::coordinate(c, k);  // keeps the generic rank full
      VectorField noise = random_field(rng, c, 1);
      for (std::size_t i = 0; i < r; ++i) noise.components[i] = RatFunc();
      gens.push_back(X + noise);
    }
    const auto v = involutivity_check(gens);
    const RMatrix G = field_matrix(gens);
    for (int p = 0; p < 5; ++p) {
      const auto pt = random_point(rng, 4);
      const QMatrix g = evaluate(G, pt);
      if (rank(g) != r) continue;
      bool all_in = true;
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j) {
          const QMatrix b = evaluate(field_matrix({lie_bracket(gens[i], gens[j])}), pt);
          if (rank(hstack(g, b)) != r) all_in = false;
        }
      CHECK(all_in == v.involutive);
      ++checked;
    }
  }
  CHECK(checked > 0);
}
