#include <doctest.h>

#include "jkpencil/error.hpp"
#include "jkpencil/generators.hpp"
#include "jkpencil/ratfunc.hpp"
#include "jkpencil/serialize.hpp"

using namespace jkp;

namespace {

std::string error_message(const Json& j) {
  try {
    pencil_from_json(j);
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::Malformed);
    return e.what();
  }
  return "";
}

bool mentions(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("pencil loading") {
  const Json ok = Json::parse(R"({"n": 2, "A": [["0", "1/2"], ["-1/2", 0]], "B": [[0, 1], [-1, 0]]})");
  const SkewPencil p = pencil_from_json(ok);
  CHECK(p.A(0, 1) == Rational(1, 2));
  CHECK(pencil_from_json(pencil_to_json(p)).A == p.A);

  CHECK(mentions(error_message(Json::parse(R"({"n": 2, "A": [[0, 1], [-1, 0]]})")), "\"B\""));
  CHECK(mentions(error_message(Json::parse(R"({"n": 2, "A": [[0, "x"], [-1, 0]], "B": [[0, 1], [-1, 0]]})")),
                 "A[0][1]"));
  CHECK(mentions(error_message(Json::parse(R"({"n": 2, "A": [[0, 1], [1, 0]], "B": [[0, 1], [-1, 0]]})")),
                 "A[0][1]"));
  CHECK(mentions(error_message(Json::parse(R"({"n": 3, "A": [[0, 1], [-1, 0]], "B": [[0, 1], [-1, 0]]})")),
                 "3 x 3"));
  CHECK(mentions(error_message(Json::parse(R"({"n": 2, "A": [[0, 1], [-1]], "B": [[0, 1], [-1, 0]]})")),
                 "A[1]"));
}

TEST_CASE("real root counting") {
  CHECK(count_real_roots(UPoly({-2, 0, 1})) == 2);
  CHECK(count_real_roots(UPoly({1, 0, 1})) == 0);
  CHECK(count_real_roots(UPoly({-2, 0, 0, 1})) == 1);
  CHECK(count_real_roots(UPoly({2, 0, -4, 0, 1})) == 4);  // t^4 - 4t^2 + 2
}

TEST_CASE("block report modes") {
  const SkewPencil zero = make_pencil(QMatrix(1, 1), QMatrix(1, 1));
  const Json r = jk_report(zero, ReportMode::Complex, true);
  CHECK(r["blocks"].dump() == R"([{"kind":"kronecker","index":0}])");
  CHECK(r["verified"].get<bool>());

  const auto i = EigenvalueClass::irreducible(UPoly({1, 0, 1}));
  const std::vector<JKBlock> blocks{JKBlock::jordan(i, 2), JKBlock::jordan(EigenvalueClass::infinity(), 1)};
  const Json complex = blocks_to_json(blocks, ReportMode::Complex);
  REQUIRE(complex.size() == 3);
  CHECK(complex[1]["eigenvalue"]["root"] == 2);
  CHECK(complex[2]["eigenvalue"] == "inf");
  const Json real = blocks_to_json(blocks, ReportMode::Real);
  REQUIRE(real.size() == 2);
  CHECK(real[0]["kind"] == "real_jordan");
  CHECK(real[0]["eigenvalue"]["beta_squared"] == "1");
  CHECK(real[0]["size"] == 2);
}

TEST_CASE("size lists") {
  CHECK(parse_size_list("3, 1", "x") == std::vector<std::size_t>{3, 1});
  CHECK_THROWS_AS(parse_size_list("3,", "x"), Error);
  CHECK_THROWS_AS(parse_size_list("3,-1", "x"), Error);
  CHECK_THROWS_AS(parse_size_list("", "x"), Error);
}

TEST_CASE("printed expressions parse back") {
  const std::vector<std::string> names{"x1_1", "y1_1", "z", "lambda"};
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const Polynomial p = random_polynomial(rng, 4, 3) * make_rational(trial + 1, 4);
    CHECK(parse_polynomial(p.to_string(names), names) == p);
    Polynomial den = random_polynomial(rng, 4, 2);
    if (den.is_zero()) continue;
    const RatFunc f = RatFunc(p) / RatFunc(den);
    CHECK(parse_ratfunc(f.to_string(names), names) == f);
  }
}
