#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>

#include "lqgame/config_io.hpp"
#include "test_support.hpp"

using namespace lqgame;

namespace {

bool has_violation(const std::vector<Violation>& v, const std::string& field,
                   const std::string& needle) {
  for (const auto& x : v)
    if (x.field == field && x.message.find(needle) != std::string::npos)
      return true;
  return false;
}

const char* kScalarConfig = R"(
# scalar experiment
horizon = 30
A = [[0.9]]
Bd = [[1.0]]
Ba = [[1.0]]
C = [[1.0]]
D = [[1.0]]
E = [[1.0]]
sigma_s = [[4.0]]
sigma_o = [[1.0]]
x0_mean = [0.0]
x0_cov = [[1.0]]
Q = [[1.0]]
Q_N = [[8.0]]
Rd = [[1.0]]
Ra = [[1.5]]
Ra_overrides = {29: [[10.0]]}
Od = 0.0
Oa = 15.0
info_structure = defender_leads
)";

}  // namespace

TEST_CASE("scalar experiment spec validates cleanly") {
  GameSpec spec = test::scalar_family_spec(0.9, 1.5, 0.0, 15.0);
  CHECK(validate(spec).empty());
  CHECK(spec.horizon == 30);
  CHECK(spec.state_dim() == 1);
  CHECK(spec.Ra[28](0, 0) == 1.5);
  CHECK(spec.Ra[29](0, 0) == 10.0);
}

TEST_CASE("validate flags a zero-eigenvalue Rd stage") {
  GameSpec spec = test::scalar_family_spec(0.9, 1.5, 0.0, 15.0);
  spec.Rd[3](0, 0) = 0.0;
  auto v = validate(spec);
  CHECK(has_violation(v, "Rd[3]", "not positive definite"));
}

TEST_CASE("validate flags negative action costs") {
  GameSpec spec = test::scalar_family_spec(0.9, 1.5, 0.0, 15.0);
  spec.Od[7] = -1.0;
  auto v = validate(spec);
  CHECK(has_violation(v, "Od[7]", "negative"));
}

TEST_CASE("validate flags PSD failures and dimension mismatches") {
  GameSpec spec = test::scalar_family_spec(0.9, 1.5, 0.0, 15.0);
  spec.sigma_s(0, 0) = -0.5;
  CHECK(has_violation(validate(spec), "sigma_s", "not positive semi-definite"));

  GameSpec bad = test::scalar_family_spec(0.9, 1.5, 0.0, 15.0);
  bad.D = MatrixXd::Ones(1, 3);
  CHECK(has_violation(validate(bad), "D", "columns"));

  GameSpec short_horizon = test::scalar_family_spec(0.9, 1.5, 0.0, 15.0);
  short_horizon.horizon = 0;
  CHECK(has_violation(validate(short_horizon), "horizon", "at least 1"));
}

TEST_CASE("known-exact initial state requires a zero covariance") {
  GameSpec spec = test::scalar_family_spec(0.9, 1.5, 0.0, 15.0);
  spec.initial_kind = InitialStateKind::KnownExactly;
  CHECK(has_violation(validate(spec), "x0_cov", "exactly zero"));
  spec.x0_cov.setZero();
  CHECK(validate(spec).empty());
}

TEST_CASE("default observation rule is i_d * (1 - i_a)") {
  ObservationRule rule;
  CHECK(rule.h(0, 0) == 0);
  CHECK(rule.h(0, 1) == 0);
  CHECK(rule.h(1, 0) == 1);
  CHECK(rule.h(1, 1) == 0);
  CHECK(rule.is_standard());
  rule.h = [](int, int) { return 1; };
  CHECK_FALSE(rule.is_standard());
}

TEST_CASE("perfect observation requires square invertible D and no noise") {
  GameSpec spec = test::scalar_family_spec(0.9, 1.5, 0.0, 15.0);
  CHECK_FALSE(perfect_observation(spec));
  spec.E = MatrixXd::Zero(1, 1);
  CHECK(perfect_observation(spec));
  spec.E = MatrixXd::Ones(1, 1);
  spec.sigma_o = MatrixXd::Zero(1, 1);
  CHECK(perfect_observation(spec));
  spec.D = MatrixXd::Zero(1, 1);
  CHECK_FALSE(perfect_observation(spec));
}

TEST_CASE("config text parses into the scalar experiment spec") {
  GameSpec parsed = parse_spec(kScalarConfig);
  CHECK(parsed == test::scalar_family_spec(0.9, 1.5, 0.0, 15.0));
  CHECK(parsed.horizon == 30);
  CHECK(parsed.Ra[29](0, 0) == 10.0);
  CHECK(parsed.Ra[0](0, 0) == 1.5);
}

TEST_CASE("bare numbers act as 1x1 matrices") {
  std::string text(kScalarConfig);
  auto pos = text.find("A = [[0.9]]");
  text.replace(pos, 11, "A = 0.9");
  CHECK(parse_spec(text) == test::scalar_family_spec(0.9, 1.5, 0.0, 15.0));
}

TEST_CASE("missing required field is reported by name") {
  std::string text(kScalarConfig);
  auto pos = text.find("Ba = [[1.0]]");
  text.replace(pos, 12, "");
  try {
    parse_spec(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.field() == "Ba");
    CHECK(std::string(e.what()).find("missing") != std::string::npos);
  }
}

TEST_CASE("duplicate and unknown keys are rejected with line numbers") {
  CHECK_THROWS_AS(parse_config(std::string(kScalarConfig) + "\nA = [[0.5]]\n"),
                  ParseError);
  try {
    parse_config(std::string(kScalarConfig) + "\nwhatnot = 3\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.field() == "whatnot");
    CHECK(e.line() > 20);
  }
}

TEST_CASE("dimension mismatch in the config surfaces both fields") {
  std::string text(kScalarConfig);
  auto pos = text.find("A = [[0.9]]");
  text.replace(pos, 11, "A = [[0.9, 0.0], [0.0, 0.9]]");
  try {
    parse_spec(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    std::string what = e.what();
    CHECK(what.find("Bd") != std::string::npos);
    CHECK(what.find("A is 2x2") != std::string::npos);
  }
}

TEST_CASE("override outside the stage range is rejected") {
  std::string text(kScalarConfig);
  auto pos = text.find("horizon = 30");
  text.replace(pos, 12, "horizon = 20");
  CHECK_THROWS_AS(parse_spec(text), ParseError);  // override names stage 29
}

TEST_CASE("initial state forms are mutually exclusive") {
  std::string text(kScalarConfig);
  CHECK_THROWS_AS(parse_config(text + "\nx0_known = [1.0]\n"), ParseError);
  auto pos = text.find("x0_mean = [0.0]");
  text.replace(pos, 15, "");
  CHECK_THROWS_AS(parse_config(text), ParseError);
}

TEST_CASE("serialize then parse reproduces the spec field for field") {
  GameSpec scalar = test::scalar_family_spec(1.1, 20.0, 25.0, 40.0);
  CHECK(parse_spec(serialize_spec(scalar)) == scalar);

  test::Engine eng(20260823);
  for (int i = 0; i < 20; ++i) {
    GameSpec spec = test::random_spec(eng, 3, 5);
    CAPTURE(i);
    CHECK(parse_spec(serialize_spec(spec)) == spec);
  }

  GameSpec exact = test::scalar_family_spec(0.9, 1.5, 0.0, 15.0);
  exact.initial_kind = InitialStateKind::KnownExactly;
  exact.x0_mean[0] = 2.5;
  exact.x0_cov.setZero();
  CHECK(parse_spec(serialize_spec(exact)) == exact);
}

TEST_CASE("number formatting is exact and minimal") {
  for (double v : {0.1, 1.0 / 3.0, -4.81, 1e-17, 123456.75, 0.0, -0.0, 2e300}) {
    std::string s = format_number(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(8.0) == "8.0");
}

TEST_CASE("spec equality notices single-entry changes") {
  GameSpec a = test::scalar_family_spec(0.9, 1.5, 0.0, 15.0);
  GameSpec b = a;
  CHECK(a == b);
  b.Oa[12] = 14.0;
  CHECK_FALSE(a == b);
}
