#include "matool/branch.hpp"
#include "matool/eigen.hpp"
#include "matool/error.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace matool;

namespace {

MeshPtr unit(std::size_t n = 1025) {
  return RadialMesh::build(n, 1.0, WeightFunction::constant());
}

Branch run(const Nonlinearity& f, std::size_t n = 1025, int per_decade = 24) {
  return sweep(f, unit(n), default_amplitude_grid(per_decade));
}

std::vector<double> scaled(double base, std::initializer_list<double> factors) {
  std::vector<double> out;
  for (double x : factors)
    out.push_back(base * x);
  return out;
}

constexpr double kL1 = M_PI * M_PI / 4;

} // namespace

TEST_CASE("case ids from the limits of f/s^N") {
  CHECK(case_of(Nonlinearity::homogeneous(1)) == CaseId::i);
  CHECK(case_of(Nonlinearity::ratpow(1, 1, 1)) == CaseId::ii);
  CHECK(case_of(Nonlinearity::ratpow(2, 2, 1)) == CaseId::v);
  CHECK(case_of(Nonlinearity::power(2, 1, 1)) == CaseId::vi);
  CHECK(case_of(Nonlinearity::ratpow(0.5, 0.25, 1)) == CaseId::vii);
  CHECK(case_of(Nonlinearity::exponential(1)) == CaseId::ix);
  CHECK(to_string(CaseId::vii) == "(vii)");
}

TEST_CASE("linear thresholds") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(linear_threshold(kL1, 0.0, 1) == inf);
  CHECK(linear_threshold(kL1, inf, 2) == 0.0);
  CHECK(linear_threshold(8.0, 4.0, 2) == doctest::Approx(4.0));
}

TEST_CASE("scaling to the unit ball") {
  CHECK(scale_to_ball(2.0, 3.0, WeightFunction::constant()) == doctest::Approx(18.0));
  CHECK_THROWS_AS(scale_to_ball(2.0, 3.0, WeightFunction::parse("power:1")), InvalidArgument);
}

TEST_CASE("default amplitude grid") {
  const auto g = default_amplitude_grid();
  CHECK(g.size() == 8 * 48 + 1);
  CHECK(g.front() == 1e-4);
  CHECK(g.back() == 1e4);
}

TEST_CASE("homogeneous branch is vertical") {
  const auto br = run(Nonlinearity::homogeneous(1));
  CHECK(br.vertical);
  CHECK(br.failures.empty());
  CHECK(br.turning_points.empty());
  CHECK(std::abs(br.max_lambda() - br.min_lambda()) < 1e-6 * kL1);
  const auto c = count_solutions(br, br.points.front().lambda);
  CHECK(c.continuum);
  CHECK(count_solutions(br, 2 * kL1).count == 0);
}

TEST_CASE("s/(1+s) increases from lambda1 to infinity") {
  const auto br = run(Nonlinearity::ratpow(1, 1, 1));
  CHECK_FALSE(br.vertical);
  CHECK(br.turning_points.empty());
  for (std::size_t i = 1; i < br.points.size(); ++i)
    CHECK(br.points[i].lambda > br.points[i - 1].lambda);
  const auto rep = estimate_asymptotes(br, br.spec, kL1);
  CHECK(rep.zero_matches);
  CHECK(rep.inf_matches);
  CHECK(rep.zero.value == doctest::Approx(kL1).epsilon(1e-3));
  CHECK(rep.inf.kind == AsymptoteEstimate::Kind::to_infinity);
  CHECK(count_solutions(br, 0.9 * kL1).count == 0);
  CHECK(count_solutions(br, 2 * kL1).count == 1);
}

TEST_CASE("exponential fold against the closed form") {
  const double star = oracle::gelfand_lambda_star();
  CHECK(star == doctest::Approx(0.878457679781).epsilon(1e-10));
  const auto br = run(Nonlinearity::exponential(1), 2049, 48);
  REQUIRE(br.turning_points.size() == 1);
  const auto& tp = br.turning_points.front();
  CHECK(tp.maximum);
  CHECK(std::abs(tp.lambda - star) < 1e-6);
  CHECK(count_solutions(br, 0.5).count == 2);
  CHECK(count_solutions(br, 1.1 * star).count == 0);
  CHECK(br.case_id == CaseId::ix);
  CHECK(br.asymptote_zero.kind == AsymptoteEstimate::Kind::to_zero);
}

TEST_CASE("case (v) has a minimum and two solutions above it") {
  const auto br = run(Nonlinearity::ratpow(2, 2, 1));
  REQUIRE(br.turning_points.size() == 1);
  CHECK_FALSE(br.turning_points.front().maximum);
  const double lo = br.turning_points.front().lambda;
  CHECK(lo > 2 * kL1);
  CHECK(count_solutions(br, kL1).count == 0);
  CHECK(count_solutions(br, 0.99 * lo).count == 0);
  CHECK(count_solutions(br, 1.5 * lo).count == 2);
  const auto rep = verify_case(br, classify_case(br.spec, kL1), scaled(kL1, {0.5, 1, 3, 10}));
  CHECK(rep.passed());
}

TEST_CASE("cases (vi) and (vii) solve for every lambda") {
  for (const auto& f : {Nonlinearity::power(2, 1, 1), Nonlinearity::ratpow(0.5, 0.25, 1)}) {
    const auto br = run(f);
    CAPTURE(f.id());
    const auto pred = classify_case(f, kL1);
    REQUIRE(pred.intervals.size() == 1);
    CHECK_FALSE(pred.intervals.front().nonexistence);
    const auto rep = verify_case(br, pred, scaled(kL1, {0.05, 0.5, 1, 2, 4}));
    CHECK(rep.passed());
    for (const auto& c : rep.checks) {
      CHECK(c.judged);
      CHECK(c.observed >= 1);
    }
  }
}

TEST_CASE("verify_case flags a wrong prediction") {
  const auto br = run(Nonlinearity::ratpow(1, 1, 1), 513);
  CasePrediction wrong;
  wrong.case_id = CaseId::ii;
  wrong.intervals.push_back({Threshold::of(0.0), Threshold::of(kL1), 1, false, "bogus"});
  const auto rep = verify_case(br, wrong, scaled(kL1, {0.5}));
  CHECK_FALSE(rep.passed());
}

TEST_CASE("tail estimate needs enough points") {
  Branch br = run(Nonlinearity::ratpow(1, 1, 1), 257, 4);
  br.points.resize(3);
  CHECK_THROWS(estimate_tail(br, true));
}

TEST_CASE("radius scaling matches the unit ball") {
  const auto f = Nonlinearity::exponential(1);
  const double R = 2.0;
  const auto big = RadialMesh::build(1025, R, WeightFunction::constant());
  const auto grid = std::vector<double>{0.5, 1.0, 2.0};
  for (double s : grid) {
    const double lam_R = solve_lambda_for_amplitude(s, f, big).lambda;
    const double lam_1 = solve_lambda_for_amplitude(s, f, unit()).lambda;
    CHECK(scale_to_ball(lam_R, R, WeightFunction::constant()) == doctest::Approx(lam_1).epsilon(1e-8));
  }
}
