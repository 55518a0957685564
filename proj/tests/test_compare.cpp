#include "matool/compare.hpp"
#include "matool/error.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace matool;

namespace {

MeshPtr unit(std::size_t n = 1025) {
  return RadialMesh::build(n, 1.0, WeightFunction::constant());
}

constexpr double kPi2over4 = M_PI * M_PI / 4;

} // namespace

TEST_CASE("constant coefficient pi^2/4 gives the cosine") {
  const auto mesh = unit();
  const auto p = solve_comparison_profile(Coefficient::constant(kPi2over4), mesh, 1);
  for (std::size_t i = 0; i < mesh->size(); ++i)
    CHECK(std::abs(p.profile.values[i] - std::cos(M_PI * mesh->node(i) / 2)) < 1e-6);
  CHECK(p.interior_zeros == 0);
}

TEST_CASE("constant coefficient pi^2 has its zero at one half") {
  const auto p = solve_comparison_profile(Coefficient::constant(M_PI * M_PI), unit(), 1);
  REQUIRE(p.first_zero);
  CHECK(*p.first_zero == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(p.interior_zeros == 1);
  CHECK(p.terminal < 0.0);
}

TEST_CASE("scaling the coefficient moves the first zero inward") {
  const auto mesh = unit();
  const auto shape = Coefficient::smooth_bump(4.0, 2.0, 0.5, 0.25);
  double prev = 2.0;
  std::size_t prev_count = 0;
  for (double c : {4.0, 8.0, 16.0, 32.0, 64.0}) {
    const auto p = solve_comparison_profile(shape.scaled(c), mesh, 2);
    REQUIRE(p.first_zero);
    CHECK(*p.first_zero < prev);
    CHECK(p.interior_zeros >= prev_count);
    prev = *p.first_zero;
    prev_count = p.interior_zeros;
  }
}

TEST_CASE("tuned scale puts the zero at R") {
  for (int N : {1, 2}) {
    const auto mesh = unit();
    const double sigma = tune_coefficient_scale(Coefficient::constant(1.0), mesh, N);
    const auto p = solve_comparison_profile(Coefficient::constant(sigma), mesh, N);
    CHECK(std::abs(p.terminal) < 1e-9);
    if (N == 1)
      CHECK(sigma == doctest::Approx(kPi2over4).epsilon(1e-9));
  }
}

TEST_CASE("box bump forces an interior zero") {
  const auto b1 = Coefficient::constant(kPi2over4);
  const auto inst = make_comparison_instance(b1, Coefficient::box_bump(kPi2over4, 1.0, 0.3, 0.6), unit(), 1);
  const auto r = sturm_compare(inst);
  CHECK(r.strict);
  CHECK_FALSE(r.equal);
  CHECK(r.zero_in_interior);
  CHECK(r.hypothesis_violations.empty());
  CHECK(r.consistent());
}

TEST_CASE("equal coefficients give proportional profiles") {
  const auto b1 = Coefficient::constant(kPi2over4);
  const auto inst = make_comparison_instance(b1, b1, unit(), 1, 2.0);
  const auto r = sturm_compare(inst);
  CHECK(r.equal);
  CHECK(r.proportional);
  CHECK_FALSE(r.zero_in_interior);
  REQUIRE(r.mu);
  CHECK(*r.mu == doctest::Approx(2.0).epsilon(1e-12));
  const auto pr = picone_residual(inst);
  CHECK(std::abs(pr.young_min) < 1e-10);
  CHECK(pr.residual < 1e-10);
}

TEST_CASE("reversed coefficients are reported as a hypothesis violation") {
  const auto big = Coefficient::constant(2.0 * kPi2over4);
  const auto inst = make_comparison_instance(big, Coefficient::constant(kPi2over4), unit(257), 1);
  const auto r = sturm_compare(inst);
  CHECK_FALSE(r.hypothesis_violations.empty());
  CHECK(r.consistent());
}

TEST_CASE("strict pair has a positive right-hand side") {
  const auto mesh = unit();
  const double sigma = tune_coefficient_scale(Coefficient::constant(1.0), mesh, 1);
  const auto inst = make_comparison_instance(Coefficient::constant(sigma),
                                             Coefficient::smooth_bump(sigma, 0.5, 0.5, 0.25), mesh, 1);
  const auto pr = picone_residual(inst);
  CHECK(pr.rhs_integral > 0.0);
  CHECK(pr.coefficient_integral > 0.0);
  CHECK(pr.young_min >= -1e-10);
  CHECK(pr.residual < 1e-6 * pr.rhs_integral);
}

TEST_CASE("truncation too close to the zero is rejected") {
  const auto b1 = Coefficient::constant(kPi2over4);
  const auto inst = make_comparison_instance(b1, b1, unit(), 1);
  CHECK_THROWS_AS(picone_residual(inst, 0.0), InvalidArgument);
}

TEST_CASE("Picone residual converges at second order") {
  const std::vector<std::size_t> sizes{257, 513, 1025, 2049};
  for (int N : {1, 2}) {
    const double base = N == 1 ? 2.0 : 3.0;
    const auto ref = picone_refinement(Coefficient::constant(base), Coefficient::smooth_bump(base, 1.0, 0.5, 0.25),
                                       N, sizes);
    CAPTURE(N);
    REQUIRE(ref.orders.size() == 3);
    CHECK(ref.min_order >= 2.0);
    CHECK(ref.young_min >= -1e-10);
  }
}

TEST_CASE("property: Young integrand is non-negative") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(1e-3, 5.0);
  for (int k = 0; k < 20000; ++k) {
    const int N = 1 + k % 3;
    const double y = young_integrand(pos(rng), -pos(rng), pos(rng), -pos(rng), N);
    CHECK(y >= -1e-10 * (1 + std::abs(y)));
  }
  CHECK(young_integrand(0.7, -0.3, 1.4, -0.6, 2) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
}

TEST_CASE("randomized comparison suite") {
  const auto rep = run_sturm_suite(2024, 40, 513);
  CHECK(rep.trials.size() == 40);
  CHECK(rep.zero_pass == 40);
  CHECK(rep.proportional_pass == 40);
  CHECK(rep.passed());
  const auto again = run_sturm_suite(2024, 40, 513);
  REQUIRE(again.trials.size() == rep.trials.size());
  for (std::size_t i = 0; i < rep.trials.size(); ++i)
    CHECK(again.trials[i].b2_description == rep.trials[i].b2_description);
}
