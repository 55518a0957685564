#include "matool/bvp.hpp"
#include "matool/eigen.hpp"
#include "matool/error.hpp"
#include "matool/operators.hpp"

#include <doctest.h>

#include <cmath>

using namespace matool;

TEST_CASE("phi_p examples") {
  CHECK(phi_p(-2.0, 3.0) == doctest::Approx(-4.0));
  for (double x : {-3.5, -1.0, 0.0, 0.25, 7.0})
    CHECK(phi_p(x, 2.0) == x);
  CHECK(phi_p(8.0, 1.5) == doctest::Approx(2.8284271247));
  CHECK(phi_p(0.0, 1.5) == 0.0);
  CHECK(dual_exponent(3.0) == doctest::Approx(1.5));
  for (double p : {2.0, 2.5, 3.0, 4.0})
    for (double x : {-2.0, 0.5, 3.0})
      CHECK(phi_p(phi_p(x, p), dual_exponent(p)) == doctest::Approx(x).epsilon(1e-12));
}

TEST_CASE("T_N of the constant one is (1 - r^2)/2") {
  const auto mesh = RadialMesh::build(1025, 1.0, WeightFunction::constant());
  OperatorSpec spec{OperatorKind::T_N, 2.0, 1, 1.0, std::nullopt, mesh};
  const auto one = sample_profile(mesh, [](double) { return 1.0; }, [](double) { return 0.0; });
  const auto out = apply_operator(spec, one);
  for (std::size_t i = 0; i < mesh->size(); ++i)
    CHECK(std::abs(out.values[i] - (1 - mesh->node(i) * mesh->node(i)) / 2) < 1e-6);
}

TEST_CASE("T_f with a vanishing nonlinearity returns zero") {
  const auto mesh = RadialMesh::build(257, 1.0, WeightFunction::constant());
  OperatorSpec spec{OperatorKind::T_f, 2.0, 1, 3.0, Nonlinearity::power(1.0, 0.0, 1), mesh};
  const auto v = sample_profile(mesh, [](double r) { return 2 - r; }, [](double) { return -1.0; });
  const auto out = apply_operator(spec, v);
  for (double x : out.values)
    CHECK(x == 0.0);
}

TEST_CASE("lambda1 T_N fixes the principal eigenfunction") {
  const auto mesh = RadialMesh::build(1025, 1.0, WeightFunction::constant());
  const auto ep = eig_shoot(2.0, mesh);
  OperatorSpec spec{OperatorKind::T_N, 2.0, 1, ep.mu1, std::nullopt, mesh};
  const auto out = apply_operator(spec, ep.eigenfunction);
  double worst = 0.0;
  for (std::size_t i = 0; i < mesh->size(); ++i)
    worst = std::max(worst, std::abs(out.values[i] - ep.eigenfunction.values[i]));
  CHECK(worst < 1e-4);
}

TEST_CASE("T_mu_p at p = 2 maps the cosine to itself") {
  const auto mesh = RadialMesh::build(2049, 1.0, WeightFunction::constant());
  OperatorSpec spec{OperatorKind::T_mu_p, 2.0, 1, M_PI * M_PI / 4, std::nullopt, mesh};
  const auto c = sample_profile(
      mesh, [](double r) { return std::cos(M_PI * r / 2); }, [](double r) { return -M_PI / 2 * std::sin(M_PI * r / 2); });
  const auto out = apply_operator(spec, c);
  for (std::size_t i = 0; i < mesh->size(); i += 64)
    CHECK(std::abs(out.values[i] - c.values[i]) < 1e-6);
}

TEST_CASE("operator preconditions") {
  const auto mesh = RadialMesh::build(65, 1.0, WeightFunction::constant());
  const auto neg = sample_profile(mesh, [](double r) { return r - 0.5; }, [](double) { return 1.0; });
  OperatorSpec spec{OperatorKind::T_N, 2.0, 1, 1.0, std::nullopt, mesh};
  CHECK_THROWS_AS(apply_operator(spec, neg), InvalidArgument);
  OperatorSpec bad_p{OperatorKind::T_mu_p, 1.5, 1, 1.0, std::nullopt, mesh};
  CHECK_THROWS_AS(bad_p.validate(), InvalidArgument);
  OperatorSpec no_f{OperatorKind::T_f, 2.0, 1, 1.0, std::nullopt, mesh};
  CHECK_THROWS_AS(no_f.validate(), InvalidArgument);
  const auto other = RadialMesh::build(129, 1.0, WeightFunction::constant());
  const auto v = sample_profile(other, [](double) { return 1.0; }, [](double) { return 0.0; });
  CHECK_THROWS_AS(apply_operator(spec, v), InvalidArgument);
}

TEST_CASE("Picard iteration: zero forcing contracts to zero") {
  const auto mesh = RadialMesh::build(257, 1.0, WeightFunction::constant());
  OperatorSpec spec{OperatorKind::T_f, 2.0, 1, 1.0, Nonlinearity::power(1.0, 0.0, 1), mesh};
  const auto v0 = sample_profile(mesh, [](double r) { return 1 - r; }, [](double) { return -1.0; });
  const auto res = picard_iterate(spec, v0);
  CHECK(res.converged);
  CHECK(sup_norm(res.profile) < 1e-9);
}

TEST_CASE("Picard iteration below lambda1 decays to zero") {
  const auto mesh = RadialMesh::build(513, 1.0, WeightFunction::constant());
  OperatorSpec spec{OperatorKind::T_N, 2.0, 1, 0.5 * M_PI * M_PI / 4, std::nullopt, mesh};
  const auto v0 = sample_profile(mesh, [](double) { return 1.0; }, [](double) { return 0.0; });
  const auto res = picard_iterate(spec, v0);
  CHECK(res.converged);
  CHECK(sup_norm(res.profile) < 1e-8);
}

TEST_CASE("Picard iteration at twice lambda1 matches the shooting solution") {
  const auto mesh = RadialMesh::build(1025, 1.0, WeightFunction::constant());
  const auto f = Nonlinearity::ratpow(1, 1, 1);
  const double lam = 2.0 * M_PI * M_PI / 4;
  OperatorSpec spec{OperatorKind::T_f, 2.0, 1, lam, f, mesh};
  const auto v0 = sample_profile(mesh, [](double r) { return 1 - r * r; }, [](double r) { return -2 * r; });
  const auto res = picard_iterate(spec, v0);
  REQUIRE(res.converged);
  const BvpShooter shooter(f, mesh);
  const auto roots = solve_amplitudes_for_lambda(lam, shooter, log_grid(1e-3, 1e3, 24));
  REQUIRE(roots.size() == 1);
  double worst = 0.0;
  for (std::size_t i = 0; i < mesh->size(); ++i)
    worst = std::max(worst, std::abs(res.profile.values[i] - roots[0].shot.profile.values[i]));
  CHECK(worst < 1e-4);
}

TEST_CASE("Picard iteration reports divergence") {
  const auto mesh = RadialMesh::build(129, 1.0, WeightFunction::constant());
  OperatorSpec spec{OperatorKind::T_f, 2.0, 1, 5.0, Nonlinearity::power(2.0, 1.0, 1), mesh};
  const auto v0 = sample_profile(mesh, [](double) { return 10.0; }, [](double) { return 0.0; });
  const auto res = picard_iterate(spec, v0, 1.0, 1e-10, 2000, 1e6);
  CHECK_FALSE(res.converged);
  CHECK_FALSE(res.diagnostic.empty());
}
