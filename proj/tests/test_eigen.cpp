#include "matool/eigen.hpp"
#include "matool/error.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace matool;

namespace {

// first zero at R by an independent RK4 march (tests/oracles.hpp), h = 2e-5
constexpr double kMu3One = 2.7367936347;
constexpr double kMu4One = 2.9152297164;
constexpr double kMu2Lin = 1.8959738510;
constexpr double kMu3Lin = 2.3295423972;
constexpr double kMu4Lin = 2.5966057758;

MeshPtr unit(std::size_t n = 2049, WeightFunction a = WeightFunction::constant(), double R = 1.0) {
  return RadialMesh::build(n, R, a);
}

} // namespace

TEST_CASE("closed-form anchor p = 2") {
  const auto sh = eig_shoot(2.0, unit(4096));
  const auto ry = eig_rayleigh(2.0, unit(4096));
  CHECK(std::abs(sh.mu1 - M_PI * M_PI / 4) < 1e-6);
  CHECK(std::abs(ry.mu1 - M_PI * M_PI / 4) < 1e-5);
  const auto big = eig_shoot(2.0, unit(4096, WeightFunction::constant(), 2.0));
  CHECK(std::abs(big.mu1 - M_PI * M_PI / 16) < 1e-6);
}

TEST_CASE("eigenfunction of p = 2 is the cosine") {
  const auto mesh = unit(2049);
  const auto sh = eig_shoot(2.0, mesh);
  for (std::size_t i = 0; i < mesh->size(); i += 16)
    CHECK(std::abs(sh.eigenfunction.values[i] - std::cos(M_PI * mesh->node(i) / 2)) < 1e-8);
}

TEST_CASE("frozen oracle values for p = 3, 4 and a = 1 + r") {
  struct Row {
    double p;
    WeightFunction a;
    double expected;
  };
  for (const auto& row : {Row{3.0, WeightFunction::constant(), kMu3One}, Row{4.0, WeightFunction::constant(), kMu4One},
                          Row{2.0, WeightFunction::linear(), kMu2Lin}, Row{3.0, WeightFunction::linear(), kMu3Lin},
                          Row{4.0, WeightFunction::linear(), kMu4Lin}}) {
    const auto mesh = unit(4096, row.a);
    CAPTURE(row.p);
    CAPTURE(row.a.id());
    CHECK(eig_shoot(row.p, mesh).mu1 == doctest::Approx(row.expected).epsilon(1e-8));
    CHECK(eig_rayleigh(row.p, mesh).mu1 == doctest::Approx(row.expected).epsilon(1e-6));
  }
}

TEST_CASE("oracle reproduces its frozen value on a coarser step") {
  CHECK(oracle::eigen_mu(3.0, [](double) { return 1.0; }, 1.0) == doctest::Approx(kMu3One).epsilon(1e-8));
}

TEST_CASE("a heavier weight lowers mu1") {
  CHECK(eig_rayleigh(2.0, unit(2049, WeightFunction::linear())).mu1 < M_PI * M_PI / 4);
  CHECK(eig_shoot(2.0, unit(2049, WeightFunction::linear())).mu1 < M_PI * M_PI / 4);
}

TEST_CASE("Rayleigh quotient of the shooting eigenfunction") {
  for (double p : {2.0, 3.0}) {
    const auto mesh = unit(4097);
    const auto sh = eig_shoot(p, mesh);
    const auto st = rayleigh_state(p, *mesh, sh.eigenfunction.values);
    CHECK(st.quotient == doctest::Approx(std::pow(sh.mu1, p - 1)).epsilon(1e-5));
    CHECK(st.f1 >= 0.0);
    CHECK(st.f2 > 0.0);
  }
}

TEST_CASE("lambda1 by both methods") {
  CHECK(lambda1(1, unit(4096)) == doctest::Approx(M_PI * M_PI / 4).epsilon(1e-7));
  CHECK(lambda1(1, unit(4096, WeightFunction::constant(), 2.0)) == doctest::Approx(M_PI * M_PI / 16).epsilon(1e-7));
  const auto rep = lambda1_report(3, unit(4096));
  CHECK(rep.relative_gap < 1e-4);
}

TEST_CASE("bracket errors") {
  const auto mesh = unit(513);
  CHECK_THROWS_AS(eig_shoot(2.0, mesh, {3.0, 5.0}), BracketError);
  CHECK_THROWS_AS(eig_shoot(2.0, mesh, {0.5, 1.0}), BracketError);
  // a bracket around the second mode (9 pi^2 / 4) does not straddle the principal sign pattern
  CHECK_THROWS(eig_shoot(2.0, mesh, {20.0, 23.0}));
  CHECK_THROWS_AS(eig_shoot(1.5, mesh), InvalidArgument);
}

TEST_CASE("mu1 scan") {
  const auto mesh = unit(2049);
  const std::vector<double> g{2.0, 2.5, 3.0};
  const auto scan = mu1_scan(g, mesh);
  REQUIRE(scan.rows.size() == 3);
  for (const auto& r : scan.rows)
    CHECK(r.mu1 > 0.0);
  CHECK(scan.max_jump < 0.5);
  const std::vector<double> near{2.0, 2.0 + 1e-3};
  const auto s2 = mu1_scan(near, mesh);
  CHECK(std::abs(s2.rows[1].mu1 - s2.rows[0].mu1) < 1e-2);
  const std::vector<double> dup{3.0, 3.0};
  const auto s3 = mu1_scan(dup, mesh);
  CHECK(s3.rows[0].mu1 == s3.rows[1].mu1);
  CHECK(check_mu_scan(scan).no_spikes);
}

TEST_CASE("scan check flags a spike") {
  MuScan s;
  for (double mu : {2.0, 2.01, 2.02, 2.5, 2.03, 2.04})
    s.rows.push_back({0.0, mu});
  const auto chk = check_mu_scan(s);
  CHECK_FALSE(chk.small_steps);
  CHECK_FALSE(chk.no_spikes);
}

TEST_CASE("sign change checks") {
  const auto mesh = unit(513);
  const auto lin = sample_profile(mesh, [](double r) { return 1 - r; }, [](double) { return -1.0; });
  const auto second = sample_profile(
      mesh, [](double r) { return std::cos(3 * M_PI * r / 2); }, [](double r) { return -1.5 * M_PI * std::sin(1.5 * M_PI * r); });
  CHECK_FALSE(sign_change_check(lin));
  CHECK(sign_change_check(second));
  CHECK_FALSE(sign_change_check(eig_shoot(2.0, mesh).eigenfunction));
  CHECK(interior_zero_count(second.values) == 1);
}

TEST_CASE("property: principal eigenfunctions are positive, decreasing and concave") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> P(2.0, 4.0), R(0.5, 2.0);
  for (int k = 0; k < 8; ++k) {
    const double p = P(rng), rad = R(rng);
    const auto mesh = RadialMesh::build(1025, rad, k % 2 ? WeightFunction::linear() : WeightFunction::constant());
    const auto ep = eig_shoot(p, mesh);
    CAPTURE(p);
    CHECK(ep.mu1 > 0.0);
    const auto& v = ep.eigenfunction.values;
    CHECK(v.front() == doctest::Approx(1.0));
    CHECK(v.back() == 0.0);
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
      CHECK(v[i] > 0.0);
      CHECK(v[i] <= v[i - 1]);
      CHECK((v[i + 1] - v[i]) - (v[i] - v[i - 1]) <= 1e-12);
    }
  }
}

TEST_CASE("property: scaling law for a constant weight") {
  const double base = eig_shoot(2.0, unit(4097)).mu1;
  for (double R : {0.5, 2.0, 3.0}) {
    const double mu = eig_shoot(2.0, unit(4097, WeightFunction::constant(), R)).mu1;
    CHECK(mu * R * R == doctest::Approx(base).epsilon(1e-9));
  }
}
