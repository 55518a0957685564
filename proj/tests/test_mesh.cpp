#include "matool/error.hpp"
#include "matool/mesh.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace matool;

TEST_CASE("uniform mesh on [0,1] with 17 nodes") {
  const auto m = RadialMesh::build(17, 1.0, WeightFunction::constant());
  REQUIRE(m->size() == 17);
  for (std::size_t i = 0; i < 17; ++i) {
    CHECK(m->node(i) == doctest::Approx(i / 16.0).epsilon(1e-15));
    CHECK(m->a_values()[i] == 1.0);
  }
  CHECK(m->node(0) == 0.0);
  CHECK(m->node(16) == 1.0);
}

TEST_CASE("radius two keeps the weight sum") {
  const auto m = RadialMesh::build(17, 2.0, WeightFunction::constant());
  CHECK(m->radius() == 2.0);
  double sum = 0.0;
  for (double w : m->weights())
    sum += w;
  CHECK(std::abs(sum - 2.0) < 1e-12 * 2.0);
}

TEST_CASE("linear weight reaches 2 at the last node") {
  const auto m = RadialMesh::build(1024, 1.0, WeightFunction::linear());
  CHECK(m->a_values().back() == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("invalid meshes are rejected") {
  CHECK_THROWS_AS(RadialMesh::build(15, 1.0, WeightFunction::constant()), InvalidArgument);
  CHECK_THROWS_AS(RadialMesh::build(64, 0.0, WeightFunction::constant()), InvalidArgument);
  CHECK_THROWS_AS(WeightFunction::constant(0.0), InvalidArgument);
  CHECK_THROWS_AS(WeightFunction::parse("const:0"), InvalidArgument);
  CHECK_THROWS_AS(WeightFunction::parse("zigzag"), InvalidArgument);
  CHECK_THROWS_AS(parse_grading("chebyshev"), InvalidArgument);
}

TEST_CASE("weight presets parse and round-trip their id") {
  for (const char* id : {"one", "const:2.5", "linear", "power:2"}) {
    const auto w = WeightFunction::parse(id);
    CHECK(w.id() == id);
  }
  CHECK(WeightFunction::parse("power:2")(0.5) == doctest::Approx(0.25));
}

TEST_CASE("quadrature of simple integrands") {
  const auto m = RadialMesh::build(1025, 1.0, WeightFunction::constant());
  const auto r = m->sample([](double x) { return x; });
  const auto r2 = m->sample([](double x) { return x * x; });
  const auto one = m->sample([](double) { return 1.0; });
  CHECK(std::abs(m->integrate(r) - 0.5) < 1e-8);
  CHECK(std::abs(m->integrate(r2) - 1.0 / 3.0) < 1e-6);
  CHECK(m->integrate(one) == doctest::Approx(1.0).epsilon(1e-15));
  const auto r3 = m->sample([](double x) { return x * x * x; });
  CHECK(std::abs(m->integrate(r3, QuadRule::simpson) - 0.25) < 1e-14);
  CHECK_THROWS_AS(m->integrate(std::vector<double>(10, 1.0)), InvalidArgument);
}

TEST_CASE("simpson needs a uniform mesh with an odd node count") {
  const auto even = RadialMesh::build(1024, 1.0, WeightFunction::constant());
  const auto graded = RadialMesh::build(1025, 1.0, WeightFunction::constant(), Grading::geometric);
  CHECK_FALSE(even->simpson_capable());
  CHECK_FALSE(graded->simpson_capable());
  CHECK_THROWS_AS(even->integrate(even->sample([](double) { return 1.0; }), QuadRule::simpson), InvalidArgument);
}

TEST_CASE("geometric grading clusters nodes at the origin") {
  const auto m = RadialMesh::build(200, 1.0, WeightFunction::constant(), Grading::geometric);
  CHECK(m->cell(198) / m->cell(0) == doctest::Approx(100.0).epsilon(1e-9));
  CHECK(m->node(0) == 0.0);
  CHECK(m->radius() == 1.0);
}

TEST_CASE("radial moment closed forms match quadrature") {
  const auto m = RadialMesh::build(4097, 1.0, WeightFunction::constant());
  for (const auto& w : {WeightFunction::constant(2.0), WeightFunction::linear(), WeightFunction::power(1.5)})
    for (double q : {1.0, 2.0, 3.0}) {
      const auto g = m->sample([&](double t) { return q * std::pow(t, q - 1.0) * w(t); });
      CHECK(w.radial_moment(q, 1.0) == doctest::Approx(m->integrate(g, QuadRule::simpson)).epsilon(1e-9));
    }
}

TEST_CASE("sup norm examples") {
  const auto m = RadialMesh::build(257, 1.0, WeightFunction::constant());
  const auto zero = sample_profile(m, [](double) { return 0.0; }, [](double) { return 0.0; });
  const auto para = sample_profile(m, [](double r) { return 1 - r * r; }, [](double r) { return -2 * r; });
  const auto cosine = sample_profile(
      m, [](double r) { return std::cos(M_PI * r / 2); }, [](double r) { return -M_PI / 2 * std::sin(M_PI * r / 2); });
  CHECK(sup_norm(zero) == 0.0);
  CHECK(sup_norm(para) == 1.0);
  CHECK(sup_norm(cosine) == 1.0);
  CHECK(is_admissible_positive(para));
  CHECK(is_admissible_positive(cosine));
  const auto shifted = sample_profile(m, [](double r) { return 1 - r; }, [](double) { return -1.0; });
  CHECK_FALSE(is_admissible_positive(shifted));
}

TEST_CASE("property: trapezoid weights are positive and sum to R") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> n(16, 3000);
  std::uniform_real_distribution<double> R(0.1, 10.0);
  for (int k = 0; k < 40; ++k) {
    const double rad = R(rng);
    const auto m = RadialMesh::build(n(rng), rad, WeightFunction::linear(), k % 2 ? Grading::geometric : Grading::uniform);
    double sum = 0.0;
    for (std::size_t i = 0; i < m->size(); ++i) {
      CHECK(m->weights()[i] > 0.0);
      if (i > 0)
        CHECK(m->node(i) > m->node(i - 1));
      sum += m->weights()[i];
    }
    CHECK(std::abs(sum - rad) <= 1e-12 * rad);
  }
}
