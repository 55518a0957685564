#include "matool/error.hpp"
#include "matool/nonlinearity.hpp"

#include <doctest.h>

#include <cmath>

using namespace matool;

TEST_CASE("declared limits of the presets") {
  const auto lin = Nonlinearity::ratpow(1, 1, 1); // s / (1 + s)
  CHECK(lin.f0() == 1.0);
  CHECK(lin.finf() == 0.0);
  const auto e = Nonlinearity::exponential(1);
  CHECK(e.f0() == kInf);
  CHECK(e.finf() == kInf);
  const auto sq = Nonlinearity::power(2, 1, 1);
  CHECK(sq.f0() == 0.0);
  CHECK(sq.finf() == kInf);
  const auto h = Nonlinearity::homogeneous(2);
  CHECK(h.f0() == 1.0);
  CHECK(h.finf() == 1.0);
  CHECK(h.is_homogeneous());
  const auto v = Nonlinearity::ratpow(2, 2, 1); // s^2 / (1 + s^2)
  CHECK(v.f0() == 0.0);
  CHECK(v.finf() == 0.0);
  const auto b = Nonlinearity::blend(2.0, 0.5, 1.0, 1);
  CHECK(b.f0() == doctest::Approx(2.0));
  CHECK(b.finf() == doctest::Approx(0.5));
}

TEST_CASE("probes agree with the declared limits") {
  for (const char* id : {"ratpow:1:1", "ratpow:2:2", "power:2", "power:1:3", "blend:2:0.5", "homogeneous",
                         "ratpow:0.5:0.25", "powsum:1:1:1:2"}) {
    const auto f = Nonlinearity::parse(id, 1);
    const auto p = f.probe_limits();
    CAPTURE(id);
    CHECK(p.f0_consistent);
    CHECK(p.finf_consistent);
    CHECK(f.satisfies_signum());
  }
}

TEST_CASE("derivative matches a centred difference") {
  for (const char* id : {"ratpow:1:1", "ratpow:2:2", "exponential", "blend:2:0.5:2", "powsum:1:1:0.5:3"})
    for (int N : {1, 2}) {
      const auto f = Nonlinearity::parse(id, N);
      for (double s : {0.01, 0.3, 1.0, 4.0}) {
        const double h = 1e-6 * s;
        const double fd = (f(s + h) - f(s - h)) / (2 * h);
        CAPTURE(id);
        CAPTURE(s);
        CHECK(f.derivative(s) == doctest::Approx(fd).epsilon(1e-6));
      }
    }
}

TEST_CASE("table nonlinearity interpolates and extends") {
  const auto f = Nonlinearity::table({0.5, 1.0, 2.0}, {0.5, 1.5, 2.0}, 1);
  CHECK(f(1.0) == doctest::Approx(1.5));
  CHECK(f(1.5) == doctest::Approx(1.75));
  CHECK(f(4.0) == doctest::Approx(4.0)); // 2.0/2 * 4
  CHECK(f.f0() == doctest::Approx(1.0));
  CHECK(f.finf() == doctest::Approx(1.0));
}

TEST_CASE("malformed presets and negative arguments are rejected") {
  CHECK_THROWS_AS(Nonlinearity::parse("nope", 1), InvalidArgument);
  CHECK_THROWS_AS(Nonlinearity::parse("ratpow:1", 1), InvalidArgument);
  CHECK_THROWS_AS(Nonlinearity::parse("exponential:3", 1), InvalidArgument);
  CHECK_THROWS_AS(Nonlinearity::homogeneous(1)(-1.0), InvalidArgument);
}

TEST_CASE("ratio bounds of s/(1+s)") {
  const auto f = Nonlinearity::ratpow(1, 1, 1);
  const auto b = f.ratio_bounds(1e-3, 1e3);
  CHECK(b.sup == doctest::Approx(1.0 / (1.0 + 1e-3)));
  CHECK(b.inf == doctest::Approx(1.0 / (1.0 + 1e3)));
}
