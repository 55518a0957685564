#include "matool/detail/radial_ivp.hpp"

namespace matool::detail {

const GaussRule& gauss8() {
  static const GaussRule rule = [] {
    const std::array<double, 4> x = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                     0.9602898564975363};
    const std::array<double, 4> w = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                     0.1012285362903763};
    GaussRule g{};
    for (int j = 0; j < 4; ++j) {
      g.x[3 - j] = 0.5 * (1.0 - x[j]);
      g.w[3 - j] = 0.5 * w[j];
      g.x[4 + j] = 0.5 * (1.0 + x[j]);
      g.w[4 + j] = 0.5 * w[j];
    }
    return g;
  }();
  return rule;
}

RadialKernel weight_kernel(const RadialMesh& mesh, double q) {
  const WeightFunction a = mesh.weight();
  auto k = [a, q](double r) {
    if (q == 1.0)
      return a(r);
    return r == 0.0 ? 0.0 : q * std::pow(r, q - 1.0) * a(r);
  };
  RadialKernel out;
  const auto& r = mesh.nodes();
  out.node.resize(r.size());
  out.mid.resize(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    out.node[i] = k(r[i]);
    out.mid[i] = i + 1 < r.size() ? k(0.5 * (r[i] + r[i + 1])) : 0.0;
  }
  out.eval = k;
  out.moment = [a, q](double rho) { return a.radial_moment(q, rho); };
  return out;
}

RadialKernel coefficient_kernel(const RadialMesh& mesh, std::function<double(double)> b) {
  RadialKernel out;
  const auto& r = mesh.nodes();
  out.node.resize(r.size());
  out.mid.resize(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    out.node[i] = b(r[i]);
    out.mid[i] = i + 1 < r.size() ? b(0.5 * (r[i] + r[i + 1])) : 0.0;
  }
  out.eval = b;
  out.moment = [b](double rho) {
    const auto& g = gauss8();
    double acc = 0.0;
    for (int j = 0; j < 8; ++j)
      acc += g.w[j] * b(rho * g.x[j]);
    return acc * rho;
  };
  return out;
}

double hermite_zero(double r0, double h, double v0, double v1, double d0, double d1) {
  auto p = [&](double t) {
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * v0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * v1 +
           (t3 - t2) * h * d1;
  };
  if (v1 == 0.0)
    return r0 + h;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (p(mid) > 0.0 ? lo : hi) = mid;
  }
  return r0 + 0.5 * (lo + hi) * h;
}

} // namespace matool::detail
