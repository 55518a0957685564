#pragma once

// Shared marching core for radial first-order systems
//   v' = -phi(w)^{1/q},  w' = L k(r) F(v),  (v, w)(0) = (v0, 0).

#include "matool/mesh.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

namespace matool::detail {

/// sign(w) |w|^{1/q}
inline double signed_root(double w, double q) {
  if (q == 1.0)
    return w;
  if (q == 2.0)
    return std::copysign(std::sqrt(std::abs(w)), w);
  return std::copysign(std::pow(std::abs(w), 1.0 / q), w);
}

/// sign(w) |w|^q
inline double signed_power(double w, double q) {
  if (q == 1.0)
    return w;
  return std::copysign(std::pow(std::abs(w), q), w);
}

struct GaussRule {
  std::array<double, 8> x;
  std::array<double, 8> w;
};

/// 8-point Gauss-Legendre on [0, 1].
const GaussRule& gauss8();

/// Kernel k sampled at nodes and cell midpoints, with its primitive \int_0^r k.
struct RadialKernel {
  std::vector<double> node;
  std::vector<double> mid;
  std::function<double(double)> eval;
  std::function<double(double)> moment;
};

/// k(r) = q r^{q-1} a(r)
RadialKernel weight_kernel(const RadialMesh& mesh, double q);

/// k(r) = b(r), primitive by Gauss-Legendre.
RadialKernel coefficient_kernel(const RadialMesh& mesh, std::function<double(double)> b);

/// Root in (r0, r0 + h] of the cubic Hermite interpolant with v0 > 0 >= v1.
double hermite_zero(double r0, double h, double v0, double v1, double d0, double d1);

struct Trace {
  std::vector<double> v;
  std::vector<double> w;
  std::optional<double> first_zero;
  std::size_t computed = 0;
  bool finite = true;

  bool complete() const { return computed == v.size() && finite; }
};

/// Shooting terminal with the overshoot sentinel -(R - r_hat).
inline double sentinel_terminal(const Trace& t, double R) {
  if (t.first_zero)
    return -(R - *t.first_zero);
  return t.v.back();
}

template <class Forcing>
Trace march(const RadialMesh& mesh, const RadialKernel& kernel, double scale, double q, double v0,
            Forcing&& F, bool stop_at_zero) {
  const std::size_t n = mesh.size();
  const auto& r = mesh.nodes();
  Trace t;
  t.v.assign(n, std::nan(""));
  t.w.assign(n, std::nan(""));
  t.v[0] = v0;
  t.w[0] = 0.0;

  // Startup on [0, r1]: leading-order profile with F frozen at v0, then one corrected pass.
  {
    const auto& g = gauss8();
    const double r1 = r[1];
    const double F0 = F(v0);
    auto v_lead = [&](double rho) {
      double acc = 0.0;
      for (int j = 0; j < 8; ++j)
        acc += g.w[j] * std::pow(std::abs(scale * F0 * kernel.moment(rho * g.x[j])), 1.0 / q);
      return v0 - std::copysign(1.0, F0) * acc * rho;
    };
    double w1 = 0.0;
    double v1 = 0.0;
    for (int j = 0; j < 8; ++j) {
      const double tau = r1 * g.x[j];
      w1 += g.w[j] * kernel.eval(tau) * F(v_lead(tau));
    }
    w1 *= scale * r1;
    // v(r1) from the corrected flux profile w(tau) ~ w1 * moment(tau) / moment(r1)
    const double m1 = kernel.moment(r1);
    for (int j = 0; j < 8; ++j) {
      const double tau = r1 * g.x[j];
      v1 += g.w[j] * signed_root(w1 * (m1 > 0.0 ? kernel.moment(tau) / m1 : 0.0), q);
    }
    v1 = v0 - v1 * r1;
    t.v[1] = v1;
    t.w[1] = w1;
  }
  t.computed = 2;
  if (!(std::isfinite(t.v[1]) && std::isfinite(t.w[1]))) {
    t.finite = false;
    t.computed = 1;
    return t;
  }
  auto check_zero = [&](std::size_t i) {
    if (!t.first_zero && t.v[i] > 0.0 && t.v[i + 1] <= 0.0) {
      t.first_zero = hermite_zero(r[i], r[i + 1] - r[i], t.v[i], t.v[i + 1],
                                  -signed_root(t.w[i], q), -signed_root(t.w[i + 1], q));
      return true;
    }
    return false;
  };
  if (check_zero(0) && stop_at_zero)
    return t;

  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h = r[i + 1] - r[i];
    const double v = t.v[i], w = t.w[i];
    const double kn = scale * kernel.node[i], km = scale * kernel.mid[i],
                 kr = scale * kernel.node[i + 1];
    const double a1 = -signed_root(w, q), b1 = kn * F(v);
    const double a2 = -signed_root(w + 0.5 * h * b1, q), b2 = km * F(v + 0.5 * h * a1);
    const double a3 = -signed_root(w + 0.5 * h * b2, q), b3 = km * F(v + 0.5 * h * a2);
    const double a4 = -signed_root(w + h * b3, q), b4 = kr * F(v + h * a3);
    t.v[i + 1] = v + h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    t.w[i + 1] = w + h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
    t.computed = i + 2;
    if (!(std::isfinite(t.v[i + 1]) && std::isfinite(t.w[i + 1]))) {
      t.finite = false;
      t.computed = i + 1;
      return t;
    }
    if (check_zero(i) && stop_at_zero)
      return t;
  }
  return t;
}

} // namespace matool::detail
