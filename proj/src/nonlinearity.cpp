#include "matool/nonlinearity.hpp"

#include "matool/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fmt/core.h>

namespace matool {

namespace {

std::vector<double> split_numbers(std::string_view text, std::string_view what) {
  std::vector<double> out;
  while (!text.empty()) {
    auto colon = text.find(':');
    auto piece = text.substr(0, colon);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), value);
    if (ec != std::errc{} || ptr != piece.data() + piece.size())
      throw InvalidArgument(fmt::format("bad number '{}' in nonlinearity '{}'", piece, what));
    out.push_back(value);
    if (colon == std::string_view::npos)
      break;
    text.remove_prefix(colon + 1);
  }
  return out;
}

void require_dimension(int N) {
  if (N < 1)
    throw InvalidArgument("dimension N must be >= 1");
}

double limit_near_zero(double exponent, double coeff, int N) {
  if (coeff == 0.0)
    return 0.0;
  if (exponent < N)
    return kInf;
  return exponent == N ? coeff : 0.0;
}

double limit_near_infinity(double exponent, double coeff, int N) {
  if (coeff == 0.0)
    return 0.0;
  if (exponent > N)
    return kInf;
  return exponent == N ? coeff : 0.0;
}

double pow_derivative(double c, double a, double s) {
  if (c == 0.0 || a == 0.0)
    return 0.0;
  if (s == 0.0)
    return a > 1.0 ? 0.0 : (a == 1.0 ? c : kInf);
  return c * a * std::pow(s, a - 1.0);
}

} // namespace

Nonlinearity::Nonlinearity(Kind k, std::vector<double> params, int N)
    : kind_(k), params_(std::move(params)), N_(N) {
  require_dimension(N);
}

void Nonlinearity::set_limits_from_exponents(double lo_exp, double lo_coeff, double hi_exp,
                                             double hi_coeff) {
  f0_ = limit_near_zero(lo_exp, lo_coeff, N_);
  finf_ = limit_near_infinity(hi_exp, hi_coeff, N_);
}

Nonlinearity Nonlinearity::power(double alpha, double coeff, int N) {
  if (!(alpha > 0.0) || !(coeff >= 0.0))
    throw InvalidArgument("power nonlinearity needs alpha > 0 and coefficient >= 0");
  Nonlinearity f(Kind::power, {alpha, coeff}, N);
  f.set_limits_from_exponents(alpha, coeff, alpha, coeff);
  return f;
}

Nonlinearity Nonlinearity::ratpow(double alpha, double beta, int N) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw InvalidArgument("ratpow nonlinearity needs alpha > 0 and beta > 0");
  Nonlinearity f(Kind::ratpow, {alpha, beta}, N);
  f.set_limits_from_exponents(alpha, 1.0, alpha - beta, 1.0);
  return f;
}

Nonlinearity Nonlinearity::powsum(double c1, double a1, double c2, double a2, int N) {
  if (!(c1 > 0.0) || !(c2 > 0.0) || !(a1 > 0.0) || !(a2 > 0.0))
    throw InvalidArgument("powsum nonlinearity needs positive coefficients and exponents");
  Nonlinearity f(Kind::powsum, {c1, a1, c2, a2}, N);
  if (a1 == a2)
    f.set_limits_from_exponents(a1, c1 + c2, a1, c1 + c2);
  else if (a1 < a2)
    f.set_limits_from_exponents(a1, c1, a2, c2);
  else
    f.set_limits_from_exponents(a2, c2, a1, c1);
  return f;
}

Nonlinearity Nonlinearity::blend(double k0, double kinf, double beta, int N) {
  if (!(k0 >= 0.0) || !(kinf >= 0.0) || !(k0 + kinf > 0.0) || !(beta > 0.0))
    throw InvalidArgument("blend nonlinearity needs k0, kinf >= 0 (not both zero) and beta > 0");
  Nonlinearity f(Kind::blend, {k0, kinf, beta}, N);
  f.f0_ = k0;
  f.finf_ = kinf;
  return f;
}

Nonlinearity Nonlinearity::exponential(int N) {
  Nonlinearity f(Kind::exponential, {}, N);
  f.f0_ = kInf;
  f.finf_ = kInf;
  return f;
}

Nonlinearity Nonlinearity::homogeneous(int N) {
  Nonlinearity f(Kind::homogeneous, {}, N);
  f.f0_ = 1.0;
  f.finf_ = 1.0;
  return f;
}

Nonlinearity Nonlinearity::table(std::vector<double> s, std::vector<double> fv, int N, double f0,
                                 double finf) {
  if (s.size() < 2 || s.size() != fv.size())
    throw InvalidArgument("table nonlinearity needs at least two (s, f) pairs of equal length");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s[i] > 0.0) || !(fv[i] > 0.0))
      throw InvalidArgument("table nonlinearity needs positive abscissae and values");
    if (i > 0 && !(s[i] > s[i - 1]))
      throw InvalidArgument("table abscissae must be strictly increasing");
  }
  Nonlinearity f(Kind::table, {}, N);
  f.f0_ = f0 >= 0.0 ? f0 : fv.front() / std::pow(s.front(), N);
  f.finf_ = finf >= 0.0 ? finf : fv.back() / std::pow(s.back(), N);
  f.table_ = std::make_shared<Table>(Table{std::move(s), std::move(fv)});
  return f;
}

Nonlinearity Nonlinearity::parse(std::string_view id, int N) {
  auto colon = id.find(':');
  auto head = id.substr(0, colon);
  std::vector<double> args;
  if (colon != std::string_view::npos)
    args = split_numbers(id.substr(colon + 1), id);
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi)
      throw InvalidArgument(fmt::format("wrong parameter count in nonlinearity '{}'", id));
  };
  if (head == "power") {
    need(1, 2);
    return power(args[0], args.size() > 1 ? args[1] : 1.0, N);
  }
  if (head == "ratpow") {
    need(2, 2);
    return ratpow(args[0], args[1], N);
  }
  if (head == "powsum") {
    need(4, 4);
    return powsum(args[0], args[1], args[2], args[3], N);
  }
  if (head == "blend") {
    need(2, 3);
    return blend(args[0], args[1], args.size() > 2 ? args[2] : 1.0, N);
  }
  if (head == "exponential") {
    need(0, 0);
    return exponential(N);
  }
  if (head == "homogeneous") {
    need(0, 0);
    return homogeneous(N);
  }
  throw InvalidArgument(fmt::format("unknown nonlinearity preset '{}'", id));
}

double Nonlinearity::operator()(double s) const {
  if (s < 0.0)
    throw InvalidArgument("nonlinearity evaluated at a negative argument");
  const auto& p = params_;
  switch (kind_) {
  case Kind::power:
    return p[1] * std::pow(s, p[0]);
  case Kind::ratpow:
    return std::pow(s, p[0]) / (1.0 + std::pow(s, p[1]));
  case Kind::powsum:
    return p[0] * std::pow(s, p[1]) + p[2] * std::pow(s, p[3]);
  case Kind::blend: {
    const double t = std::pow(s, p[2]);
    const double g = std::isinf(t) ? p[1] : (p[0] + p[1] * t) / (1.0 + t);
    return std::pow(s, N_) * g;
  }
  case Kind::exponential:
    return std::exp(s);
  case Kind::homogeneous:
    return std::pow(s, N_);
  case Kind::table: {
    const auto& ts = table_->s;
    const auto& tf = table_->f;
    if (s <= ts.front())
      return tf.front() * std::pow(s / ts.front(), N_);
    if (s >= ts.back())
      return tf.back() * std::pow(s / ts.back(), N_);
    auto it = std::upper_bound(ts.begin(), ts.end(), s);
    const std::size_t k = static_cast<std::size_t>(it - ts.begin());
    const double t = (s - ts[k - 1]) / (ts[k] - ts[k - 1]);
    return (1.0 - t) * tf[k - 1] + t * tf[k];
  }
  }
  return 0.0;
}

double Nonlinearity::derivative(double s) const {
  if (s < 0.0)
    throw InvalidArgument("nonlinearity derivative at a negative argument");
  const auto& p = params_;
  switch (kind_) {
  case Kind::power:
    return pow_derivative(p[1], p[0], s);
  case Kind::ratpow: {
    if (s == 0.0)
      return pow_derivative(1.0, p[0], s);
    const double sa = std::pow(s, p[0]);
    const double sb = std::pow(s, p[1]);
    const double den = 1.0 + sb;
    return (p[0] * sa / s * den - p[1] * sa * sb / s) / (den * den);
  }
  case Kind::powsum:
    return pow_derivative(p[0], p[1], s) + pow_derivative(p[2], p[3], s);
  case Kind::blend: {
    if (s == 0.0)
      return N_ == 1 ? p[0] : 0.0;
    const double t = std::pow(s, p[2]);
    const double den = 1.0 + t;
    const double g = (p[0] + p[1] * t) / den;
    const double dg = (p[1] - p[0]) * p[2] * t / s / (den * den);
    return N_ * std::pow(s, N_ - 1) * g + std::pow(s, N_) * dg;
  }
  case Kind::exponential:
    return std::exp(s);
  case Kind::homogeneous:
    return N_ * std::pow(s, N_ - 1);
  case Kind::table: {
    const double h = std::max(1e-6, 1e-6 * s);
    if (s - h < 0.0)
      return ((*this)(s + h) - (*this)(s)) / h;
    return ((*this)(s + h) - (*this)(s - h)) / (2.0 * h);
  }
  }
  return 0.0;
}

std::string Nonlinearity::id() const {
  const auto& p = params_;
  switch (kind_) {
  case Kind::power:
    return fmt::format("power:{}:{}", p[0], p[1]);
  case Kind::ratpow:
    return fmt::format("ratpow:{}:{}", p[0], p[1]);
  case Kind::powsum:
    return fmt::format("powsum:{}:{}:{}:{}", p[0], p[1], p[2], p[3]);
  case Kind::blend:
    return fmt::format("blend:{}:{}:{}", p[0], p[1], p[2]);
  case Kind::exponential:
    return "exponential";
  case Kind::homogeneous:
    return "homogeneous";
  case Kind::table:
    return fmt::format("table[{}]", table_->s.size());
  }
  return {};
}

bool Nonlinearity::is_homogeneous() const {
  switch (kind_) {
  case Kind::homogeneous:
    return true;
  case Kind::power:
    return params_[0] == N_ && params_[1] > 0.0;
  case Kind::powsum:
    return params_[1] == N_ && params_[3] == N_;
  case Kind::blend:
    return params_[0] == params_[1];
  default:
    return false;
  }
}

bool Nonlinearity::satisfies_signum(double s_max) const {
  if (!((*this)(0.0) >= 0.0))
    return false;
  for (double e = -8.0; e <= std::log10(s_max) + 1e-12; e += 0.125) {
    const double v = (*this)(std::pow(10.0, e));
    if (!(v > 0.0))
      return false;
  }
  return true;
}

Nonlinearity::LimitProbe Nonlinearity::probe_limits() const {
  auto check = [](double ratio, double declared) {
    if (std::isinf(declared))
      return ratio > 1e2;
    return std::abs(ratio - declared) <= 1e-2 * std::max(1.0, declared);
  };
  LimitProbe out{};
  out.ratio_small = (*this)(1e-6) / std::pow(1e-6, N_);
  out.ratio_large = (*this)(1e6) / std::pow(1e6, N_);
  out.f0_consistent = check(out.ratio_small, f0_);
  out.finf_consistent = check(out.ratio_large, finf_);
  return out;
}

Nonlinearity::RatioBounds Nonlinearity::ratio_bounds(double s_lo, double s_hi,
                                                     int per_decade) const {
  RatioBounds b{kInf, 0.0};
  const double lo = std::log10(s_lo), hi = std::log10(s_hi);
  const int steps = std::max(1, static_cast<int>(std::ceil((hi - lo) * per_decade)));
  for (int k = 0; k <= steps; ++k) {
    const double s = std::pow(10.0, lo + (hi - lo) * k / steps);
    const double r = (*this)(s) / std::pow(s, N_);
    b.inf = std::min(b.inf, r);
    b.sup = std::max(b.sup, r);
  }
  return b;
}

} // namespace matool
