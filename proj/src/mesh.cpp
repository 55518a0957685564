#include "matool/mesh.hpp"

#include "matool/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fmt/core.h>

namespace matool {

namespace {

double parse_number(std::string_view text, std::string_view what) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw InvalidArgument(fmt::format("bad number '{}' in {}", text, what));
  return value;
}

} // namespace

Grading parse_grading(std::string_view name) {
  if (name == "uniform")
    return Grading::uniform;
  if (name == "geometric")
    return Grading::geometric;
  throw InvalidArgument(fmt::format("unknown grading '{}'", name));
}

std::string to_string(Grading g) { return g == Grading::uniform ? "uniform" : "geometric"; }

WeightFunction WeightFunction::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c))
    throw InvalidArgument("constant weight must be positive (a must not vanish identically)");
  return {Kind::constant, c};
}

WeightFunction WeightFunction::linear() { return {Kind::linear, 1.0}; }

WeightFunction WeightFunction::power(double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw InvalidArgument("power weight needs gamma >= 0");
  return {Kind::power, gamma};
}

WeightFunction WeightFunction::parse(std::string_view id) {
  if (id == "one")
    return constant(1.0);
  if (id == "linear")
    return linear();
  auto colon = id.find(':');
  if (colon != std::string_view::npos) {
    auto head = id.substr(0, colon);
    auto arg = parse_number(id.substr(colon + 1), "weight preset");
    if (head == "const")
      return constant(arg);
    if (head == "power")
      return power(arg);
  }
  throw InvalidArgument(fmt::format("unknown weight preset '{}'", id));
}

double WeightFunction::operator()(double r) const {
  switch (kind_) {
  case Kind::constant:
    return param_;
  case Kind::linear:
    return 1.0 + r;
  case Kind::power:
    return param_ == 0.0 ? 1.0 : std::pow(r, param_);
  }
  return 0.0;
}

double WeightFunction::radial_moment(double q, double r) const {
  switch (kind_) {
  case Kind::constant:
    return param_ * std::pow(r, q);
  case Kind::linear:
    return std::pow(r, q) + q * std::pow(r, q + 1.0) / (q + 1.0);
  case Kind::power:
    return q * std::pow(r, q + param_) / (q + param_);
  }
  return 0.0;
}

std::string WeightFunction::id() const {
  switch (kind_) {
  case Kind::constant:
    return param_ == 1.0 ? "one" : fmt::format("const:{}", param_);
  case Kind::linear:
    return "linear";
  case Kind::power:
    return fmt::format("power:{}", param_);
  }
  return {};
}

RadialMesh::RadialMesh(std::vector<double> nodes, WeightFunction a, Grading g)
    : nodes_(std::move(nodes)), weight_(a), grading_(g) {
  const std::size_t n = nodes_.size();
  weights_.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = nodes_[i + 1] - nodes_[i];
    weights_[i] += 0.5 * h;
    weights_[i + 1] += 0.5 * h;
  }
  a_values_.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    a_values_[i] = weight_(nodes_[i]);
}

MeshPtr RadialMesh::build(std::size_t n, double R, WeightFunction a, Grading grading) {
  if (n < 16)
    throw InvalidArgument(fmt::format("mesh needs at least 16 nodes, got {}", n));
  if (!(R > 0.0) || !std::isfinite(R))
    throw InvalidArgument("mesh radius must be positive");
  std::vector<double> nodes(n);
  if (grading == Grading::uniform) {
    for (std::size_t i = 0; i < n; ++i)
      nodes[i] = R * static_cast<double>(i) / static_cast<double>(n - 1);
  } else {
    // cell_i = h0 * q^i with cell_{n-2} / cell_0 = 100
    const double q = std::pow(100.0, 1.0 / static_cast<double>(n - 2));
    const double total = std::expm1(static_cast<double>(n - 1) * std::log(q));
    for (std::size_t i = 0; i < n; ++i)
      nodes[i] = R * std::expm1(static_cast<double>(i) * std::log(q)) / total;
  }
  nodes.front() = 0.0;
  nodes.back() = R;
  return MeshPtr(new RadialMesh(std::move(nodes), a, grading));
}

double RadialMesh::integrate(std::span<const double> samples, QuadRule rule) const {
  if (samples.size() != size())
    throw InvalidArgument(fmt::format("quadrature length mismatch: {} samples on {} nodes",
                                      samples.size(), size()));
  if (rule == QuadRule::simpson) {
    if (!simpson_capable())
      throw InvalidArgument("Simpson rule needs a uniform mesh with an odd node count");
    const double h = cell(0);
    double acc = samples.front() + samples.back();
    for (std::size_t i = 1; i + 1 < size(); ++i)
      acc += (i % 2 == 1 ? 4.0 : 2.0) * samples[i];
    return acc * h / 3.0;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < size(); ++i)
    acc += weights_[i] * samples[i];
  return acc;
}

double RadialMesh::integrate_to(std::span<const double> samples, std::size_t k) const {
  if (samples.size() != size() || k >= size())
    throw InvalidArgument("partial quadrature out of range");
  double acc = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    acc += 0.5 * cell(i) * (samples[i] + samples[i + 1]);
  return acc;
}

std::vector<double> RadialMesh::sample(const std::function<double(double)>& g) const {
  std::vector<double> out(size());
  std::transform(nodes_.begin(), nodes_.end(), out.begin(), g);
  return out;
}

void RadialProfile::check_consistent() const {
  if (!mesh)
    throw InvalidArgument("profile without mesh");
  if (values.size() != mesh->size() || dvalues.size() != mesh->size())
    throw InvalidArgument("profile length does not match its mesh");
}

RadialProfile sample_profile(MeshPtr mesh, const std::function<double(double)>& v,
                             const std::function<double(double)>& dv) {
  RadialProfile p{mesh, mesh->sample(v), mesh->sample(dv)};
  return p;
}

double sup_norm(std::span<const double> values) {
  double m = 0.0;
  for (double x : values)
    m = std::max(m, std::abs(x));
  return m;
}

double sup_norm(const RadialProfile& p) { return sup_norm(p.values); }

bool is_admissible_positive(const RadialProfile& p, double tol) {
  p.check_consistent();
  const double scale = std::max(1.0, sup_norm(p));
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    if (!(p.values[i] > 0.0))
      return false;
  return std::abs(p.values.back()) <= tol * scale && std::abs(p.dvalues.front()) <= tol * scale;
}

} // namespace matool
