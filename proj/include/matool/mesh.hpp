#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace matool {

enum class Grading { uniform, geometric };
enum class QuadRule { trapezoid, simpson };

Grading parse_grading(std::string_view name);
std::string to_string(Grading g);

/// Radial weight a(r). Presets: a = c, a = 1 + r, a = r^gamma.
class WeightFunction {
public:
  enum class Kind { constant, linear, power };

  static WeightFunction constant(double c = 1.0);
  static WeightFunction linear();
  static WeightFunction power(double gamma);

  /// Accepts "one", "const:<c>", "linear", "power:<gamma>".
  static WeightFunction parse(std::string_view id);

  double operator()(double r) const;

  /// Closed form of \int_0^r q t^{q-1} a(t) dt.
  double radial_moment(double q, double r) const;

  Kind kind() const { return kind_; }
  double parameter() const { return param_; }
  bool is_constant() const { return kind_ == Kind::constant; }
  std::string id() const;

private:
  WeightFunction(Kind k, double param) : kind_(k), param_(param) {}
  Kind kind_;
  double param_;
};

class RadialMesh {
public:
  /// Nodes 0 = r_0 < ... < r_{n-1} = R. Geometric grading clusters nodes at the origin
  /// with a last-to-first cell ratio of 100.
  static std::shared_ptr<const RadialMesh> build(std::size_t n, double R, WeightFunction a,
                                                 Grading grading = Grading::uniform);

  std::size_t size() const { return nodes_.size(); }
  double radius() const { return nodes_.back(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& a_values() const { return a_values_; }
  const WeightFunction& weight() const { return weight_; }
  Grading grading() const { return grading_; }
  double node(std::size_t i) const { return nodes_[i]; }
  double cell(std::size_t i) const { return nodes_[i + 1] - nodes_[i]; }

  /// Composite quadrature over [0, R]. Simpson requires a uniform mesh with odd node count.
  double integrate(std::span<const double> samples, QuadRule rule = QuadRule::trapezoid) const;

  /// Trapezoid integral over [0, r_k].
  double integrate_to(std::span<const double> samples, std::size_t k) const;

  bool simpson_capable() const { return grading_ == Grading::uniform && size() % 2 == 1; }

  std::vector<double> sample(const std::function<double(double)>& g) const;

private:
  RadialMesh(std::vector<double> nodes, WeightFunction a, Grading g);
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> a_values_;
  WeightFunction weight_;
  Grading grading_;
};

using MeshPtr = std::shared_ptr<const RadialMesh>;

struct RadialProfile {
  MeshPtr mesh;
  std::vector<double> values;
  std::vector<double> dvalues;

  std::size_t size() const { return values.size(); }
  void check_consistent() const;
};

RadialProfile sample_profile(MeshPtr mesh, const std::function<double(double)>& v,
                             const std::function<double(double)>& dv);

double sup_norm(const RadialProfile& p);
double sup_norm(std::span<const double> values);

/// Positive on interior nodes, v(R) = 0 and v'(0) = 0 within tol.
bool is_admissible_positive(const RadialProfile& p, double tol = 1e-8);

} // namespace matool
