#pragma once

#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace matool {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Nonlinearity f : [0, inf) -> [0, inf) with derivative and the limits
/// f0 = lim_{s->0+} f(s)/s^N, finf = lim_{s->inf} f(s)/s^N.
class Nonlinearity {
public:
  enum class Kind { power, ratpow, powsum, blend, exponential, homogeneous, table };

  /// c s^alpha
  static Nonlinearity power(double alpha, double coeff, int N);
  /// s^alpha / (1 + s^beta)
  static Nonlinearity ratpow(double alpha, double beta, int N);
  /// c1 s^a1 + c2 s^a2
  static Nonlinearity powsum(double c1, double a1, double c2, double a2, int N);
  /// s^N (k0 + kinf s^beta) / (1 + s^beta)
  static Nonlinearity blend(double k0, double kinf, double beta, int N);
  static Nonlinearity exponential(int N);
  /// s^N
  static Nonlinearity homogeneous(int N);
  /// Piecewise-linear table on increasing s_k > 0, extended by c s^N beyond both ends.
  /// Declared limits default to the end ratios f_k / s_k^N.
  static Nonlinearity table(std::vector<double> s, std::vector<double> f, int N,
                            double f0 = -1.0, double finf = -1.0);

  /// Preset grammar: "power:a[:c]", "ratpow:a:b", "powsum:c1:a1:c2:a2", "blend:k0:kinf[:b]",
  /// "exponential", "homogeneous".
  static Nonlinearity parse(std::string_view id, int N);

  double operator()(double s) const;
  double derivative(double s) const;

  double f0() const { return f0_; }
  double finf() const { return finf_; }
  int dimension() const { return N_; }
  Kind kind() const { return kind_; }
  const std::vector<double>& parameters() const { return params_; }
  std::string id() const;

  /// f == c s^N exactly.
  bool is_homogeneous() const;

  /// f(s) > 0 on a log grid of (0, s_max]; f(0) >= 0.
  bool satisfies_signum(double s_max = 1e6) const;

  struct LimitProbe {
    double ratio_small;
    double ratio_large;
    bool f0_consistent;
    bool finf_consistent;
  };
  /// Compares f(s)/s^N at s = 1e-6 and s = 1e6 against the declared limits.
  LimitProbe probe_limits() const;

  /// Extremes of f(s)/s^N sampled on a log grid of [s_lo, s_hi].
  struct RatioBounds {
    double inf;
    double sup;
  };
  RatioBounds ratio_bounds(double s_lo, double s_hi, int per_decade = 24) const;

private:
  Nonlinearity(Kind k, std::vector<double> params, int N);
  void set_limits_from_exponents(double lo_exp, double lo_coeff, double hi_exp, double hi_coeff);

  struct Table {
    std::vector<double> s;
    std::vector<double> f;
  };

  Kind kind_;
  std::vector<double> params_;
  int N_;
  double f0_ = 0.0;
  double finf_ = 0.0;
  std::shared_ptr<const Table> table_;
};

} // namespace matool
