#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "genbound/info_measures.hpp"

namespace genbound {

// Mean estimation from two Gaussian samples: Z_1, Z_2 ~ N(mean, sigma2)
// i.i.d., hypothesis W = t Z_1 + (1 - t) Z_2, loss (w - z)^2 truncated at c^2.
struct ExampleConfig {
  double t = 0.25;
  double sigma2 = 1.0;
  double mean = 1.0;
  double c = 0.25;

  /// Throws std::invalid_argument unless 0 < t < 1, sigma2 > 0, c > 0.
  void validate() const;

  /// sigma2 with c = sqrt(sigma2) / 4.
  static ExampleConfig with_default_truncation(double sigma2, double mean = 1.0);

  /// Var(W) = sigma2 (t^2 + (1 - t)^2).
  double hypothesis_variance() const;

  /// Subgaussian parameter of a loss bounded in [0, c^2].
  double loss_sigma() const { return 0.5 * c * c; }
};

/// Correlation of (W, Z_1) and (W, Z_2).
std::pair<double, double> rho_coefficients(double t);

/// I(W; Z_1), I(W; Z_2).
std::pair<double, double> example_mutual_informations(double t);

struct ExampleJsInformations {
  JsInformationResult first;
  JsInformationResult second;
  bool converged() const { return first.converged && second.converged; }
};

ExampleJsInformations example_js_informations(double t, double sigma2,
                                              const QuadratureSpec& q = {},
                                              double mean = 1.0);

double truncated_loss(double w, double z, double c);

/// E[truncated_loss(w, Z, c)] for Z ~ N(mean, sigma2), in closed form.
double population_risk(double w, const ExampleConfig& cfg);

struct MonteCarloEstimate {
  double estimate;
  double stderr_;
};

/// Monte Carlo estimate of the expected generalization error.
MonteCarloEstimate true_gen_error_mc(const ExampleConfig& cfg, std::uint64_t samples,
                                     std::uint64_t seed);

/// (c^2 / 4)(sqrt(2 I_1) + sqrt(2 I_2)).
double example_mi_bound(const ExampleConfig& cfg, std::pair<double, double> mi);
/// (c^2 / 2)(sqrt(2 J_1) + sqrt(2 J_2)).
double example_js_bound(const ExampleConfig& cfg, std::pair<double, double> js);

struct SweepSpec {
  std::vector<double> t_values;
  std::uint64_t mc_samples = 1'000'000;
  QuadratureSpec quadrature{};
  std::uint64_t seed = 42;

  /// Throws std::invalid_argument unless t_values is non-empty, strictly
  /// increasing and inside (0, 0.5], and mc_samples >= 10^4.
  void validate() const;

  /// `steps` evenly spaced values from t_min to t_max inclusive.
  static std::vector<double> linspace(double t_min, double t_max, int steps);
};

struct CurvePoint {
  double t;
  double true_gen;
  double true_gen_stderr;
  double mi_bound;
  double js_bound;
  std::pair<double, double> i_mi;
  std::pair<double, double> i_js;
  bool converged;
};

/// One CurvePoint per t, in t order. Points may be computed concurrently;
/// point k uses the sub-seed derive_seed(seed, "sweep", k).
std::vector<CurvePoint> sweep(const SweepSpec& spec, const ExampleConfig& base);

// Serialization. Numbers carry 9 significant digits; `info_scale` multiplies
// the information columns (1 for nats, 1/log 2 for bits).
inline constexpr const char* kSweepCsvHeader =
    "t,true_gen,stderr,mi_bound,js_bound,i_mi_1,i_mi_2,i_js_1,i_js_2,converged";
std::string sweep_to_csv(const std::vector<CurvePoint>& points, double info_scale = 1.0);
std::string sweep_to_json(const std::vector<CurvePoint>& points, double info_scale = 1.0);

}  // namespace genbound
