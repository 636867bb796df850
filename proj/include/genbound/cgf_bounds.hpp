#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "genbound/info_measures.hpp"

namespace genbound {

// Upper envelope psi of a cumulant generating function on [0, domain_bound).
//
// Construction spot-checks psi(0) = 0, non-negativity, monotonicity and
// midpoint convexity on a 64-point log-spaced grid; any failure throws
// std::invalid_argument.
class CgfEnvelope {
 public:
  using Function = std::function<double(double)>;

  explicit CgfEnvelope(Function psi, double domain_bound = kInfinity);

  /// lambda^2 sigma^2 / 2 on [0, inf).
  static CgfEnvelope subgaussian(double sigma);

  /// Piecewise-linear interpolation of (lambda, psi) samples sorted by
  /// lambda. The domain ends at the last sample; (0, 0) is prepended when the
  /// table starts above zero.
  static CgfEnvelope from_table(std::vector<std::pair<double, double>> samples);

  double operator()(double lambda) const { return psi_(lambda); }
  double domain_bound() const { return domain_bound_; }

 private:
  Function psi_;
  double domain_bound_;
};

struct SubgaussianEnvelope {
  double sigma;

  /// A loss with values in [lo, hi] is (hi - lo)/2-subgaussian under any law.
  static SubgaussianEnvelope for_bounded_loss(double lo, double hi);

  CgfEnvelope envelope() const { return CgfEnvelope::subgaussian(sigma); }
};

/// inf over lambda in (0, b) of (x + psi(lambda)) / lambda, by golden-section
/// search on log lambda over [1e-8, min(b (1 - 1e-9), 1e8)]. Returns 0 for
/// x = 0 and kInfinity for x = inf.
double psi_star_inverse(const CgfEnvelope& env, double x);

/// Per-index KL terms A_i = KL(P_W ⊗ mu || aux_i), B_i = KL(P_{W,Z_i} || aux_i).
struct BoundInputs {
  std::vector<double> a_terms;
  std::vector<double> b_terms;

  BoundInputs(std::vector<double> a, std::vector<double> b);
  std::size_t n() const { return a_terms.size(); }
};

enum class BoundKind {
  theorem1_upper,
  theorem1_lower,
  theorem2,
  mi_example1,
  lautum_example2,
  js_corollary1,
  prop1_cap,
};

std::string_view to_string(BoundKind kind);

// value is always the mean of per_sample_terms; finite is false iff some
// term is infinite.
struct BoundReport {
  BoundKind kind;
  double value;
  std::vector<double> per_sample_terms;
  bool finite;
};

BoundReport theorem1_upper(const BoundInputs& inputs, const CgfEnvelope& env_plus,
                           const CgfEnvelope& env_minus);
BoundReport theorem1_lower(const BoundInputs& inputs, const CgfEnvelope& env_plus,
                           const CgfEnvelope& env_minus);

/// (2/n) sum sqrt(sigma^2 (A_i + B_i)).
BoundReport theorem2_bound(double sigma, const BoundInputs& inputs);

/// (1/n) sum sqrt(2 sigma^2 I_i).
BoundReport mi_bound(double sigma, std::span<const double> mi_terms);

/// (1/n) sum sqrt(2 sigma^2 L_i); infinite terms propagate.
BoundReport lautum_bound(double sigma, std::span<const double> lautum_terms);

/// (2/n) sum sqrt(2 sigma^2 I_JS,i). Terms must lie in [0, log 2 + 1e-9].
BoundReport js_bound(double sigma, std::span<const double> js_terms);

/// 2 sigma sqrt(2 log 2), the ceiling on js_bound.
double prop1_cap(double sigma);

/// I >= 8 log(2)^2, above which 4 I_JS <= I.
inline constexpr double kJsDominanceThreshold = 8.0 * kLn2 * kLn2;
bool js_dominance_condition(double mi);

}  // namespace genbound
