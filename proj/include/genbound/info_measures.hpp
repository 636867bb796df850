#pragma once

#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

namespace genbound {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kLn2 = std::numbers::ln2;

// Tolerance on the total mass of a probability vector or table.
inline constexpr double kMassTolerance = 1e-12;

/// A probability mass function over a finite alphabet {0, ..., size()-1}.
class DiscretePmf {
 public:
  /// Throws std::invalid_argument for empty input, negative or non-finite
  /// entries, or mass that differs from 1 by more than kMassTolerance.
  explicit DiscretePmf(std::vector<double> probs);

  static DiscretePmf uniform(std::size_t size);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

/// Joint pmf over (w, z), stored row-major with w indexing rows.
class DiscreteJoint {
 public:
  DiscreteJoint(std::size_t rows, std::size_t cols, std::vector<double> table);

  /// Outer product w ⊗ z.
  static DiscreteJoint product(const DiscretePmf& w, const DiscretePmf& z);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t w, std::size_t z) const {
    return table_[w * cols_ + z];
  }
  std::span<const double> table() const { return table_; }

  DiscretePmf w_marginal() const;
  DiscretePmf z_marginal() const;
  DiscreteJoint marginal_product() const;
  DiscretePmf flatten() const { return DiscretePmf(table_); }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> table_;
};

// Discrete divergences, all in nats. Mismatched sizes throw
// std::invalid_argument.

/// Returns kInfinity when p puts mass where q has none.
double kl_discrete(const DiscretePmf& p, const DiscretePmf& q);

/// Unnormalized total variation, sum |p - q|, in [0, 2].
double tv_discrete(const DiscretePmf& p, const DiscretePmf& q);

/// In [0, log 2]; always finite.
double js_divergence(const DiscretePmf& p, const DiscretePmf& q);

/// Elementwise (p + q) / 2.
DiscretePmf midpoint(const DiscretePmf& p, const DiscretePmf& q);

double mutual_information(const DiscreteJoint& joint);
double lautum_information(const DiscreteJoint& joint);
double js_information(const DiscreteJoint& joint);

/// Bivariate Gaussian law of (W, Z).
class GaussianPair {
 public:
  GaussianPair(double mean_w, double mean_z, double var_w, double var_z,
               double rho);

  /// Unit variances, zero means.
  static GaussianPair standard(double rho) { return {0.0, 0.0, 1.0, 1.0, rho}; }

  double mean_w() const { return mean_w_; }
  double mean_z() const { return mean_z_; }
  double var_w() const { return var_w_; }
  double var_z() const { return var_z_; }
  double rho() const { return rho_; }

 private:
  double mean_w_;
  double mean_z_;
  double var_w_;
  double var_z_;
  double rho_;
};

struct QuadratureSpec {
  double half_width_sigmas = 10.0;
  int points_per_axis = 401;

  /// Throws std::invalid_argument unless points_per_axis is odd and >= 3
  /// and half_width_sigmas > 0.
  void validate() const;

  /// The next grid in the doubling sequence (2k - 1 points).
  QuadratureSpec refined() const { return {half_width_sigmas, 2 * points_per_axis - 1}; }
};

/// Refinement change above which a quadrature is reported as unconverged.
inline constexpr double kQuadratureConvergenceTolerance = 1e-4;

/// -1/2 log(1 - rho^2). Throws std::invalid_argument unless |rho| < 1.
double gaussian_mutual_information(double rho);

struct GaussianEntropies {
  double h_w;
  double h_z;
  double h_joint;
};

GaussianEntropies gaussian_entropies(const GaussianPair& g);

struct QuadratureResult {
  double value;
  // |value(points) - value(2 * points - 1)|
  double refinement_change;
  bool converged;
};

// Differential entropy of the half-half mixture of the correlated law g and
// the product of its marginals.
//
// Integrated with the trapezoid rule on a tensor grid in the standardized
// principal frame u = (x + y)/√2, v = (x - y)/√2, where both components are
// axis-aligned. Each axis uses nodes s·sinh(ξ) with ξ uniform, s the smaller
// component standard deviation on that axis, so the grid resolves the thin
// correlated component as |rho| -> 1. Density values that underflow
// contribute 0.
QuadratureResult mixture_entropy_2d(const GaussianPair& g,
                                    const QuadratureSpec& q = {});

struct JsInformationResult {
  double value;      // clamped into [0, log 2]
  double raw;        // before clamping
  bool converged;
  bool out_of_range; // raw left [0, log 2] by more than 1e-6
};

/// I_JS(W; Z) = h(mixture) - (h_w + h_z + h_joint) / 2.
JsInformationResult gaussian_js_information(const GaussianPair& g,
                                            const QuadratureSpec& q = {});

}  // namespace genbound
