#include "genbound/info_measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace genbound {
namespace {

void check_mass(std::span<const double> probs, const char* what) {
  if (probs.empty()) {
    throw std::invalid_argument(std::string(what) + ": empty distribution");
  }
  double total = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) {
      throw std::invalid_argument(std::string(what) +
                                  ": entries must be finite and non-negative");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw std::invalid_argument(std::string(what) + ": mass " +
                                std::to_string(total) + " is not 1");
  }
}

void check_same_size(const DiscretePmf& p, const DiscretePmf& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("pmf size mismatch: " + std::to_string(p.size()) +
                                " vs " + std::to_string(q.size()));
  }
}

// KL over raw spans; p and q are assumed to be valid and equally sized.
double kl_span(std::span<const double> p, std::span<const double> q) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return kInfinity;
    sum += p[i] * std::log(p[i] / q[i]);
  }
  return std::max(sum, 0.0);
}

}  // namespace

DiscretePmf::DiscretePmf(std::vector<double> probs) : probs_(std::move(probs)) {
  check_mass(probs_, "DiscretePmf");
}

DiscretePmf DiscretePmf::uniform(std::size_t size) {
  if (size == 0) throw std::invalid_argument("DiscretePmf: empty distribution");
  return DiscretePmf(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

DiscreteJoint::DiscreteJoint(std::size_t rows, std::size_t cols,
                             std::vector<double> table)
    : rows_(rows), cols_(cols), table_(std::move(table)) {
  if (rows_ == 0 || cols_ == 0 || table_.size() != rows_ * cols_) {
    throw std::invalid_argument("DiscreteJoint: table shape does not match " +
                                std::to_string(rows_) + "x" + std::to_string(cols_));
  }
  check_mass(table_, "DiscreteJoint");
}

DiscreteJoint DiscreteJoint::product(const DiscretePmf& w, const DiscretePmf& z) {
  std::vector<double> table(w.size() * z.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = 0; j < z.size(); ++j) {
      table[i * z.size() + j] = w[i] * z[j];
    }
  }
  return DiscreteJoint(w.size(), z.size(), std::move(table));
}

DiscretePmf DiscreteJoint::w_marginal() const {
  std::vector<double> m(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) m[i] += (*this)(i, j);
  }
  return DiscretePmf(std::move(m));
}

DiscretePmf DiscreteJoint::z_marginal() const {
  std::vector<double> m(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) m[j] += (*this)(i, j);
  }
  return DiscretePmf(std::move(m));
}

DiscreteJoint DiscreteJoint::marginal_product() const {
  return product(w_marginal(), z_marginal());
}

double kl_discrete(const DiscretePmf& p, const DiscretePmf& q) {
  check_same_size(p, q);
  return kl_span(p.probs(), q.probs());
}

double tv_discrete(const DiscretePmf& p, const DiscretePmf& q) {
  check_same_size(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return std::min(sum, 2.0);
}

DiscretePmf midpoint(const DiscretePmf& p, const DiscretePmf& q) {
  check_same_size(p, q);
  std::vector<double> m(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) m[i] = 0.5 * (p[i] + q[i]);
  return DiscretePmf(std::move(m));
}

double js_divergence(const DiscretePmf& p, const DiscretePmf& q) {
  const DiscretePmf m = midpoint(p, q);
  const double js = 0.5 * kl_span(p.probs(), m.probs()) +
                    0.5 * kl_span(q.probs(), m.probs());
  return std::clamp(js, 0.0, kLn2);
}

double mutual_information(const DiscreteJoint& joint) {
  return kl_discrete(joint.flatten(), joint.marginal_product().flatten());
}

double lautum_information(const DiscreteJoint& joint) {
  return kl_discrete(joint.marginal_product().flatten(), joint.flatten());
}

double js_information(const DiscreteJoint& joint) {
  return js_divergence(joint.flatten(), joint.marginal_product().flatten());
}

GaussianPair::GaussianPair(double mean_w, double mean_z, double var_w, double var_z,
                           double rho)
    : mean_w_(mean_w), mean_z_(mean_z), var_w_(var_w), var_z_(var_z), rho_(rho) {
  if (!std::isfinite(mean_w) || !std::isfinite(mean_z)) {
    throw std::invalid_argument("GaussianPair: means must be finite");
  }
  if (!(var_w > 0.0) || !(var_z > 0.0) || !std::isfinite(var_w) ||
      !std::isfinite(var_z)) {
    throw std::invalid_argument("GaussianPair: variances must be positive");
  }
  if (!(std::abs(rho) < 1.0)) {
    throw std::invalid_argument("GaussianPair: |rho| must be < 1");
  }
}

void QuadratureSpec::validate() const {
  if (points_per_axis < 3 || points_per_axis % 2 == 0) {
    throw std::invalid_argument("QuadratureSpec: points_per_axis must be odd and >= 3");
  }
  if (!(half_width_sigmas > 0.0) || !std::isfinite(half_width_sigmas)) {
    throw std::invalid_argument("QuadratureSpec: half_width_sigmas must be positive");
  }
}

double gaussian_mutual_information(double rho) {
  if (!(std::abs(rho) < 1.0)) {
    throw std::invalid_argument("gaussian_mutual_information: |rho| must be < 1");
  }
  return -0.5 * std::log1p(-rho * rho);
}

GaussianEntropies gaussian_entropies(const GaussianPair& g) {
  constexpr double two_pi_e = 2.0 * std::numbers::pi * std::numbers::e;
  const double h_w = 0.5 * std::log(two_pi_e * g.var_w());
  const double h_z = 0.5 * std::log(two_pi_e * g.var_z());
  // 1/2 log((2πe)^2 det Σ), det Σ = var_w var_z (1 - rho^2)
  const double h_joint = h_w + h_z + 0.5 * std::log1p(-g.rho() * g.rho());
  return {h_w, h_z, h_joint};
}

namespace {

struct AxisGrid {
  std::vector<double> correlated;   // density of the correlated component
  std::vector<double> independent;  // density of the unit-variance component
  std::vector<double> weights;
};

double normal_pdf(double x, double sd) {
  const double r = x / sd;
  return std::exp(-0.5 * r * r) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

// Trapezoid nodes x = s sinh(ξ), ξ uniform over ±asinh(extent / s).
AxisGrid make_axis(double correlated_sd, const QuadratureSpec& q) {
  const double small = std::min(correlated_sd, 1.0);
  const double extent = q.half_width_sigmas * std::max(correlated_sd, 1.0);
  const double xi_max = std::asinh(extent / small);
  const int n = q.points_per_axis;
  const double step = 2.0 * xi_max / (n - 1);

  AxisGrid grid;
  grid.correlated.resize(n);
  grid.independent.resize(n);
  grid.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    const double xi = -xi_max + k * step;
    const double x = small * std::sinh(xi);
    grid.correlated[k] = normal_pdf(x, correlated_sd);
    grid.independent[k] = normal_pdf(x, 1.0);
    const double end_factor = (k == 0 || k == n - 1) ? 0.5 : 1.0;
    grid.weights[k] = end_factor * step * small * std::cosh(xi);
  }
  return grid;
}

// Entropy of the mixture for standardized marginals.
double standardized_mixture_entropy(double rho, const QuadratureSpec& q) {
  const AxisGrid u = make_axis(std::sqrt(1.0 + rho), q);
  const AxisGrid v = make_axis(std::sqrt(1.0 - rho), q);
  const std::size_t n = u.weights.size();

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double m = 0.5 * (u.correlated[i] * v.correlated[j] +
                              u.independent[i] * v.independent[j]);
      if (m > 0.0 && std::isnormal(m)) row -= v.weights[j] * m * std::log(m);
    }
    total += u.weights[i] * row;
  }
  return total;
}

}  // namespace

QuadratureResult mixture_entropy_2d(const GaussianPair& g, const QuadratureSpec& q) {
  q.validate();
  // Standardizing each coordinate shifts every entropy by log(sd_w sd_z).
  const double log_scale = 0.5 * std::log(g.var_w() * g.var_z());
  const double coarse = standardized_mixture_entropy(g.rho(), q);
  const double fine = standardized_mixture_entropy(g.rho(), q.refined());
  const double change = std::abs(fine - coarse);
  return {coarse + log_scale, change, change <= kQuadratureConvergenceTolerance};
}

JsInformationResult gaussian_js_information(const GaussianPair& g,
                                            const QuadratureSpec& q) {
  const QuadratureResult mix = mixture_entropy_2d(g, q);
  const GaussianEntropies h = gaussian_entropies(g);
  const double raw = mix.value - 0.5 * (h.h_w + h.h_z + h.h_joint);
  constexpr double slack = 1e-6;
  return {std::clamp(raw, 0.0, kLn2), raw, mix.converged,
          raw < -slack || raw > kLn2 + slack};
}

}  // namespace genbound
