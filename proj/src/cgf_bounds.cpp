#include "genbound/cgf_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace genbound {
namespace {

constexpr double kLambdaMin = 1e-8;
constexpr double kLambdaMax = 1e8;
constexpr int kCheckPoints = 64;
constexpr int kMaxIterations = 200;
constexpr double kLogLambdaTolerance = 1e-13;

double search_upper(double domain_bound) {
  return std::min(domain_bound * (1.0 - 1e-9), kLambdaMax);
}

void check_envelope(const CgfEnvelope& env) {
  auto fail = [](const std::string& why) {
    throw std::invalid_argument("CgfEnvelope: " + why);
  };
  if (std::abs(env(0.0)) > 1e-12) fail("psi(0) must be 0");

  const double lo = std::log(kLambdaMin);
  const double hi = std::log(search_upper(env.domain_bound()));
  if (!(hi > lo)) fail("domain bound is too small to search");

  std::vector<double> lambdas(kCheckPoints);
  std::vector<double> values(kCheckPoints);
  for (int k = 0; k < kCheckPoints; ++k) {
    lambdas[k] = std::exp(lo + (hi - lo) * k / (kCheckPoints - 1));
    values[k] = env(lambdas[k]);
    if (!std::isfinite(values[k])) fail("psi must be finite inside its domain");
    if (values[k] < -1e-12) fail("psi must be non-negative");
  }
  for (int k = 0; k + 1 < kCheckPoints; ++k) {
    const double a = values[k];
    const double b = values[k + 1];
    const double tol = 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
    if (b < a - tol) fail("psi must be non-decreasing");
    const double mid = env(0.5 * (lambdas[k] + lambdas[k + 1]));
    if (mid > 0.5 * (a + b) + tol) {
      fail("psi fails the midpoint convexity check near lambda = " +
           std::to_string(lambdas[k]));
    }
  }
}

void check_terms(std::span<const double> terms, const char* what) {
  if (terms.empty()) throw std::invalid_argument(std::string(what) + ": no terms");
  for (double t : terms) {
    if (std::isnan(t) || t < 0.0) {
      throw std::invalid_argument(std::string(what) +
                                  ": terms must be non-negative or +inf");
    }
  }
}

void check_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("sigma must be positive and finite");
  }
}

BoundReport make_report(BoundKind kind, std::vector<double> terms) {
  bool finite = true;
  double sum = 0.0;
  for (double t : terms) {
    if (std::isinf(t)) finite = false;
    sum += t;
  }
  const double value =
      finite ? sum / static_cast<double>(terms.size()) : kInfinity;
  return {kind, value, std::move(terms), finite};
}

std::vector<double> scaled_roots(std::span<const double> terms, double scale) {
  std::vector<double> out(terms.size());
  std::transform(terms.begin(), terms.end(), out.begin(),
                 [scale](double t) { return std::sqrt(scale * t); });
  return out;
}

}  // namespace

CgfEnvelope::CgfEnvelope(Function psi, double domain_bound)
    : psi_(std::move(psi)), domain_bound_(domain_bound) {
  if (!psi_) throw std::invalid_argument("CgfEnvelope: empty function");
  if (!(domain_bound > 0.0)) {
    throw std::invalid_argument("CgfEnvelope: domain bound must be positive");
  }
  check_envelope(*this);
}

CgfEnvelope CgfEnvelope::subgaussian(double sigma) {
  check_sigma(sigma);
  const double half_var = 0.5 * sigma * sigma;
  return CgfEnvelope([half_var](double l) { return half_var * l * l; });
}

CgfEnvelope CgfEnvelope::from_table(std::vector<std::pair<double, double>> samples) {
  if (samples.empty()) throw std::invalid_argument("CgfEnvelope: empty table");
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (!std::isfinite(samples[k].first) || !std::isfinite(samples[k].second) ||
        samples[k].first < 0.0) {
      throw std::invalid_argument("CgfEnvelope: table entries must be finite, lambda >= 0");
    }
    if (k > 0 && !(samples[k].first > samples[k - 1].first)) {
      throw std::invalid_argument("CgfEnvelope: table lambdas must be strictly increasing");
    }
  }
  if (samples.front().first > 0.0) samples.insert(samples.begin(), {0.0, 0.0});
  if (samples.size() < 2) throw std::invalid_argument("CgfEnvelope: table needs a positive lambda");

  const double bound = samples.back().first;
  auto interpolate = [table = std::move(samples)](double l) {
    auto it = std::upper_bound(table.begin(), table.end(), l,
                               [](double v, const auto& s) { return v < s.first; });
    if (it == table.begin()) return table.front().second;
    if (it == table.end()) return table.back().second;
    const auto& [l1, p1] = *it;
    const auto& [l0, p0] = *(it - 1);
    return p0 + (p1 - p0) * (l - l0) / (l1 - l0);
  };
  return CgfEnvelope(std::move(interpolate), bound);
}

SubgaussianEnvelope SubgaussianEnvelope::for_bounded_loss(double lo, double hi) {
  if (!(hi > lo)) throw std::invalid_argument("bounded loss range must satisfy lo < hi");
  return {0.5 * (hi - lo)};
}

double psi_star_inverse(const CgfEnvelope& env, double x) {
  if (std::isnan(x) || x < 0.0) {
    throw std::invalid_argument("psi_star_inverse: x must be non-negative");
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return kInfinity;

  auto objective = [&](double log_lambda) {
    const double lambda = std::exp(log_lambda);
    return (x + env(lambda)) / lambda;
  };

  constexpr double inv_phi = 0.6180339887498949;  // 1 / golden ratio
  double a = std::log(kLambdaMin);
  double b = std::log(search_upper(env.domain_bound()));
  double best = std::min(objective(a), objective(b));
  const double edge = env.domain_bound();
  if (edge <= kLambdaMax && std::isfinite(env(edge))) {
    best = std::min(best, (x + env(edge)) / edge);
  }

  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  for (int it = 0; it < kMaxIterations && (b - a) > kLogLambdaTolerance; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
    best = std::min({best, fc, fd});
  }
  return best;
}

BoundInputs::BoundInputs(std::vector<double> a, std::vector<double> b)
    : a_terms(std::move(a)), b_terms(std::move(b)) {
  if (a_terms.size() != b_terms.size()) {
    throw std::invalid_argument("BoundInputs: A and B must have the same length");
  }
  check_terms(a_terms, "BoundInputs A");
  check_terms(b_terms, "BoundInputs B");
}

std::string_view to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::theorem1_upper: return "theorem1_upper";
    case BoundKind::theorem1_lower: return "theorem1_lower";
    case BoundKind::theorem2: return "theorem2";
    case BoundKind::mi_example1: return "mi_example1";
    case BoundKind::lautum_example2: return "lautum_example2";
    case BoundKind::js_corollary1: return "js_corollary1";
    case BoundKind::prop1_cap: return "prop1_cap";
  }
  return "unknown";
}

BoundReport theorem1_upper(const BoundInputs& inputs, const CgfEnvelope& env_plus,
                           const CgfEnvelope& env_minus) {
  std::vector<double> terms(inputs.n());
  for (std::size_t i = 0; i < inputs.n(); ++i) {
    terms[i] = psi_star_inverse(env_plus, inputs.a_terms[i]) +
               psi_star_inverse(env_minus, inputs.b_terms[i]);
  }
  return make_report(BoundKind::theorem1_upper, std::move(terms));
}

BoundReport theorem1_lower(const BoundInputs& inputs, const CgfEnvelope& env_plus,
                           const CgfEnvelope& env_minus) {
  std::vector<double> terms(inputs.n());
  for (std::size_t i = 0; i < inputs.n(); ++i) {
    terms[i] = psi_star_inverse(env_minus, inputs.a_terms[i]) +
               psi_star_inverse(env_plus, inputs.b_terms[i]);
  }
  return make_report(BoundKind::theorem1_lower, std::move(terms));
}

BoundReport theorem2_bound(double sigma, const BoundInputs& inputs) {
  check_sigma(sigma);
  std::vector<double> terms(inputs.n());
  for (std::size_t i = 0; i < inputs.n(); ++i) {
    terms[i] = 2.0 * std::sqrt(sigma * sigma * (inputs.a_terms[i] + inputs.b_terms[i]));
  }
  return make_report(BoundKind::theorem2, std::move(terms));
}

BoundReport mi_bound(double sigma, std::span<const double> mi_terms) {
  check_sigma(sigma);
  check_terms(mi_terms, "mi_bound");
  return make_report(BoundKind::mi_example1, scaled_roots(mi_terms, 2.0 * sigma * sigma));
}

BoundReport lautum_bound(double sigma, std::span<const double> lautum_terms) {
  check_sigma(sigma);
  check_terms(lautum_terms, "lautum_bound");
  return make_report(BoundKind::lautum_example2,
                     scaled_roots(lautum_terms, 2.0 * sigma * sigma));
}

BoundReport js_bound(double sigma, std::span<const double> js_terms) {
  check_sigma(sigma);
  check_terms(js_terms, "js_bound");
  for (double t : js_terms) {
    if (t > kLn2 + 1e-9) {
      throw std::invalid_argument("js_bound: term " + std::to_string(t) +
                                  " exceeds log 2");
    }
  }
  std::vector<double> terms = scaled_roots(js_terms, 2.0 * sigma * sigma);
  for (double& t : terms) t *= 2.0;
  return make_report(BoundKind::js_corollary1, std::move(terms));
}

double prop1_cap(double sigma) {
  check_sigma(sigma);
  return 2.0 * sigma * std::sqrt(2.0 * kLn2);
}

bool js_dominance_condition(double mi) {
  if (std::isnan(mi) || mi < 0.0) {
    throw std::invalid_argument("js_dominance_condition: mi must be non-negative");
  }
  return mi >= kJsDominanceThreshold;
}

}  // namespace genbound
