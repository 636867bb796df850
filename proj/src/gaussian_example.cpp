#include "genbound/gaussian_example.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/random/normal_distribution.hpp>

#include "json.hpp"

#include "genbound/cgf_bounds.hpp"
#include "genbound/format.hpp"
#include "genbound/parallel.hpp"
#include "genbound/random.hpp"

namespace genbound {

void ExampleConfig::validate() const {
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("ExampleConfig: t must lie in (0, 1)");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw std::invalid_argument("ExampleConfig: sigma2 must be positive");
  }
  if (!std::isfinite(mean)) throw std::invalid_argument("ExampleConfig: mean must be finite");
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("ExampleConfig: c must be positive");
}

ExampleConfig ExampleConfig::with_default_truncation(double sigma2, double mean) {
  return {0.25, sigma2, mean, std::sqrt(sigma2) / 4.0};
}

double ExampleConfig::hypothesis_variance() const {
  return sigma2 * (t * t + (1.0 - t) * (1.0 - t));
}

std::pair<double, double> rho_coefficients(double t) {
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("rho_coefficients: t must lie in (0, 1)");
  const double norm = std::hypot(t, 1.0 - t);
  return {t / norm, (1.0 - t) / norm};
}

std::pair<double, double> example_mutual_informations(double t) {
  // 1 - rho_1^2 = rho_2^2, which keeps full precision as either rho -> 1.
  const auto [rho1, rho2] = rho_coefficients(t);
  return {-std::log(rho2), -std::log(rho1)};
}

ExampleJsInformations example_js_informations(double t, double sigma2,
                                              const QuadratureSpec& q, double mean) {
  const auto [rho1, rho2] = rho_coefficients(t);
  const double var_w = sigma2 * (t * t + (1.0 - t) * (1.0 - t));
  return {gaussian_js_information(GaussianPair(mean, mean, var_w, sigma2, rho1), q),
          gaussian_js_information(GaussianPair(mean, mean, var_w, sigma2, rho2), q)};
}

double truncated_loss(double w, double z, double c) {
  const double d = w - z;
  return std::abs(d) <= c ? d * d : c * c;
}

namespace {

double upper_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// P(lo < X < hi) for standard normal X, without cancellation in the tails.
double interval_mass(double lo, double hi) {
  if (lo >= 0.0) return upper_tail(lo) - upper_tail(hi);
  if (hi <= 0.0) return upper_tail(-hi) - upper_tail(-lo);
  return 1.0 - upper_tail(-lo) - upper_tail(hi);
}

}  // namespace

double population_risk(double w, const ExampleConfig& cfg) {
  // Y = Z - w ~ N(mu, s^2); integrate y^2 over |y| <= c and c^2 outside.
  const double mu = cfg.mean - w;
  const double s = std::sqrt(cfg.sigma2);
  const double lo = (-cfg.c - mu) / s;
  const double hi = (cfg.c - mu) / s;
  const double mass = interval_mass(lo, hi);
  const double phi_lo = normal_pdf(lo);
  const double phi_hi = normal_pdf(hi);
  const double inner = mu * mu * mass + 2.0 * mu * s * (phi_lo - phi_hi) +
                       cfg.sigma2 * (mass + lo * phi_lo - hi * phi_hi);
  return inner + cfg.c * cfg.c * (1.0 - mass);
}

MonteCarloEstimate true_gen_error_mc(const ExampleConfig& cfg, std::uint64_t samples,
                                     std::uint64_t seed) {
  cfg.validate();
  if (samples < 2) throw std::invalid_argument("true_gen_error_mc: need at least 2 samples");
  Rng rng(seed);
  boost::random::normal_distribution<double> normal(cfg.mean, std::sqrt(cfg.sigma2));

  // Welford running mean / variance.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t k = 1; k <= samples; ++k) {
    const double z1 = normal(rng);
    const double z2 = normal(rng);
    const double w = cfg.t * z1 + (1.0 - cfg.t) * z2;
    const double gap = population_risk(w, cfg) -
                       0.5 * (truncated_loss(w, z1, cfg.c) + truncated_loss(w, z2, cfg.c));
    const double delta = gap - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (gap - mean);
  }
  const double variance = m2 / static_cast<double>(samples - 1);
  return {mean, std::sqrt(variance / static_cast<double>(samples))};
}

double example_mi_bound(const ExampleConfig& cfg, std::pair<double, double> mi) {
  const double terms[] = {mi.first, mi.second};
  return genbound::mi_bound(cfg.loss_sigma(), terms).value;
}

double example_js_bound(const ExampleConfig& cfg, std::pair<double, double> js) {
  const double terms[] = {js.first, js.second};
  return genbound::js_bound(cfg.loss_sigma(), terms).value;
}

void SweepSpec::validate() const {
  if (t_values.empty()) throw std::invalid_argument("SweepSpec: no t values");
  for (std::size_t k = 0; k < t_values.size(); ++k) {
    const double t = t_values[k];
    if (!(t > 0.0 && t <= 0.5)) throw std::invalid_argument("SweepSpec: t values must lie in (0, 0.5]");
    if (k > 0 && !(t > t_values[k - 1])) {
      throw std::invalid_argument("SweepSpec: t values must be strictly increasing");
    }
  }
  if (mc_samples < 10'000) throw std::invalid_argument("SweepSpec: mc_samples must be >= 10000");
  quadrature.validate();
}

std::vector<double> SweepSpec::linspace(double t_min, double t_max, int steps) {
  if (steps < 1) throw std::invalid_argument("linspace: steps must be >= 1");
  if (steps == 1) return {t_min};
  std::vector<double> out(steps);
  for (int k = 0; k < steps; ++k) {
    out[k] = t_min + (t_max - t_min) * k / (steps - 1);
  }
  out.back() = t_max;
  return out;
}

std::vector<CurvePoint> sweep(const SweepSpec& spec, const ExampleConfig& base) {
  spec.validate();
  std::vector<CurvePoint> points(spec.t_values.size());
  parallel_for(points.size(), [&](std::size_t k) {
    ExampleConfig cfg = base;
    cfg.t = spec.t_values[k];
    cfg.validate();
    const auto mi = example_mutual_informations(cfg.t);
    const ExampleJsInformations js =
        example_js_informations(cfg.t, cfg.sigma2, spec.quadrature, cfg.mean);
    const std::pair<double, double> js_values{js.first.value, js.second.value};
    const MonteCarloEstimate gen =
        true_gen_error_mc(cfg, spec.mc_samples, derive_seed(spec.seed, "sweep", k));
    points[k] = {cfg.t,
                 gen.estimate,
                 gen.stderr_,
                 example_mi_bound(cfg, mi),
                 example_js_bound(cfg, js_values),
                 mi,
                 js_values,
                 js.converged()};
  });
  return points;
}

std::string sweep_to_csv(const std::vector<CurvePoint>& points, double info_scale) {
  std::string out = kSweepCsvHeader;
  out += '\n';
  for (const CurvePoint& p : points) {
    for (double v : {p.t, p.true_gen, p.true_gen_stderr, p.mi_bound, p.js_bound,
                     p.i_mi.first * info_scale, p.i_mi.second * info_scale,
                     p.i_js.first * info_scale, p.i_js.second * info_scale}) {
      out += format_sig(v);
      out += ',';
    }
    out += p.converged ? "1\n" : "0\n";
  }
  return out;
}

std::string sweep_to_json(const std::vector<CurvePoint>& points, double info_scale) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const CurvePoint& p : points) {
    rows.push_back({
        {"t", round_sig(p.t)},
        {"true_gen", round_sig(p.true_gen)},
        {"stderr", round_sig(p.true_gen_stderr)},
        {"mi_bound", round_sig(p.mi_bound)},
        {"js_bound", round_sig(p.js_bound)},
        {"i_mi_1", round_sig(p.i_mi.first * info_scale)},
        {"i_mi_2", round_sig(p.i_mi.second * info_scale)},
        {"i_js_1", round_sig(p.i_js.first * info_scale)},
        {"i_js_2", round_sig(p.i_js.second * info_scale)},
        {"converged", p.converged},
    });
  }
  return rows.dump(2) + '\n';
}

}  // namespace genbound
