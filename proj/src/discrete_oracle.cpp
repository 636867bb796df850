#include "genbound/discrete_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/random/uniform_real_distribution.hpp>

namespace genbound {
namespace {

constexpr double kSoundnessSlack = 1e-12;

std::size_t checked_power(std::size_t base, int exponent) {
  std::size_t out = 1;
  for (int i = 0; i < exponent; ++i) {
    if (out > kEnumerationLimit / base) {
      throw std::invalid_argument("ToyLearningProblem: |Z|^n exceeds the enumeration limit");
    }
    out *= base;
  }
  return out;
}

}  // namespace

ToyLearningProblem::ToyLearningProblem(DiscretePmf z_pmf, int n, std::size_t w_count,
                                       std::vector<DiscretePmf> kernel,
                                       std::vector<double> loss, double loss_min,
                                       double loss_max)
    : z_pmf_(std::move(z_pmf)),
      n_(n),
      w_count_(w_count),
      kernel_(std::move(kernel)),
      loss_(std::move(loss)),
      loss_min_(loss_min),
      loss_max_(loss_max) {
  if (n_ < 1) throw std::invalid_argument("ToyLearningProblem: n must be >= 1");
  if (w_count_ < 1) throw std::invalid_argument("ToyLearningProblem: need at least one hypothesis");
  const std::size_t sequences = checked_power(z_count(), n_);
  if (sequences > kEnumerationLimit / w_count_) {
    throw std::invalid_argument("ToyLearningProblem: |Z|^n * |W| exceeds the enumeration limit");
  }
  if (kernel_.size() != sequences) {
    throw std::invalid_argument("ToyLearningProblem: kernel needs " +
                                std::to_string(sequences) + " rows, got " +
                                std::to_string(kernel_.size()));
  }
  for (const DiscretePmf& row : kernel_) {
    if (row.size() != w_count_) {
      throw std::invalid_argument("ToyLearningProblem: kernel row has wrong hypothesis count");
    }
  }
  if (!std::isfinite(loss_min_) || !std::isfinite(loss_max_) || !(loss_min_ < loss_max_)) {
    throw std::invalid_argument("ToyLearningProblem: need finite loss_min < loss_max");
  }
  if (loss_.size() != w_count_ * z_count()) {
    throw std::invalid_argument("ToyLearningProblem: loss table must be |W| x |Z|");
  }
  for (double l : loss_) {
    if (!(l >= loss_min_ && l <= loss_max_)) {
      throw std::invalid_argument("ToyLearningProblem: loss entry " + std::to_string(l) +
                                  " outside [loss_min, loss_max]");
    }
  }
}

std::size_t ToyLearningProblem::sample_at(std::size_t sequence, int i) const {
  for (int k = n_ - 1; k > i; --k) sequence /= z_count();
  return sequence % z_count();
}

double ToyLearningProblem::sequence_probability(std::size_t sequence) const {
  double prob = 1.0;
  for (int i = n_ - 1; i >= 0; --i) {
    prob *= z_pmf_[sequence % z_count()];
    sequence /= z_count();
  }
  return prob;
}

double ToyLearningProblem::subgaussian_sigma() const {
  return SubgaussianEnvelope::for_bounded_loss(loss_min_, loss_max_).sigma;
}

nlohmann::json ToyLearningProblem::to_json() const {
  nlohmann::json kernel = nlohmann::json::array();
  for (const DiscretePmf& row : kernel_) {
    kernel.push_back(std::vector<double>(row.probs().begin(), row.probs().end()));
  }
  nlohmann::json loss = nlohmann::json::array();
  for (std::size_t w = 0; w < w_count_; ++w) {
    loss.push_back(std::vector<double>(loss_.begin() + w * z_count(),
                                       loss_.begin() + (w + 1) * z_count()));
  }
  return {
      {"z_pmf", std::vector<double>(z_pmf_.probs().begin(), z_pmf_.probs().end())},
      {"n", n_},
      {"w_count", w_count_},
      {"kernel", std::move(kernel)},
      {"loss", std::move(loss)},
      {"loss_min", loss_min_},
      {"loss_max", loss_max_},
  };
}

ToyLearningProblem ToyLearningProblem::from_json(const nlohmann::json& doc) {
  try {
    std::vector<DiscretePmf> kernel;
    for (const auto& row : doc.at("kernel")) {
      kernel.emplace_back(row.get<std::vector<double>>());
    }
    const auto w_count = doc.at("w_count").get<std::size_t>();
    std::vector<double> loss;
    const auto& rows = doc.at("loss");
    if (rows.size() != w_count) {
      throw std::invalid_argument("ToyLearningProblem: loss needs one row per hypothesis");
    }
    for (const auto& row : rows) {
      const auto values = row.get<std::vector<double>>();
      loss.insert(loss.end(), values.begin(), values.end());
    }
    return ToyLearningProblem(DiscretePmf(doc.at("z_pmf").get<std::vector<double>>()),
                              doc.at("n").get<int>(), w_count, std::move(kernel),
                              std::move(loss), doc.at("loss_min").get<double>(),
                              doc.at("loss_max").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed problem document: ") + e.what());
  }
}

std::vector<DiscreteJoint> enumerate_joints(const ToyLearningProblem& p) {
  const std::size_t zc = p.z_count();
  const std::size_t wc = p.w_count();
  std::vector<std::vector<double>> tables(p.n(), std::vector<double>(wc * zc, 0.0));
  for (std::size_t s = 0; s < p.sequence_count(); ++s) {
    const double prob = p.sequence_probability(s);
    if (prob == 0.0) continue;
    const DiscretePmf& row = p.kernel(s);
    for (int i = 0; i < p.n(); ++i) {
      const std::size_t z = p.sample_at(s, i);
      for (std::size_t w = 0; w < wc; ++w) tables[i][w * zc + z] += prob * row[w];
    }
  }
  std::vector<DiscreteJoint> joints;
  joints.reserve(tables.size());
  for (auto& t : tables) joints.emplace_back(wc, zc, std::move(t));
  return joints;
}

ExactGenResult exact_gen_error(const ToyLearningProblem& p) {
  const std::size_t wc = p.w_count();
  std::vector<double> population(wc, 0.0);
  for (std::size_t w = 0; w < wc; ++w) {
    for (std::size_t z = 0; z < p.z_count(); ++z) population[w] += p.z_pmf()[z] * p.loss(w, z);
  }

  double gen = 0.0;
  for (std::size_t s = 0; s < p.sequence_count(); ++s) {
    const double prob = p.sequence_probability(s);
    if (prob == 0.0) continue;
    const DiscretePmf& row = p.kernel(s);
    double inner = 0.0;
    for (std::size_t w = 0; w < wc; ++w) {
      double empirical = 0.0;
      for (int i = 0; i < p.n(); ++i) empirical += p.loss(w, p.sample_at(s, i));
      empirical /= p.n();
      inner += row[w] * (population[w] - empirical);
    }
    gen += prob * inner;
  }
  return {gen, enumerate_joints(p), std::move(population)};
}

double gen_from_joints(const std::vector<DiscreteJoint>& joints,
                       const ToyLearningProblem& p) {
  double total = 0.0;
  for (const DiscreteJoint& joint : joints) {
    const DiscretePmf pw = joint.w_marginal();
    for (std::size_t w = 0; w < joint.rows(); ++w) {
      for (std::size_t z = 0; z < joint.cols(); ++z) {
        total += (pw[w] * p.z_pmf()[z] - joint(w, z)) * p.loss(w, z);
      }
    }
  }
  return total / static_cast<double>(joints.size());
}

double dv_lower_bound(const DiscretePmf& alpha, const DiscretePmf& beta,
                      const std::vector<double>& f) {
  if (alpha.size() != beta.size() || f.size() != alpha.size()) {
    throw std::invalid_argument("dv_lower_bound: size mismatch");
  }
  double expectation = 0.0;
  double max_f = -kInfinity;
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (alpha[x] > 0.0) expectation += alpha[x] * f[x];
    if (beta[x] > 0.0) {
      if (!std::isfinite(f[x])) {
        throw std::invalid_argument("dv_lower_bound: f must be finite where beta > 0");
      }
      max_f = std::max(max_f, f[x]);
    }
  }
  double sum = 0.0;
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (beta[x] > 0.0) sum += beta[x] * std::exp(f[x] - max_f);
  }
  return expectation - (max_f + std::log(sum));
}

BoundInputs auxiliary_terms(const std::vector<DiscreteJoint>& joints, Auxiliary aux) {
  std::vector<double> a;
  std::vector<double> b;
  for (const DiscreteJoint& joint : joints) {
    const DiscretePmf p_joint = joint.flatten();
    const DiscretePmf p_product = joint.marginal_product().flatten();
    const DiscretePmf reference = [&] {
      switch (aux) {
        case Auxiliary::product: return p_product;
        case Auxiliary::joint: return p_joint;
        case Auxiliary::mixture: break;
      }
      return midpoint(p_joint, p_product);
    }();
    a.push_back(kl_discrete(p_product, reference));
    b.push_back(kl_discrete(p_joint, reference));
  }
  return BoundInputs(std::move(a), std::move(b));
}

CertificationReport certify_bounds(const ToyLearningProblem& p) {
  const ExactGenResult exact = exact_gen_error(p);
  CertificationReport r;
  r.gen = exact.gen;
  r.sigma = p.subgaussian_sigma();
  for (const DiscreteJoint& joint : exact.per_index_joints) {
    r.mi_terms.push_back(mutual_information(joint));
    r.lautum_terms.push_back(lautum_information(joint));
    r.js_terms.push_back(js_information(joint));
  }
  r.mi = mi_bound(r.sigma, r.mi_terms);
  r.lautum = lautum_bound(r.sigma, r.lautum_terms);
  r.js = js_bound(r.sigma, r.js_terms);
  r.theorem2_product =
      theorem2_bound(r.sigma, auxiliary_terms(exact.per_index_joints, Auxiliary::product));
  r.theorem2_joint =
      theorem2_bound(r.sigma, auxiliary_terms(exact.per_index_joints, Auxiliary::joint));
  r.theorem2_mixture =
      theorem2_bound(r.sigma, auxiliary_terms(exact.per_index_joints, Auxiliary::mixture));
  r.cap = prop1_cap(r.sigma);

  const double magnitude = std::abs(r.gen);
  auto check = [&](const char* name, double bound) {
    if (std::isfinite(bound) && bound + kSoundnessSlack < magnitude) {
      r.violations.emplace_back(name);
    }
  };
  check("mi_bound", r.mi.value);
  check("lautum_bound", r.lautum.value);
  check("js_bound", r.js.value);
  check("theorem2_product", r.theorem2_product.value);
  check("theorem2_joint", r.theorem2_joint.value);
  check("theorem2_mixture", r.theorem2_mixture.value);
  check("prop1_cap", r.cap);
  return r;
}

ToyLearningProblem random_problem(Rng& rng, const ProblemShape& shape) {
  const std::size_t zc = uniform_index(rng, 1, shape.max_z);
  const int n = static_cast<int>(uniform_index(rng, 1, static_cast<std::size_t>(shape.max_n)));
  const std::size_t wc = uniform_index(rng, 1, shape.max_w);

  DiscretePmf z_pmf(sample_flat_dirichlet(rng, zc));
  std::size_t sequences = 1;
  for (int i = 0; i < n; ++i) sequences *= zc;
  std::vector<DiscretePmf> kernel;
  kernel.reserve(sequences);
  for (std::size_t s = 0; s < sequences; ++s) kernel.emplace_back(sample_flat_dirichlet(rng, wc));

  boost::random::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> loss(wc * zc);
  for (double& l : loss) l = unit(rng);
  return ToyLearningProblem(std::move(z_pmf), n, wc, std::move(kernel), std::move(loss), 0.0,
                            1.0);
}

DiscreteJoint random_joint(Rng& rng, std::size_t max_alphabet) {
  if (max_alphabet < 1) throw std::invalid_argument("random_joint: max_alphabet must be >= 1");
  const std::size_t rows = uniform_index(rng, 1, max_alphabet);
  const std::size_t cols = uniform_index(rng, 1, max_alphabet);
  return DiscreteJoint(rows, cols, sample_flat_dirichlet(rng, rows * cols));
}

InequalityAudit audit_inequalities(const DiscreteJoint& joint) {
  constexpr double slack = 1e-12;
  const DiscretePmf p = joint.flatten();
  const DiscretePmf q = joint.marginal_product().flatten();
  InequalityAudit a{};
  a.mi = kl_discrete(p, q);
  a.js = js_divergence(p, q);
  a.tv = tv_discrete(p, q);
  a.pinsker = a.tv <= std::sqrt(2.0 * a.mi) + slack;
  a.js_tv = 2.0 * a.js <= kLn2 * a.tv + slack;
  a.js_mi = a.js * a.js <= kLn2 * kLn2 * a.mi / 2.0 + slack;
  a.dominance = !js_dominance_condition(a.mi) || 4.0 * a.js <= a.mi + slack;
  return a;
}

}  // namespace genbound
