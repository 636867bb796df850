#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

#include "genbound/cgf_bounds.hpp"
#include "genbound/info_measures.hpp"
#include "genbound/random.hpp"

namespace genbound {

/// |Z|^n * |W| may not exceed this.
inline constexpr std::size_t kEnumerationLimit = 1'000'000;

// A fully enumerable supervised learning problem: n i.i.d. samples from
// z_pmf, a learning kernel P_{W|S} with one row per ordered training
// sequence, and a bounded loss table.
//
// Training sequence k encodes (s_1, ..., s_n) as base-|Z| digits with s_1
// the most significant digit.
class ToyLearningProblem {
 public:
  /// loss is row-major, w_count x |Z|. Throws std::invalid_argument on any
  /// invariant violation (kernel shape, loss range, enumerability).
  ToyLearningProblem(DiscretePmf z_pmf, int n, std::size_t w_count,
                     std::vector<DiscretePmf> kernel, std::vector<double> loss,
                     double loss_min, double loss_max);

  const DiscretePmf& z_pmf() const { return z_pmf_; }
  int n() const { return n_; }
  std::size_t z_count() const { return z_pmf_.size(); }
  std::size_t w_count() const { return w_count_; }
  std::size_t sequence_count() const { return kernel_.size(); }
  const DiscretePmf& kernel(std::size_t sequence) const { return kernel_[sequence]; }
  double loss(std::size_t w, std::size_t z) const { return loss_[w * z_count() + z]; }
  double loss_min() const { return loss_min_; }
  double loss_max() const { return loss_max_; }

  /// Sample s_i (0-based i) of training sequence k.
  std::size_t sample_at(std::size_t sequence, int i) const;

  /// mu^n(s).
  double sequence_probability(std::size_t sequence) const;

  /// (loss_max - loss_min) / 2.
  double subgaussian_sigma() const;

  nlohmann::json to_json() const;
  static ToyLearningProblem from_json(const nlohmann::json& doc);

 private:
  DiscretePmf z_pmf_;
  int n_;
  std::size_t w_count_;
  std::vector<DiscretePmf> kernel_;
  std::vector<double> loss_;
  double loss_min_;
  double loss_max_;
};

/// P_{W,Z_i} for i = 1..n, each |W| x |Z|.
std::vector<DiscreteJoint> enumerate_joints(const ToyLearningProblem& p);

struct ExactGenResult {
  double gen;
  std::vector<DiscreteJoint> per_index_joints;
  std::vector<double> population_risks;  // L_P(w) per hypothesis
};

/// Expected generalization error by summing over every training sequence.
ExactGenResult exact_gen_error(const ToyLearningProblem& p);

/// (1/n) sum_i E_{P_W ⊗ mu}[l] - E_{P_{W,Z_i}}[l], from the joints alone.
double gen_from_joints(const std::vector<DiscreteJoint>& joints,
                       const ToyLearningProblem& p);

/// Donsker-Varadhan objective E_alpha[f] - log E_beta[e^f]; never exceeds
/// KL(alpha || beta).
double dv_lower_bound(const DiscretePmf& alpha, const DiscretePmf& beta,
                      const std::vector<double>& f);

enum class Auxiliary { product, joint, mixture };

/// A_i and B_i of the auxiliary-distribution bound for the given choice.
BoundInputs auxiliary_terms(const std::vector<DiscreteJoint>& joints, Auxiliary aux);

struct CertificationReport {
  double gen = 0.0;
  double sigma = 0.0;
  std::vector<double> mi_terms;
  std::vector<double> lautum_terms;
  std::vector<double> js_terms;
  BoundReport mi;
  BoundReport lautum;
  BoundReport js;
  BoundReport theorem2_product;
  BoundReport theorem2_joint;
  BoundReport theorem2_mixture;
  double cap = 0.0;
  std::vector<std::string> violations;  // names of bounds below |gen|

  bool ok() const { return violations.empty(); }
};

/// Evaluates every bound on p and checks |gen| against each finite one.
CertificationReport certify_bounds(const ToyLearningProblem& p);

struct ProblemShape {
  std::size_t max_z = 4;
  int max_n = 3;
  std::size_t max_w = 4;
};

// Flat-Dirichlet data law and kernel rows, losses uniform on [0, 1].
ToyLearningProblem random_problem(Rng& rng, const ProblemShape& shape = {});

/// Flat-Dirichlet joint with both alphabet sizes uniform in [1, max_alphabet].
DiscreteJoint random_joint(Rng& rng, std::size_t max_alphabet);

struct InequalityAudit {
  double mi;
  double js;
  double tv;
  bool pinsker;      // tv <= sqrt(2 mi)
  bool js_tv;        // 2 js <= log 2 * tv
  bool js_mi;        // js^2 <= log(2)^2 mi / 2
  bool dominance;    // mi >= 8 log(2)^2 implies 4 js <= mi
  bool ok() const { return pinsker && js_tv && js_mi && dominance; }
};

InequalityAudit audit_inequalities(const DiscreteJoint& joint);

}  // namespace genbound
