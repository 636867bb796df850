#include "genbound/discrete_oracle.hpp"

#include <algorithm>
#include <cmath>

#include <boost/random/uniform_real_distribution.hpp>

#include <gtest/gtest.h>

namespace genbound {
namespace {

// n = 1, uniform binary Z, W = Z, 0-1 loss.
ToyLearningProblem memorizing_problem() {
  return ToyLearningProblem(DiscretePmf({0.5, 0.5}), 1, 2,
                            {DiscretePmf({1.0, 0.0}), DiscretePmf({0.0, 1.0})},
                            {0.0, 1.0, 1.0, 0.0}, 0.0, 1.0);
}

// Kernel ignores the data.
ToyLearningProblem independent_problem() {
  std::vector<DiscretePmf> kernel(9, DiscretePmf({0.2, 0.5, 0.3}));
  return ToyLearningProblem(DiscretePmf({0.6, 0.1, 0.3}), 2, 3, std::move(kernel),
                            {0.1, 0.9, 0.4, 0.0, 1.0, 0.5, 0.7, 0.2, 0.3}, 0.0, 1.0);
}

TEST(ToyLearningProblem, Validation) {
  const std::vector<double> loss{0.0, 1.0, 1.0, 0.0};
  const std::vector<DiscretePmf> kernel{DiscretePmf({1.0, 0.0}), DiscretePmf({0.0, 1.0})};
  EXPECT_THROW(ToyLearningProblem(DiscretePmf({0.5, 0.5}), 2, 2, kernel, loss, 0, 1),
               std::invalid_argument);
  EXPECT_THROW(ToyLearningProblem(DiscretePmf({0.5, 0.5}), 1, 2, kernel, loss, 0, 0.5),
               std::invalid_argument);
  EXPECT_THROW(ToyLearningProblem(DiscretePmf({0.5, 0.5}), 1, 2, kernel, {0.0, 1.0}, 0, 1),
               std::invalid_argument);
  EXPECT_THROW(ToyLearningProblem(DiscretePmf({0.5, 0.5}), 1, 3, kernel, loss, 0, 1),
               std::invalid_argument);
  // 2^20 sequences exceeds the enumeration guard before the kernel is checked.
  EXPECT_THROW(ToyLearningProblem(DiscretePmf({0.5, 0.5}), 20, 2, {}, loss, 0, 1),
               std::invalid_argument);
}

TEST(ToyLearningProblem, SequenceEncoding) {
  std::vector<DiscretePmf> kernel(27, DiscretePmf({1.0}));
  const ToyLearningProblem p(DiscretePmf({0.5, 0.3, 0.2}), 3, 1, kernel, {0, 0, 0}, 0, 1);
  // 15 = 1*9 + 2*3 + 0
  EXPECT_EQ(p.sample_at(15, 0), 1u);
  EXPECT_EQ(p.sample_at(15, 1), 2u);
  EXPECT_EQ(p.sample_at(15, 2), 0u);
  EXPECT_DOUBLE_EQ(p.sequence_probability(15), 0.3 * 0.2 * 0.5);
  double total = 0.0;
  for (std::size_t s = 0; s < p.sequence_count(); ++s) total += p.sequence_probability(s);
  EXPECT_NEAR(total, 1.0, 1e-15);
}

TEST(ToyLearningProblem, JsonRoundTrip) {
  Rng rng(4);
  const ToyLearningProblem p = random_problem(rng);
  const ToyLearningProblem q = ToyLearningProblem::from_json(p.to_json());
  EXPECT_EQ(p.to_json(), q.to_json());
  EXPECT_EQ(exact_gen_error(p).gen, exact_gen_error(q).gen);

  nlohmann::json bad = p.to_json();
  bad["loss"][0][0] = 2.0;
  EXPECT_THROW(ToyLearningProblem::from_json(bad), std::invalid_argument);
  bad = p.to_json();
  bad.erase("kernel");
  EXPECT_THROW(ToyLearningProblem::from_json(bad), std::invalid_argument);
}

TEST(EnumerateJoints, IndependentKernelGivesProducts) {
  const ToyLearningProblem p = independent_problem();
  for (const DiscreteJoint& joint : enumerate_joints(p)) {
    const DiscreteJoint product = joint.marginal_product();
    for (std::size_t k = 0; k < joint.table().size(); ++k) {
      EXPECT_NEAR(joint.table()[k], product.table()[k], 1e-15);
    }
    EXPECT_NEAR(mutual_information(joint), 0.0, 1e-15);
  }
}

TEST(EnumerateJoints, MemorizingProblemIsDiagonal) {
  const auto joints = enumerate_joints(memorizing_problem());
  ASSERT_EQ(joints.size(), 1u);
  EXPECT_DOUBLE_EQ(joints[0](0, 0), 0.5);
  EXPECT_DOUBLE_EQ(joints[0](1, 1), 0.5);
  EXPECT_DOUBLE_EQ(joints[0](0, 1), 0.0);
}

TEST(EnumerateJoints, ExchangeableKernelAndMarginals) {
  // Kernel depends on the sample multiset only: P(W = 1 | s) = mean(s) / 2.
  const std::size_t zc = 3;
  const int n = 3;
  std::vector<DiscretePmf> kernel;
  for (std::size_t s = 0; s < 27; ++s) {
    const double mean = static_cast<double>(s / 9 + (s / 3) % 3 + s % 3) / 3.0;
    kernel.emplace_back(std::vector<double>{1.0 - mean / 2.0, mean / 2.0});
  }
  const ToyLearningProblem p(DiscretePmf({0.2, 0.3, 0.5}), n, 2, kernel,
                             {0.0, 0.5, 1.0, 1.0, 0.5, 0.0}, 0.0, 1.0);
  const auto joints = enumerate_joints(p);
  ASSERT_EQ(joints.size(), 3u);
  for (const DiscreteJoint& joint : joints) {
    const DiscretePmf z = joint.z_marginal();
    for (std::size_t k = 0; k < zc; ++k) EXPECT_NEAR(z[k], p.z_pmf()[k], 1e-12);
    for (std::size_t k = 0; k < joint.table().size(); ++k) {
      EXPECT_NEAR(joint.table()[k], joints[0].table()[k], 1e-15);
    }
  }
}

TEST(ExactGenError, Examples) {
  EXPECT_NEAR(exact_gen_error(independent_problem()).gen, 0.0, 1e-15);
  const ExactGenResult mem = exact_gen_error(memorizing_problem());
  EXPECT_DOUBLE_EQ(mem.gen, 0.5);
  EXPECT_DOUBLE_EQ(mem.population_risks[0], 0.5);
  EXPECT_DOUBLE_EQ(mem.population_risks[1], 0.5);
}

TEST(ExactGenError, LinearInLossAndMatchesJointRoute) {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const ToyLearningProblem p = random_problem(rng);
    const ExactGenResult r = exact_gen_error(p);
    EXPECT_NEAR(r.gen, gen_from_joints(r.per_index_joints, p), 1e-12);

    nlohmann::json doc = p.to_json();
    for (auto& row : doc["loss"]) {
      for (auto& v : row) v = 3.0 * v.get<double>();
    }
    doc["loss_max"] = 3.0;
    EXPECT_NEAR(exact_gen_error(ToyLearningProblem::from_json(doc)).gen, 3.0 * r.gen, 1e-12);
  }
}

TEST(ExactGenError, InvariantUnderHypothesisRelabeling) {
  Rng rng(123);
  for (int trial = 0; trial < 100; ++trial) {
    const ToyLearningProblem p = random_problem(rng, {3, 2, 4});
    nlohmann::json doc = p.to_json();
    // reverse the hypothesis alphabet
    for (auto& row : doc["kernel"]) {
      std::vector<double> v = row.get<std::vector<double>>();
      std::reverse(v.begin(), v.end());
      row = v;
    }
    std::vector<std::vector<double>> loss = doc["loss"].get<std::vector<std::vector<double>>>();
    std::reverse(loss.begin(), loss.end());
    doc["loss"] = loss;
    EXPECT_NEAR(exact_gen_error(ToyLearningProblem::from_json(doc)).gen,
                exact_gen_error(p).gen, 1e-14);
  }
}

TEST(DvLowerBound, Examples) {
  const DiscretePmf alpha({0.2, 0.5, 0.3});
  const DiscretePmf beta({0.4, 0.4, 0.2});
  EXPECT_NEAR(dv_lower_bound(alpha, beta, {1.7, 1.7, 1.7}), 0.0, 1e-15);
  std::vector<double> f(3);
  for (int i = 0; i < 3; ++i) f[i] = std::log(alpha[i] / beta[i]);
  EXPECT_NEAR(dv_lower_bound(alpha, beta, f), kl_discrete(alpha, beta), 1e-10);
  EXPECT_THROW(dv_lower_bound(alpha, beta, {1.0}), std::invalid_argument);
}

TEST(DvLowerBound, VariationalInequalityAndSupremum) {
  Rng rng(17);
  boost::random::uniform_real_distribution<double> uni(-3.0, 3.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t size = uniform_index(rng, 1, 8);
    const DiscretePmf alpha(sample_flat_dirichlet(rng, size));
    const DiscretePmf beta(sample_flat_dirichlet(rng, size));
    const double kl = kl_discrete(alpha, beta);
    std::vector<double> f(size);
    for (double& v : f) v = uni(rng);
    EXPECT_LE(dv_lower_bound(alpha, beta, f), kl + 1e-12);
    for (std::size_t i = 0; i < size; ++i) f[i] = std::log(alpha[i] / beta[i]);
    EXPECT_NEAR(dv_lower_bound(alpha, beta, f), kl, 1e-10);
  }
}

TEST(AuxiliaryTerms, CanonicalChoices) {
  const DiscreteJoint joint(2, 2, {0.4, 0.1, 0.2, 0.3});
  const std::vector<DiscreteJoint> joints{joint};
  const BoundInputs product = auxiliary_terms(joints, Auxiliary::product);
  EXPECT_EQ(product.a_terms[0], 0.0);
  EXPECT_NEAR(product.b_terms[0], mutual_information(joint), 1e-15);
  const BoundInputs self = auxiliary_terms(joints, Auxiliary::joint);
  EXPECT_NEAR(self.a_terms[0], lautum_information(joint), 1e-15);
  EXPECT_EQ(self.b_terms[0], 0.0);
  const BoundInputs mix = auxiliary_terms(joints, Auxiliary::mixture);
  EXPECT_NEAR(mix.a_terms[0] + mix.b_terms[0], 2.0 * js_information(joint), 1e-15);
}

TEST(CertifyBounds, IndependentProblem) {
  const CertificationReport r = certify_bounds(independent_problem());
  EXPECT_TRUE(r.ok());
  EXPECT_NEAR(r.gen, 0.0, 1e-15);
  EXPECT_NEAR(r.mi.value, 0.0, 1e-7);
  EXPECT_NEAR(r.js.value, 0.0, 1e-7);
  EXPECT_NEAR(r.lautum.value, 0.0, 1e-7);
  EXPECT_NEAR(r.theorem2_mixture.value, 0.0, 1e-7);
}

TEST(CertifyBounds, MemorizingProblem) {
  const CertificationReport r = certify_bounds(memorizing_problem());
  EXPECT_TRUE(r.ok());
  EXPECT_DOUBLE_EQ(r.sigma, 0.5);
  EXPECT_DOUBLE_EQ(r.gen, 0.5);
  EXPECT_NEAR(r.mi.value, 0.5887, 1e-4);
  EXPECT_NEAR(r.js.value, 0.6570, 1e-4);
  EXPECT_FALSE(r.lautum.finite);
  EXPECT_FALSE(r.theorem2_joint.finite);
  EXPECT_NEAR(r.theorem2_mixture.value, r.js.value, 1e-12);
}

TEST(CertifyBounds, RandomProblemsAreSound) {
  int checked = 0;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    Rng rng(derive_seed(42, "certify", k));
    const ToyLearningProblem p = random_problem(rng);
    const CertificationReport r = certify_bounds(p);
    ASSERT_TRUE(r.ok()) << p.to_json().dump();
    const double magnitude = std::abs(r.gen);
    EXPECT_LE(magnitude, r.mi.value + 1e-12);
    EXPECT_LE(magnitude, r.js.value + 1e-12);
    EXPECT_LE(magnitude, r.theorem2_product.value + 1e-12);
    EXPECT_LE(magnitude, r.theorem2_mixture.value + 1e-12);
    ++checked;
  }
  EXPECT_EQ(checked, 1000);
}

TEST(AuditInequalities, DegenerateAndLargeAlphabets) {
  const InequalityAudit single = audit_inequalities(DiscreteJoint(1, 1, {1.0}));
  EXPECT_TRUE(single.ok());
  EXPECT_EQ(single.mi, 0.0);
  EXPECT_EQ(single.js, 0.0);
  EXPECT_EQ(single.tv, 0.0);

  // Uniform diagonal on k symbols: I = log k, above the threshold for k >= 47.
  for (std::size_t k : {47u, 64u, 128u}) {
    std::vector<double> table(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i) table[i * k + i] = 1.0 / static_cast<double>(k);
    const InequalityAudit a = audit_inequalities(DiscreteJoint(k, k, table));
    EXPECT_TRUE(js_dominance_condition(a.mi));
    EXPECT_TRUE(a.ok());
    EXPECT_LE(4.0 * a.js, a.mi);
  }
}

}  // namespace
}  // namespace genbound
