#include "rrtcut/coupling.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "rrtcut/replicate.hpp"
#include "rrtcut/stats.hpp"

namespace rrtcut {
namespace {

void expect_coupling_invariants(const CoupledSample& s) {
  const auto window = root_degree_window(s.n, s.epsilon);
  EXPECT_TRUE(window.contains(s.d_cond));
  EXPECT_EQ(s.d, s.tree.root_degree());
  EXPECT_EQ(s.d_cond, s.tree_cond.root_degree());
  for (Vertex i = 2; i <= s.n; ++i) {
    if (s.b[i] == s.b_cond[i]) {
      ASSERT_EQ(s.tree.parent(i), s.tree_cond.parent(i)) << "i=" << i;
    }
  }
  const auto profile = coupling_profile(s);
  ASSERT_FALSE(profile.empty());
  EXPECT_EQ(profile.size(),
            1u + std::max(s.tree.max_degree(), s.tree_cond.max_degree()));
  EXPECT_DOUBLE_EQ(profile[0].w, 1.0);
  const double n = static_cast<double>(s.n);
  for (const auto& diag : profile) {
    EXPECT_LE(diag.differing_degree_count, diag.sym_diff_root_children);
    const auto gap = diag.z_d > diag.z_d_cond ? diag.z_d - diag.z_d_cond : diag.z_d_cond - diag.z_d;
    EXPECT_LE(gap, 1 + diag.sym_diff_root_children);
    EXPECT_GE(diag.w, 1.0 / n);
    EXPECT_LE(diag.w, n);
    const auto single = coupling_diagnostics(s, diag.d);
    EXPECT_EQ(single.z_d, diag.z_d);
    EXPECT_EQ(single.z_d_cond, diag.z_d_cond);
    EXPECT_EQ(single.differing_degree_count, diag.differing_degree_count);
    EXPECT_DOUBLE_EQ(single.w, diag.w);
  }
}

TEST(RootDegreeWindow, Bounds) {
  const auto w = root_degree_window(10000, 0.5);
  EXPECT_NEAR(w.lower, 0.5 * std::log(10000.0), 1e-12);
  EXPECT_NEAR(w.upper, 1.5 * std::log(10000.0), 1e-12);
  EXPECT_TRUE(w.contains(5));
  EXPECT_TRUE(w.contains(13));
  EXPECT_FALSE(w.contains(4));
  EXPECT_FALSE(w.contains(14));
  EXPECT_THROW(root_degree_window(100, 0.0), std::invalid_argument);
  EXPECT_THROW(root_degree_window(100, 1.0), std::invalid_argument);
  EXPECT_THROW(root_degree_window(100, 1.5), std::invalid_argument);
}

TEST(RootIndicators, SecondIndicatorIsAlwaysOne) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    RngStream rng(s, 0);
    const auto b = draw_root_indicators(20, rng);
    ASSERT_EQ(b.b.size(), 21u);
    EXPECT_EQ(b.b[2], 1);
    std::uint64_t sum = 0;
    for (Vertex i = 2; i <= 20; ++i) {
      sum += b.b[i];
    }
    EXPECT_EQ(sum, b.sum);
  }
}

TEST(ConditionedSampler, AcceptedSumsLieInWindow) {
  RngStream rng(4, 0);
  const auto window = root_degree_window(10000, 0.3);
  for (int i = 0; i < 200; ++i) {
    const auto b = sample_conditioned_bernoulli(10000, 0.3, rng);
    EXPECT_TRUE(window.contains(b.sum));
    EXPECT_GE(b.attempts, 1u);
  }
}

TEST(ConditionedSampler, EmptyWindowIsRejected) {
  RngStream rng(1, 0);
  EXPECT_THROW(sample_conditioned_bernoulli(10, 0.05, rng), std::invalid_argument);
  EXPECT_THROW(sample_conditioned_bernoulli(1, 0.5, rng), std::invalid_argument);
}

TEST(ConditionedSampler, BudgetExhaustionIsAResourceError) {
  RngStream rng(1, 0);
  EXPECT_THROW(sample_conditioned_bernoulli(10000, 0.5, rng, 0), ResourceError);
}

TEST(ConditionedSampler, AcceptanceRateMatchesExactWindowProbability) {
  constexpr Vertex n = 10000;
  RngStream rng(8, 0);
  const auto est = estimate_acceptance_rate(n, 0.5, 10000, rng);
  const auto w = root_degree_window(n, 0.5);
  const double exact = root_degree_distribution_exact(n).probability_between(w.lower, w.upper);
  EXPECT_EQ(est.attempts, 10000u);
  EXPECT_NEAR(est.rate, exact, 3 * std::sqrt(exact * (1 - exact) / 10000));
}

TEST(ConditionedSampler, ConditionalLawMatchesExact) {
  // n = 100, eps = 0.5: window (2.30, 6.91) keeps D in {3, ..., 6}.
  constexpr Vertex n = 100;
  constexpr int kReps = 20000;
  const auto pmf = root_degree_distribution_exact(n);
  const auto w = root_degree_window(n, 0.5);
  const double mass = pmf.probability_between(w.lower, w.upper);
  std::vector<int> hits(n, 0);
  RngStream rng(31, 0);
  for (int r = 0; r < kReps; ++r) {
    ++hits[sample_conditioned_bernoulli(n, 0.5, rng).sum];
  }
  for (std::uint64_t k = 0; k < n; ++k) {
    const double p = w.contains(k) ? pmf.probability(k) / mass : 0.0;
    const double se = std::sqrt(p * (1 - p) / kReps);
    EXPECT_NEAR(static_cast<double>(hits[k]) / kReps, p, 3 * se + 1e-12) << "k=" << k;
  }
}

TEST(AssembleTree, HangsFromRootOrChoice) {
  const std::vector<std::uint8_t> b{0, 0, 1, 0, 1, 0};
  const std::vector<Vertex> y{0, 0, 1, 2, 2, 4};
  const auto t = assemble_tree(b, y);
  EXPECT_EQ(t.to_string(), "0 1 2 1 4");
  const std::vector<Vertex> short_y{0, 0, 1};
  EXPECT_THROW(assemble_tree(b, short_y), std::invalid_argument);
}

TEST(CoupledPair, SmallestSize) {
  RngStream rng(2, 0);
  const auto s = build_coupled_pair(2, 0.5, rng);
  EXPECT_EQ(s.tree.to_string(), "0 1");
  EXPECT_EQ(s.tree_cond.to_string(), "0 1");
  EXPECT_EQ(s.d, 1u);
  EXPECT_EQ(s.d_cond, 1u);
  const auto diag = coupling_diagnostics(s, 1);
  EXPECT_DOUBLE_EQ(diag.w, 1.0);
  EXPECT_EQ(diag.sym_diff_root_children, 0u);
}

TEST(CoupledPair, ChoiceVectorIsUniformBelow) {
  RngStream rng(3, 0);
  const auto s = build_coupled_pair(500, 0.5, rng);
  EXPECT_EQ(s.y[2], 1u);
  for (Vertex i = 3; i <= 500; ++i) {
    EXPECT_GE(s.y[i], 2u);
    EXPECT_LT(s.y[i], i);
  }
}

TEST(CoupledPair, InvariantsHold) {
  for (std::uint64_t r = 0; r < 300; ++r) {
    const Vertex n = static_cast<Vertex>(20 + r * 31);
    const double eps = 0.3 + 0.6 * static_cast<double>(r % 7) / 7.0;
    RngStream rng = replicate_stream(41, r);
    expect_coupling_invariants(build_coupled_pair(n, eps, rng));
  }
}

TEST(CoupledPair, IdenticalIndicatorsGiveUnitRatio) {
  RngStream rng(5, 0);
  auto s = build_coupled_pair(300, 0.5, rng);
  s.b_cond = s.b;
  s.tree_cond = s.tree;
  s.d_cond = s.d;
  for (const auto& diag : coupling_profile(s)) {
    EXPECT_DOUBLE_EQ(diag.w, 1.0);
    EXPECT_EQ(diag.sym_diff_root_children, 0u);
    EXPECT_EQ(diag.differing_degree_count, 0u);
  }
}

TEST(CoupledPair, UnconditionedTreeIsARecursiveTree) {
  // The two-step construction must reproduce the uniform attachment law:
  // compare the root degree histogram at n = 60 against the exact pmf.
  constexpr Vertex n = 60;
  constexpr int kReps = 20000;
  const auto pmf = root_degree_distribution_exact(n);
  std::vector<int> hits(n, 0);
  std::vector<int> third_vertex_parent(3, 0);
  for (int r = 0; r < kReps; ++r) {
    RngStream rng = replicate_stream(77, r);
    const auto s = build_coupled_pair(n, 0.5, rng);
    ++hits[s.d];
    ++third_vertex_parent[s.tree.parent(3)];
  }
  for (std::uint64_t k = 0; k < n; ++k) {
    const double p = pmf.probability(k);
    EXPECT_NEAR(static_cast<double>(hits[k]) / kReps, p, 3 * std::sqrt(p * (1 - p) / kReps) + 1e-12)
        << "k=" << k;
  }
  EXPECT_NEAR(third_vertex_parent[1] / double(kReps), 0.5, 3 * std::sqrt(0.25 / kReps));
}

} // namespace
} // namespace rrtcut
