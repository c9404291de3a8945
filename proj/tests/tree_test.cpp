#include "rrtcut/tree.hpp"

#include <cmath>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rrtcut/replicate.hpp"

namespace rrtcut {
namespace {

RecursiveTree path3() { return RecursiveTree::parse("0 1 2"); }

RecursiveTree star(Vertex n) {
  std::vector<Vertex> parents(n + 1, 1);
  parents[0] = 0;
  parents[1] = 0;
  return RecursiveTree::from_parents(parents);
}

void expect_valid(const RecursiveTree& t) {
  std::uint64_t degree_sum = 0;
  std::vector<std::uint32_t> counted(t.size() + 1, 0);
  for (Vertex i = 2; i <= t.size(); ++i) {
    ASSERT_GE(t.parent(i), 1u);
    ASSERT_LT(t.parent(i), i);
    ++counted[t.parent(i)];
  }
  for (Vertex v = 1; v <= t.size(); ++v) {
    ASSERT_EQ(t.degree(v), counted[v]);
    degree_sum += t.degree(v);
  }
  EXPECT_EQ(degree_sum, t.size() - 1u);
}

TEST(GenerateRrt, SingleVertex) {
  RngStream rng(1, 0);
  const auto t = generate_rrt(1, rng);
  EXPECT_EQ(t.size(), 1u);
  EXPECT_EQ(t.degree(1), 0u);
  EXPECT_EQ(t.max_degree(), 0u);
}

TEST(GenerateRrt, TwoVerticesForced) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    RngStream rng(s, 0);
    const auto t = generate_rrt(2, rng);
    EXPECT_EQ(t.parent(2), 1u);
    EXPECT_EQ(t.degree(1), 1u);
  }
}

TEST(GenerateRrt, ZeroIsRejected) {
  RngStream rng(1, 0);
  EXPECT_THROW(generate_rrt(0, rng), std::invalid_argument);
}

TEST(GenerateRrt, ThirdVertexAttachesToRootHalfTheTime) {
  constexpr int kReps = 100000;
  int hits = 0;
  for (int r = 0; r < kReps; ++r) {
    hits += replicate_tree(3, 11, r).parent(3) == 1;
  }
  const double p = static_cast<double>(hits) / kReps;
  EXPECT_NEAR(p, 0.5, 3 * std::sqrt(0.25 / kReps));
}

TEST(GenerateRrt, InvariantsHoldOnRandomSizes) {
  RngStream sizes(99, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<Vertex>(sizes.uniform_int(1, 3000));
    RngStream rng(99, 1 + trial);
    expect_valid(generate_rrt(n, rng));
  }
}

TEST(GenerateRrt, MatchesUniformLawOnIncreasingTrees) {
  // n = 5: 24 equally likely trees.
  constexpr int kReps = 100000;
  const auto trees = oracle::all_parent_lists(5);
  std::map<std::vector<Vertex>, int> counts;
  for (int r = 0; r < kReps; ++r) {
    const auto t = replicate_tree(5, 21, r);
    ++counts[std::vector<Vertex>(t.parents().begin(), t.parents().end())];
  }
  ASSERT_EQ(counts.size(), trees.size());
  const double p = 1.0 / 24.0;
  const double se = std::sqrt(p * (1 - p) / kReps);
  for (const auto& [parents, c] : counts) {
    EXPECT_NEAR(static_cast<double>(c) / kReps, p, 3 * se);
  }
}

TEST(RecursiveTree, RejectsNonIncreasingParents) {
  EXPECT_THROW(RecursiveTree::parse("0 1 3"), std::invalid_argument);
  EXPECT_THROW(RecursiveTree::parse("0 0"), std::invalid_argument);
  EXPECT_THROW(RecursiveTree::parse("1 1"), std::invalid_argument);
  EXPECT_THROW(RecursiveTree::parse(""), std::invalid_argument);
  EXPECT_THROW(RecursiveTree::parse("0 x"), std::invalid_argument);
}

TEST(RecursiveTree, TextRoundTrip) {
  for (std::uint64_t r = 0; r < 50; ++r) {
    const auto t = replicate_tree(static_cast<Vertex>(1 + r * 7), 5, r);
    EXPECT_EQ(RecursiveTree::parse(t.to_string()), t);
  }
  EXPECT_EQ(path3().to_string(), "0 1 2");
}

TEST(RecursiveTree, Children) {
  const auto t = RecursiveTree::parse("0 1 1 2 1");
  EXPECT_EQ(t.children(1), (std::vector<Vertex>{2, 3, 5}));
  EXPECT_EQ(t.children(2), (std::vector<Vertex>{4}));
  EXPECT_TRUE(t.children(4).empty());
}

TEST(DegreeTail, PathTree) {
  const auto tail = degree_tail(path3());
  EXPECT_EQ(tail.z(0), 3u);
  EXPECT_EQ(tail.z(1), 2u);
  EXPECT_EQ(tail.z(2), 0u);
  EXPECT_EQ(tail.root_degree, 1u);
  EXPECT_EQ(tail.max_degree, 1u);
}

TEST(DegreeTail, StarTree) {
  const Vertex n = 9;
  const auto tail = degree_tail(star(n));
  EXPECT_EQ(tail.root_degree, n - 1);
  EXPECT_EQ(tail.z(1), 1u);
  EXPECT_EQ(tail.z(n - 1), 1u);
  EXPECT_EQ(tail.z(n), 0u);
  EXPECT_EQ(tail.z_at_root_degree(), 1u);
}

TEST(DegreeTail, MonotoneAndAnchored) {
  for (std::uint64_t r = 0; r < 100; ++r) {
    const Vertex n = static_cast<Vertex>(2 + r * 37);
    const auto tail = degree_tail(replicate_tree(n, 8, r));
    EXPECT_EQ(tail.z(0), n);
    EXPECT_EQ(tail.z(tail.max_degree + 1), 0u);
    EXPECT_GE(tail.z(tail.max_degree), 1u);
    for (std::uint64_t d = 0; d <= tail.max_degree; ++d) {
      EXPECT_LE(tail.z(d + 1), tail.z(d));
    }
  }
}

TEST(DegreeTail, MeanBoundedByHalvingLaw) {
  // E[Z_{>=d}] <= n / 2^d.
  constexpr Vertex n = 1 << 10;
  constexpr int kReps = 10000;
  std::vector<double> sum(20, 0.0);
  std::vector<double> sum_sq(20, 0.0);
  for (int r = 0; r < kReps; ++r) {
    const auto tail = degree_tail(replicate_tree(n, 4, r));
    for (std::size_t d = 0; d < sum.size(); ++d) {
      const auto z = static_cast<double>(tail.z(d));
      sum[d] += z;
      sum_sq[d] += z * z;
    }
  }
  for (std::size_t d = 0; d < sum.size(); ++d) {
    const double mean = sum[d] / kReps;
    const double var = sum_sq[d] / kReps - mean * mean;
    const double se = std::sqrt(std::max(var, 0.0) / kReps);
    EXPECT_LE(mean, std::ldexp(double(n), -static_cast<int>(d)) + 3 * se) << "d=" << d;
  }
}

TEST(RootSubtree, Examples) {
  const std::vector<Vertex> two{2};
  EXPECT_EQ(root_subtree_after_removal(path3(), two), (std::vector<Vertex>{1}));
  const std::vector<Vertex> three{3};
  EXPECT_EQ(root_subtree_after_removal(star(4), three), (std::vector<Vertex>{1, 2, 4}));
  EXPECT_EQ(root_subtree_after_removal(star(4), {}), (std::vector<Vertex>{1, 2, 3, 4}));
}

TEST(RootSubtree, Errors) {
  const std::vector<Vertex> root{1};
  EXPECT_THROW(root_subtree_after_removal(path3(), root), std::invalid_argument);
  const std::vector<Vertex> out_of_range{4};
  EXPECT_THROW(root_subtree_after_removal(path3(), out_of_range), std::invalid_argument);
}

TEST(RootSubtree, AgreesWithPathWalk) {
  RngStream pick(17, 0);
  for (std::uint64_t r = 0; r < 200; ++r) {
    const Vertex n = static_cast<Vertex>(2 + r % 60);
    const auto t = replicate_tree(n, 17, r);
    std::set<Vertex> removed;
    std::vector<Vertex> removed_list;
    const auto k = pick.uniform_int(0, n / 3);
    for (std::uint64_t j = 0; j < k; ++j) {
      const auto v = static_cast<Vertex>(pick.uniform_int(2, n));
      if (removed.insert(v).second) {
        removed_list.push_back(v);
      }
    }
    oracle::ParentList parents(t.parents().begin(), t.parents().end());
    const auto expected = oracle::naive_root_component(parents, removed);
    const auto got = root_subtree_after_removal(t, removed_list);
    EXPECT_EQ(std::set<Vertex>(got.begin(), got.end()), expected);
  }
}

TEST(EnumerateIncreasingTrees, CountsAreFactorials) {
  std::uint64_t factorial = 1;
  for (Vertex n = 2; n <= 8; ++n) {
    factorial *= n - 1;
    const auto trees = enumerate_increasing_trees(n);
    EXPECT_EQ(trees.size(), factorial) << "n=" << n;
    std::set<std::string> distinct;
    for (const auto& t : trees) {
      distinct.insert(t.to_string());
    }
    EXPECT_EQ(distinct.size(), trees.size());
  }
  EXPECT_EQ(enumerate_increasing_trees(2).size(), 1u);
  EXPECT_EQ(enumerate_increasing_trees(4).size(), 6u);
}

TEST(EnumerateIncreasingTrees, SameSetAsRecursiveOracle) {
  for (Vertex n = 2; n <= 7; ++n) {
    std::set<std::vector<Vertex>> ours;
    for (const auto& t : enumerate_increasing_trees(n)) {
      ours.emplace(t.parents().begin(), t.parents().end());
    }
    const auto reference = oracle::all_parent_lists(n);
    EXPECT_EQ(ours, std::set<std::vector<Vertex>>(reference.begin(), reference.end()));
  }
}

TEST(EnumerateIncreasingTrees, RootDegreeMeanIsHarmonic) {
  for (Vertex n = 2; n <= 8; ++n) {
    double mean = 0.0;
    const auto trees = enumerate_increasing_trees(n);
    for (const auto& t : trees) {
      mean += t.root_degree();
    }
    mean /= static_cast<double>(trees.size());
    EXPECT_NEAR(mean, oracle::harmonic(n - 1), 1e-12);
  }
  // n = 3 by hand: star (D=2) and path (D=1).
  double mean3 = 0.0;
  for (const auto& t : enumerate_increasing_trees(3)) {
    mean3 += t.root_degree() / 2.0;
  }
  EXPECT_DOUBLE_EQ(mean3, 1.5);
}

TEST(EnumerateIncreasingTrees, RangeChecked) {
  EXPECT_THROW(enumerate_increasing_trees(1), std::invalid_argument);
  EXPECT_THROW(enumerate_increasing_trees(9), std::invalid_argument);
}

} // namespace
} // namespace rrtcut
