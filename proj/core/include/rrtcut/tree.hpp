#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rrtcut/rng.hpp"

namespace rrtcut {

/// Vertex label. Labels are 1-based; vertex 1 is the root.
using Vertex = std::uint32_t;

inline constexpr Vertex kRoot = 1;

/// An increasing tree stored as a parent array with cached child counts.
///
/// parent(i) < i for every i >= 2 and parent(1) == 0 (sentinel). degree(v) is
/// the number of children of v, i.e. edges directed towards v.
class RecursiveTree {
public:
  /// The single-vertex tree.
  RecursiveTree() : n_(1), parent_{0, 0}, degree_{0, 0}, max_degree_(0) {}

  /// Builds a tree from a 1-indexed parent list of length n + 1. Entry 0 is
  /// ignored and entry 1 must be 0. Throws std::invalid_argument if the list
  /// does not describe an increasing tree.
  static RecursiveTree from_parents(std::vector<Vertex> parents);

  /// Parses the whitespace-separated form produced by to_string(),
  /// e.g. "0 1 1 2".
  static RecursiveTree parse(std::string_view text);

  Vertex size() const noexcept { return n_; }
  Vertex parent(Vertex v) const { return parent_[v]; }
  std::uint32_t degree(Vertex v) const { return degree_[v]; }
  std::uint32_t root_degree() const { return degree_[kRoot]; }
  std::uint32_t max_degree() const noexcept { return max_degree_; }

  /// Raw views including the unused slot 0.
  std::span<const Vertex> parents() const noexcept { return parent_; }
  std::span<const std::uint32_t> degrees() const noexcept { return degree_; }

  /// Children of v in increasing label order. O(n).
  std::vector<Vertex> children(Vertex v) const;

  /// "0 p2 p3 ... pn", root sentinel first.
  std::string to_string() const;

  friend bool operator==(const RecursiveTree& a, const RecursiveTree& b) {
    return a.parent_ == b.parent_;
  }

private:
  RecursiveTree(std::vector<Vertex> parents, std::vector<std::uint32_t> degrees,
                std::uint32_t max_degree)
      : n_(static_cast<Vertex>(parents.size() - 1)),
        parent_(std::move(parents)),
        degree_(std::move(degrees)),
        max_degree_(max_degree) {}

  Vertex n_;
  std::vector<Vertex> parent_;
  std::vector<std::uint32_t> degree_;
  std::uint32_t max_degree_;
};

/// Degree-tail statistics of one tree.
struct TailCounts {
  Vertex n = 0;
  std::uint32_t root_degree = 0;
  std::uint32_t max_degree = 0;
  /// at_least[d] = number of vertices with degree >= d, for d in [0, max_degree].
  std::vector<std::uint64_t> at_least;

  /// Z_{>=d} for any d; zero beyond max_degree.
  std::uint64_t z(std::uint64_t d) const {
    return d < at_least.size() ? at_least[d] : 0;
  }
  /// Number of vertices whose degree is at least the root degree.
  std::uint64_t z_at_root_degree() const { return z(root_degree); }
};

/// Samples a uniform random recursive tree on n vertices: vertex i attaches to
/// a uniform vertex of [1, i-1]. Throws std::invalid_argument if n == 0.
RecursiveTree generate_rrt(Vertex n, RngStream& rng);

TailCounts degree_tail(const RecursiveTree& tree);

/// Vertices whose path to the root avoids every vertex in `removed`, in
/// increasing order. Throws std::invalid_argument if the root is removed or a
/// label is out of range.
std::vector<Vertex> root_subtree_after_removal(const RecursiveTree& tree,
                                               std::span<const Vertex> removed);

/// Every increasing tree on n vertices, exactly once each ((n-1)! trees), in
/// lexicographic order of the parent list. Requires 2 <= n <= 8.
std::vector<RecursiveTree> enumerate_increasing_trees(Vertex n);

} // namespace rrtcut
