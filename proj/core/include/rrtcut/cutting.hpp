#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rrtcut/rng.hpp"
#include "rrtcut/tree.hpp"

namespace rrtcut {

enum class CutPolicy { Targeted, UniformEdge, Records };

std::string_view to_string(CutPolicy policy);

struct CutResult {
  CutPolicy policy = CutPolicy::Targeted;
  Vertex n = 0;
  std::uint64_t cuts = 0;
  /// Z_{>=D} of the initial tree. Set for Targeted only.
  std::optional<std::uint64_t> z_at_root_degree;
  /// Removed vertices in removal order (Targeted), or the child endpoint of
  /// each removed edge (UniformEdge). Empty unless requested.
  std::vector<Vertex> trace;
};

/// Targeted vertex cutting.
///
/// Vertices are ranked by decreasing degree in the initial tree, ties in a
/// uniform random order. They are visited in rank order: a vertex that is
/// still attached to the root is deleted together with its subtree and counts
/// as one cut, a detached vertex is skipped without counting, and the process
/// stops when the root comes up. Degrees are never recomputed.
///
/// Only the blocks with degree >= D are shuffled: the root is reached before
/// any vertex of smaller degree.
CutResult targeted_cut(const RecursiveTree& tree, RngStream& rng, bool record_trace = false);

/// Runs the targeted process along an explicit visiting order. `order` must
/// contain the root; entries after the root are ignored. The order is not
/// checked against degrees.
CutResult targeted_cut_in_order(const RecursiveTree& tree, std::span<const Vertex> order,
                                bool record_trace = false);

/// Exact E[cuts] of the targeted process averaged over all increasing trees of
/// size n and all tie-break orders. Requires 1 <= n <= 8.
double targeted_cut_exact_mean(Vertex n);

/// Classical cutting: repeatedly remove a uniform edge of the root component
/// and discard the part not containing the root. O(n) per run.
CutResult uniform_edge_cut(const RecursiveTree& tree, RngStream& rng, bool record_trace = false);

/// Number of records under i.i.d. uniform edge labels: an edge is a record when
/// its label exceeds every label on its path to the root. Equal in law to the
/// cut count of uniform_edge_cut. Trees with fewer than two vertices give 0.
CutResult record_count(const RecursiveTree& tree, RngStream& rng);

struct YnValue {
  double value = 0.0;
};

/// (ln n)^2 * cuts / n - ln n - ln ln n. Throws std::invalid_argument if n < 3.
YnValue y_statistic(std::uint64_t n, std::uint64_t cuts);

} // namespace rrtcut
