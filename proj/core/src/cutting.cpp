#include "rrtcut/cutting.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace rrtcut {

std::string_view to_string(CutPolicy policy) {
  switch (policy) {
  case CutPolicy::Targeted:
    return "targeted";
  case CutPolicy::UniformEdge:
    return "uniform";
  case CutPolicy::Records:
    return "records";
  }
  return "unknown";
}

namespace {

/// Vertices with degree >= floor, grouped in blocks of decreasing degree.
/// Returns the block boundaries alongside the flattened vertex list.
struct DegreeBlocks {
  std::vector<Vertex> vertices;
  std::vector<std::size_t> starts; // block b is [starts[b], starts[b + 1])
};

DegreeBlocks blocks_at_least(const RecursiveTree& tree, std::uint32_t floor) {
  // Block j holds the vertices of degree top - j.
  const std::uint32_t top = tree.max_degree();
  const std::uint32_t block_count = top - floor + 1;
  std::vector<std::size_t> start(block_count + 1, 0);
  for (Vertex v = 1; v <= tree.size(); ++v) {
    if (tree.degree(v) >= floor) {
      ++start[top - tree.degree(v) + 1];
    }
  }
  std::partial_sum(start.begin(), start.end(), start.begin());
  DegreeBlocks out;
  out.vertices.resize(start.back());
  std::vector<std::size_t> cursor(start.begin(), start.end() - 1);
  for (Vertex v = 1; v <= tree.size(); ++v) {
    if (tree.degree(v) >= floor) {
      out.vertices[cursor[top - tree.degree(v)]++] = v;
    }
  }
  // Empty blocks collapse into their neighbours.
  start.erase(std::unique(start.begin(), start.end()), start.end());
  out.starts = std::move(start);
  return out;
}

bool attached_to_root(const RecursiveTree& tree, const std::vector<char>& removed, Vertex v) {
  for (; v != kRoot; v = tree.parent(v)) {
    if (removed[v]) {
      return false;
    }
  }
  return true;
}

std::uint64_t z_at_least(const RecursiveTree& tree, std::uint32_t d) {
  std::uint64_t z = 0;
  for (Vertex v = 1; v <= tree.size(); ++v) {
    z += tree.degree(v) >= d;
  }
  return z;
}

} // namespace

CutResult targeted_cut_in_order(const RecursiveTree& tree, std::span<const Vertex> order,
                                bool record_trace) {
  CutResult out;
  out.policy = CutPolicy::Targeted;
  out.n = tree.size();
  out.z_at_root_degree = z_at_least(tree, tree.root_degree());
  std::vector<char> removed(tree.size() + 1, 0);
  for (Vertex v : order) {
    if (v == kRoot) {
      return out;
    }
    if (!attached_to_root(tree, removed, v)) {
      continue;
    }
    removed[v] = 1;
    ++out.cuts;
    if (record_trace) {
      out.trace.push_back(v);
    }
  }
  throw std::invalid_argument("targeted_cut_in_order: order never reaches the root");
}

CutResult targeted_cut(const RecursiveTree& tree, RngStream& rng, bool record_trace) {
  DegreeBlocks blocks = blocks_at_least(tree, tree.root_degree());
  for (std::size_t b = 0; b + 1 < blocks.starts.size(); ++b) {
    auto first = blocks.vertices.begin() + static_cast<std::ptrdiff_t>(blocks.starts[b]);
    auto last = blocks.vertices.begin() + static_cast<std::ptrdiff_t>(blocks.starts[b + 1]);
    std::shuffle(first, last, rng.engine());
  }
  return targeted_cut_in_order(tree, blocks.vertices, record_trace);
}

double targeted_cut_exact_mean(Vertex n) {
  if (n == 1) {
    return 0.0;
  }
  const auto trees = enumerate_increasing_trees(n);
  double total = 0.0;
  for (const auto& tree : trees) {
    DegreeBlocks blocks = blocks_at_least(tree, tree.root_degree());
    for (std::size_t b = 0; b + 1 < blocks.starts.size(); ++b) {
      std::sort(blocks.vertices.begin() + static_cast<std::ptrdiff_t>(blocks.starts[b]),
                blocks.vertices.begin() + static_cast<std::ptrdiff_t>(blocks.starts[b + 1]));
    }
    // Walk the product of within-block permutations, odometer style.
    std::uint64_t orders = 0;
    std::uint64_t cut_sum = 0;
    const std::size_t block_count = blocks.starts.size() - 1;
    std::function<void(std::size_t)> visit = [&](std::size_t b) {
      if (b == block_count) {
        cut_sum += targeted_cut_in_order(tree, blocks.vertices).cuts;
        ++orders;
        return;
      }
      auto first = blocks.vertices.begin() + static_cast<std::ptrdiff_t>(blocks.starts[b]);
      auto last = blocks.vertices.begin() + static_cast<std::ptrdiff_t>(blocks.starts[b + 1]);
      do {
        visit(b + 1);
      } while (std::next_permutation(first, last));
    };
    visit(0);
    total += static_cast<double>(cut_sum) / static_cast<double>(orders);
  }
  return total / static_cast<double>(trees.size());
}

CutResult uniform_edge_cut(const RecursiveTree& tree, RngStream& rng, bool record_trace) {
  const Vertex n = tree.size();
  CutResult out;
  out.policy = CutPolicy::UniformEdge;
  out.n = n;
  if (n < 2) {
    return out;
  }

  // Children in CSR form.
  std::vector<Vertex> first_child(n + 2, 0);
  for (Vertex v = 1; v <= n; ++v) {
    first_child[v + 1] = first_child[v] + tree.degree(v);
  }
  std::vector<Vertex> child_list(n - 1);
  {
    std::vector<Vertex> fill(first_child.begin(), first_child.end() - 1);
    for (Vertex i = 2; i <= n; ++i) {
      child_list[fill[tree.parent(i)]++] = i;
    }
  }

  // Live non-root vertices; each one names the edge to its parent.
  std::vector<Vertex> live(n - 1);
  std::vector<Vertex> position(n + 1, 0);
  std::iota(live.begin(), live.end(), Vertex{2});
  for (Vertex i = 0; i + 1 < n; ++i) {
    position[live[i]] = i;
  }
  std::vector<char> dead(n + 1, 0);
  std::vector<Vertex> stack;

  auto drop = [&](Vertex u) {
    const Vertex at = position[u];
    const Vertex moved = live.back();
    live[at] = moved;
    position[moved] = at;
    live.pop_back();
    dead[u] = 1;
  };

  while (!live.empty()) {
    const Vertex v = live[rng.uniform_int(0, live.size() - 1)];
    ++out.cuts;
    if (record_trace) {
      out.trace.push_back(v);
    }
    stack.push_back(v);
    while (!stack.empty()) {
      const Vertex u = stack.back();
      stack.pop_back();
      drop(u);
      for (Vertex j = first_child[u]; j < first_child[u + 1]; ++j) {
        if (!dead[child_list[j]]) {
          stack.push_back(child_list[j]);
        }
      }
    }
  }
  return out;
}

CutResult record_count(const RecursiveTree& tree, RngStream& rng) {
  const Vertex n = tree.size();
  CutResult out;
  out.policy = CutPolicy::Records;
  out.n = n;
  if (n < 2) {
    return out;
  }
  // path_max[v]: largest label on the path from v up to the root.
  std::vector<double> path_max(n + 1, -1.0);
  for (Vertex v = 2; v <= n; ++v) {
    const double label = rng.uniform01();
    const double above = path_max[tree.parent(v)];
    if (label > above) {
      ++out.cuts;
      path_max[v] = label;
    } else {
      path_max[v] = above;
    }
  }
  return out;
}

YnValue y_statistic(std::uint64_t n, std::uint64_t cuts) {
  if (n < 3) {
    throw std::invalid_argument("y_statistic: n must be at least 3");
  }
  const double ln_n = std::log(static_cast<double>(n));
  return {ln_n * ln_n * static_cast<double>(cuts) / static_cast<double>(n) - ln_n -
          std::log(ln_n)};
}

} // namespace rrtcut
