#include "rrtcut/tree.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace rrtcut {

RecursiveTree RecursiveTree::from_parents(std::vector<Vertex> parents) {
  if (parents.size() < 2) {
    throw std::invalid_argument("parent list must describe at least one vertex");
  }
  if (parents[1] != 0) {
    throw std::invalid_argument("root must carry the sentinel parent 0");
  }
  parents[0] = 0;
  const auto n = static_cast<Vertex>(parents.size() - 1);
  std::vector<std::uint32_t> degrees(n + 1, 0);
  std::uint32_t max_degree = 0;
  for (Vertex i = 2; i <= n; ++i) {
    const Vertex p = parents[i];
    if (p < 1 || p >= i) {
      throw std::invalid_argument("parent of vertex " + std::to_string(i) +
                                  " must lie in [1, " + std::to_string(i - 1) + "]");
    }
    max_degree = std::max(max_degree, ++degrees[p]);
  }
  return RecursiveTree(std::move(parents), std::move(degrees), max_degree);
}

RecursiveTree RecursiveTree::parse(std::string_view text) {
  std::vector<Vertex> parents{0};
  const char* it = text.data();
  const char* end = text.data() + text.size();
  while (it != end) {
    if (*it == ' ' || *it == '\t' || *it == '\n' || *it == '\r') {
      ++it;
      continue;
    }
    Vertex value = 0;
    auto [next, ec] = std::from_chars(it, end, value);
    if (ec != std::errc{}) {
      throw std::invalid_argument("malformed parent list");
    }
    parents.push_back(value);
    it = next;
  }
  return from_parents(std::move(parents));
}

std::vector<Vertex> RecursiveTree::children(Vertex v) const {
  std::vector<Vertex> out;
  out.reserve(degree_[v]);
  for (Vertex i = v + 1; i <= n_; ++i) {
    if (parent_[i] == v) {
      out.push_back(i);
    }
  }
  return out;
}

std::string RecursiveTree::to_string() const {
  std::string out;
  for (Vertex i = 1; i <= n_; ++i) {
    if (i > 1) {
      out.push_back(' ');
    }
    out += std::to_string(parent_[i]);
  }
  return out;
}

RecursiveTree generate_rrt(Vertex n, RngStream& rng) {
  if (n == 0) {
    throw std::invalid_argument("generate_rrt: n must be positive");
  }
  std::vector<Vertex> parents(n + 1, 0);
  for (Vertex i = 2; i <= n; ++i) {
    parents[i] = static_cast<Vertex>(rng.uniform_int(1, i - 1));
  }
  return RecursiveTree::from_parents(std::move(parents));
}

TailCounts degree_tail(const RecursiveTree& tree) {
  TailCounts out;
  out.n = tree.size();
  out.root_degree = tree.root_degree();
  out.max_degree = tree.max_degree();
  out.at_least.assign(out.max_degree + 1, 0);
  const auto degrees = tree.degrees();
  for (Vertex v = 1; v <= tree.size(); ++v) {
    ++out.at_least[degrees[v]];
  }
  for (std::size_t d = out.at_least.size() - 1; d > 0; --d) {
    out.at_least[d - 1] += out.at_least[d];
  }
  return out;
}

std::vector<Vertex> root_subtree_after_removal(const RecursiveTree& tree,
                                               std::span<const Vertex> removed) {
  const Vertex n = tree.size();
  std::vector<char> alive(n + 1, 1);
  for (Vertex v : removed) {
    if (v == kRoot) {
      throw std::invalid_argument("the root cannot be removed");
    }
    if (v < 1 || v > n) {
      throw std::invalid_argument("removed vertex " + std::to_string(v) + " out of range");
    }
    alive[v] = 0;
  }
  std::vector<Vertex> out{kRoot};
  // Parents precede children, so one increasing sweep settles every vertex.
  for (Vertex v = 2; v <= n; ++v) {
    alive[v] = alive[v] && alive[tree.parent(v)];
    if (alive[v]) {
      out.push_back(v);
    }
  }
  return out;
}

std::vector<RecursiveTree> enumerate_increasing_trees(Vertex n) {
  if (n < 2 || n > 8) {
    throw std::invalid_argument("enumerate_increasing_trees: n must lie in [2, 8]");
  }
  std::vector<RecursiveTree> out;
  std::vector<Vertex> parents(n + 1, 1);
  parents[0] = 0;
  parents[1] = 0;
  // Odometer over parent[i] in [1, i-1], last digit fastest.
  while (true) {
    out.push_back(RecursiveTree::from_parents(parents));
    Vertex i = n;
    while (i >= 2 && parents[i] == i - 1) {
      parents[i] = 1;
      --i;
    }
    if (i < 2) {
      break;
    }
    ++parents[i];
  }
  return out;
}

} // namespace rrtcut
