#include "rrtcut/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rrtcut {

namespace {

void check_window(Vertex n, double epsilon, const RootDegreeWindow& window) {
  if (n < 2) {
    throw std::invalid_argument("coupling: n must be at least 2");
  }
  const auto smallest = static_cast<std::uint64_t>(std::max(0.0, std::floor(window.lower)) + 1);
  if (smallest > n - 1 || !window.contains(smallest)) {
    throw std::invalid_argument("coupling: window ((1-eps) ln n, (1+eps) ln n) for n=" +
                                std::to_string(n) + ", eps=" + std::to_string(epsilon) +
                                " contains no admissible root degree");
  }
}

} // namespace

RootDegreeWindow root_degree_window(Vertex n, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("coupling: epsilon must lie in (0, 1)");
  }
  const double ln_n = std::log(static_cast<double>(n));
  return {(1.0 - epsilon) * ln_n, (1.0 + epsilon) * ln_n};
}

RootIndicators draw_root_indicators(Vertex n, RngStream& rng) {
  RootIndicators out;
  out.b.assign(n + 1, 0);
  for (Vertex i = 2; i <= n; ++i) {
    const bool hit = rng.bernoulli(1.0 / static_cast<double>(i - 1));
    out.b[i] = hit;
    out.sum += hit;
  }
  return out;
}

RootIndicators sample_conditioned_bernoulli(Vertex n, double epsilon, RngStream& rng,
                                            std::uint64_t max_attempts) {
  const RootDegreeWindow window = root_degree_window(n, epsilon);
  check_window(n, epsilon, window);
  for (std::uint64_t attempt = 1; attempt <= max_attempts; ++attempt) {
    RootIndicators draw = draw_root_indicators(n, rng);
    if (window.contains(draw.sum)) {
      draw.attempts = attempt;
      return draw;
    }
  }
  throw ResourceError("sample_conditioned_bernoulli: no acceptance within " +
                      std::to_string(max_attempts) + " attempts");
}

AcceptanceEstimate estimate_acceptance_rate(Vertex n, double epsilon, std::uint64_t attempts,
                                            RngStream& rng) {
  const RootDegreeWindow window = root_degree_window(n, epsilon);
  check_window(n, epsilon, window);
  AcceptanceEstimate out;
  out.attempts = attempts;
  for (std::uint64_t a = 0; a < attempts; ++a) {
    out.accepted += window.contains(draw_root_indicators(n, rng).sum);
  }
  if (attempts > 0) {
    const double p = static_cast<double>(out.accepted) / static_cast<double>(attempts);
    out.rate = p;
    out.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(attempts));
  }
  return out;
}

RecursiveTree assemble_tree(std::span<const std::uint8_t> b, std::span<const Vertex> y) {
  if (b.size() != y.size() || b.size() < 2) {
    throw std::invalid_argument("assemble_tree: b and y must both have n + 1 entries");
  }
  std::vector<Vertex> parents(b.size(), 0);
  for (std::size_t i = 2; i < b.size(); ++i) {
    parents[i] = b[i] ? kRoot : y[i];
  }
  return RecursiveTree::from_parents(std::move(parents));
}

CoupledSample build_coupled_pair(Vertex n, double epsilon, RngStream& rng,
                                 std::uint64_t max_attempts) {
  RngStream b_rng = rng.substream(kBernoulliStream);
  RngStream cond_rng = rng.substream(kConditionedStream);
  RngStream y_rng = rng.substream(kAttachStream);

  RootIndicators cond = sample_conditioned_bernoulli(n, epsilon, cond_rng, max_attempts);
  RootIndicators plain = draw_root_indicators(n, b_rng);

  std::vector<Vertex> y(n + 1, 0);
  if (n >= 2) {
    y[2] = 1;
  }
  for (Vertex i = 3; i <= n; ++i) {
    y[i] = static_cast<Vertex>(y_rng.uniform_int(2, i - 1));
  }

  CoupledSample out;
  out.n = n;
  out.epsilon = epsilon;
  out.tree = assemble_tree(plain.b, y);
  out.tree_cond = assemble_tree(cond.b, y);
  out.d = out.tree.root_degree();
  out.d_cond = out.tree_cond.root_degree();
  out.attempts = cond.attempts;
  out.b = std::move(plain.b);
  out.b_cond = std::move(cond.b);
  out.y = std::move(y);
  return out;
}

namespace {

struct SharedCounts {
  std::uint64_t sym_diff = 0;
  std::uint64_t differing = 0;
};

SharedCounts shared_counts(const CoupledSample& sample) {
  SharedCounts out;
  for (Vertex i = 2; i <= sample.n; ++i) {
    out.sym_diff += sample.b[i] != sample.b_cond[i];
    out.differing += sample.tree.degree(i) != sample.tree_cond.degree(i);
  }
  return out;
}

WdDiagnostic make_diagnostic(std::uint64_t d, std::uint64_t z, std::uint64_t z_cond,
                             const SharedCounts& shared) {
  WdDiagnostic out;
  out.d = d;
  out.z_d = z;
  out.z_d_cond = z_cond;
  out.w = (1.0 + static_cast<double>(z_cond)) / (1.0 + static_cast<double>(z));
  out.sym_diff_root_children = shared.sym_diff;
  out.differing_degree_count = shared.differing;
  return out;
}

} // namespace

WdDiagnostic coupling_diagnostics(const CoupledSample& sample, std::uint64_t d) {
  const SharedCounts shared = shared_counts(sample);
  std::uint64_t z = 0;
  std::uint64_t z_cond = 0;
  for (Vertex v = 1; v <= sample.n; ++v) {
    z += sample.tree.degree(v) >= d;
    z_cond += sample.tree_cond.degree(v) >= d;
  }
  return make_diagnostic(d, z, z_cond, shared);
}

std::vector<WdDiagnostic> coupling_profile(const CoupledSample& sample) {
  const SharedCounts shared = shared_counts(sample);
  const TailCounts tail = degree_tail(sample.tree);
  const TailCounts tail_cond = degree_tail(sample.tree_cond);
  const std::uint64_t top = std::max(tail.max_degree, tail_cond.max_degree);
  std::vector<WdDiagnostic> out;
  out.reserve(top + 1);
  for (std::uint64_t d = 0; d <= top; ++d) {
    out.push_back(make_diagnostic(d, tail.z(d), tail_cond.z(d), shared));
  }
  return out;
}

} // namespace rrtcut
