#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "rrtcut/rng.hpp"
#include "rrtcut/tree.hpp"

namespace rrtcut {

/// Raised when a sampler exhausts its attempt budget.
class ResourceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Open window ((1 - eps) ln n, (1 + eps) ln n) for the root degree.
struct RootDegreeWindow {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(std::uint64_t k) const {
    const auto x = static_cast<double>(k);
    return x > lower && x < upper;
  }
};

RootDegreeWindow root_degree_window(Vertex n, double epsilon);

/// Root-attachment indicators B_i, stored 1-indexed: b[i] for i in [2, n],
/// slots 0 and 1 unused.
struct RootIndicators {
  std::vector<std::uint8_t> b;
  std::uint64_t sum = 0;
  /// Number of unconditioned draws consumed (1 for an unconditioned sample).
  std::uint64_t attempts = 1;
};

/// Independent B_i ~ Bernoulli(1/(i-1)), i = 2..n.
RootIndicators draw_root_indicators(Vertex n, RngStream& rng);

inline constexpr std::uint64_t kDefaultAttemptBudget = 1'000'000;

/// B conditioned on sum(B) lying in the open root-degree window, by rejection.
///
/// Throws std::invalid_argument if n < 2, epsilon is outside (0, 1), or the
/// window holds no integer of [1, n-1]; throws ResourceError once
/// `max_attempts` draws are rejected.
RootIndicators sample_conditioned_bernoulli(Vertex n, double epsilon, RngStream& rng,
                                            std::uint64_t max_attempts = kDefaultAttemptBudget);

struct AcceptanceEstimate {
  std::uint64_t attempts = 0;
  std::uint64_t accepted = 0;
  double rate = 0.0;
  double std_error = 0.0;
};

/// Fraction of `attempts` unconditioned draws that the rejection sampler would
/// accept, using the same draw routine.
AcceptanceEstimate estimate_acceptance_rate(Vertex n, double epsilon, std::uint64_t attempts,
                                            RngStream& rng);

/// Two-step tree assembly: vertex i hangs from the root if b[i] == 1 and from
/// y[i] otherwise. Both spans are 1-indexed with n + 1 entries.
RecursiveTree assemble_tree(std::span<const std::uint8_t> b, std::span<const Vertex> y);

/// A tree and its root-degree-conditioned counterpart built from one shared
/// choice vector y. B and B_cond are drawn independently of each other (the
/// "independent resample" coupling); y is independent of both.
struct CoupledSample {
  Vertex n = 0;
  double epsilon = 0.0;
  std::vector<std::uint8_t> b;
  std::vector<std::uint8_t> b_cond;
  std::vector<Vertex> y; // y[2] = 1, y[i] uniform on [2, i-1] for i >= 3
  RecursiveTree tree;
  RecursiveTree tree_cond;
  std::uint32_t d = 0;
  std::uint32_t d_cond = 0;
  std::uint64_t attempts = 0;
};

CoupledSample build_coupled_pair(Vertex n, double epsilon, RngStream& rng,
                                 std::uint64_t max_attempts = kDefaultAttemptBudget);

struct WdDiagnostic {
  std::uint64_t d = 0;
  /// (1 + Z_cond_{>=d}) / (1 + Z_{>=d})
  double w = 1.0;
  /// |C(1) symmetric-difference C_cond(1)|
  std::uint64_t sym_diff_root_children = 0;
  /// |{i >= 2 : degree differs between the two trees}|
  std::uint64_t differing_degree_count = 0;
  std::uint64_t z_d = 0;
  std::uint64_t z_d_cond = 0;
};

WdDiagnostic coupling_diagnostics(const CoupledSample& sample, std::uint64_t d);

/// Diagnostics for every d in [0, max(max_degree, max_degree_cond)] in one pass.
std::vector<WdDiagnostic> coupling_profile(const CoupledSample& sample);

} // namespace rrtcut
