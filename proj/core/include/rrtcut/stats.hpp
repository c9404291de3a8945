#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rrtcut/tree.hpp"

namespace rrtcut {

/// 1 - ln 2, the growth exponent of Z_{>=D}.
inline constexpr double kGamma = 0.30685281944005469058;

/// r (r-1) ... (r-a+1); 1 when a == 0.
double falling_factorial(double r, unsigned a);

/// Welford accumulator. merge() is exact up to rounding and is applied in a
/// fixed order by every estimator, so results are reproducible.
class SampleStats {
public:
  void add(double x);
  void merge(const SampleStats& other);

  std::uint64_t count() const noexcept { return count_; }
  double mean() const noexcept { return mean_; }
  /// Unbiased sample variance; 0 for fewer than two samples.
  double variance() const noexcept;
  /// Standard error of the mean.
  double std_error() const noexcept;

private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct MomentEstimate {
  std::uint64_t n = 0;
  std::uint64_t d = 0;
  unsigned k = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  /// (n / 2^d)^k, present only for k in {1, 2} and d < 2 ln n.
  std::optional<double> theory;
  std::uint64_t replicates = 0;
};

/// Whether the (n / 2^d)^k comparison is reported for (n, d, k).
bool moment_theory_applies(std::uint64_t n, std::uint64_t d, unsigned k);

/// Sample means of (Z_{>=d})_k over `replicates` independent trees, one
/// estimate per (d, k) pair in d-major order. Throws std::invalid_argument if
/// replicates < 2.
std::vector<MomentEstimate> estimate_tail_moments(Vertex n, std::span<const std::uint64_t> d_values,
                                                  std::span<const unsigned> k_values,
                                                  std::uint64_t replicates, std::uint64_t seed,
                                                  unsigned workers = 1);

/// Poisson(mu) probability of k.
double poisson_pmf(std::uint64_t k, double mu);

/// Half the L1 distance between two pmfs indexed from 0; the shorter one is
/// padded with zeros.
double tv_distance(std::span<const double> p, std::span<const double> q);

/// Total variation distance between `pmf` and Poisson(mu). The Poisson side is
/// summed up to the first k >= max(mu, support) whose upper tail is < 1e-12.
double tv_distance_to_poisson(std::span<const double> pmf, double mu);

struct TvEstimate {
  std::uint64_t n = 0;
  std::uint64_t d = 0;
  double mu = 0.0;
  double tv = 0.0;
  std::uint64_t replicates = 0;
};

/// Empirical pmf of Z_{>=d} against Poisson(n / 2^d). Throws
/// std::invalid_argument if replicates < 100.
TvEstimate estimate_tv_to_poisson(Vertex n, std::uint64_t d, std::uint64_t replicates,
                                  std::uint64_t seed, unsigned workers = 1);

/// Exact law of the root degree D, a sum of independent Bernoulli(1/(i-1)),
/// i = 2..n, by sequential convolution.
struct RootDegreePmf {
  std::uint64_t n = 0;
  /// pmf[k] = P(D = k); entries outside the retained support are 0.
  std::vector<double> pmf;
  /// Total mass discarded by support truncation.
  double dropped_mass = 0.0;

  double probability(std::uint64_t k) const { return k < pmf.size() ? pmf[k] : 0.0; }
  double mean() const;
  /// P(lower < D < upper).
  double probability_between(double lower, double upper) const;
};

inline constexpr std::uint64_t kMaxExactRootDegreeN = 1'000'000;

/// Throws std::invalid_argument unless 2 <= n <= 10^6, and std::runtime_error
/// if truncation would discard more than 1e-10 of mass.
RootDegreePmf root_degree_distribution_exact(std::uint64_t n);

/// Bernstein bound 2 n^{-eps^2 / 12} on P(D outside (1 +- eps) ln n).
double root_degree_concentration_bound(std::uint64_t n, double epsilon);

inline constexpr std::array<double, 3> kTrendDeltas{0.05, 0.10, 0.15};

struct GammaTrendPoint {
  std::uint64_t n = 0;
  std::uint64_t replicates = 0;
  /// Mean of ln(Z_{>=D}) / ln n.
  double mean_ratio = 0.0;
  double ratio_std_error = 0.0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  /// kth_moment[k - 1] = mean of (ln Z_{>=D})^k, k = 1..k_max.
  std::vector<double> kth_moment;
  std::vector<double> kth_std_error;
  /// Fraction of replicates with ratio outside (gamma - delta, gamma + delta),
  /// one entry per kTrendDeltas value.
  std::array<double, kTrendDeltas.size()> tail_probability{};
};

/// Z_{>=D} statistics along a ladder of sizes. Requires every n >= 2 and
/// replicates >= 1.
std::vector<GammaTrendPoint> gamma_trend(std::span<const std::uint64_t> n_ladder,
                                         std::uint64_t replicates, unsigned k_max,
                                         std::uint64_t seed, unsigned workers = 1);

} // namespace rrtcut
