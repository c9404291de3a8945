#include "rrtcut/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "rrtcut/replicate.hpp"

namespace rrtcut {

double falling_factorial(double r, unsigned a) {
  double out = 1.0;
  for (unsigned j = 0; j < a; ++j) {
    out *= r - static_cast<double>(j);
  }
  return out;
}

void SampleStats::add(double x) {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
}

void SampleStats::merge(const SampleStats& other) {
  if (other.count_ == 0) {
    return;
  }
  if (count_ == 0) {
    *this = other;
    return;
  }
  const auto na = static_cast<double>(count_);
  const auto nb = static_cast<double>(other.count_);
  const double total = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * nb / total;
  m2_ += other.m2_ + delta * delta * na * nb / total;
  count_ += other.count_;
}

double SampleStats::variance() const noexcept {
  return count_ < 2 ? 0.0 : m2_ / static_cast<double>(count_ - 1);
}

double SampleStats::std_error() const noexcept {
  return count_ < 2 ? 0.0 : std::sqrt(variance() / static_cast<double>(count_));
}

bool moment_theory_applies(std::uint64_t n, std::uint64_t d, unsigned k) {
  if (k != 1 && k != 2) {
    return false;
  }
  return static_cast<double>(d) < 2.0 * std::log(static_cast<double>(n));
}

std::vector<MomentEstimate> estimate_tail_moments(Vertex n, std::span<const std::uint64_t> d_values,
                                                  std::span<const unsigned> k_values,
                                                  std::uint64_t replicates, std::uint64_t seed,
                                                  unsigned workers) {
  if (replicates < 2) {
    throw std::invalid_argument("estimate_tail_moments: need at least 2 replicates");
  }
  const std::size_t cells = d_values.size() * k_values.size();
  auto per_replicate = map_replicates(replicates, workers, [&](std::uint64_t r) {
    const TailCounts tail = degree_tail(replicate_tree(n, seed, r));
    std::vector<double> row;
    row.reserve(cells);
    for (std::uint64_t d : d_values) {
      const auto z = static_cast<double>(tail.z(d));
      for (unsigned k : k_values) {
        row.push_back(falling_factorial(z, k));
      }
    }
    return row;
  });

  std::vector<SampleStats> acc(cells);
  for (const auto& row : per_replicate) {
    for (std::size_t c = 0; c < cells; ++c) {
      acc[c].add(row[c]);
    }
  }

  std::vector<MomentEstimate> out;
  out.reserve(cells);
  std::size_t c = 0;
  for (std::uint64_t d : d_values) {
    for (unsigned k : k_values) {
      MomentEstimate e;
      e.n = n;
      e.d = d;
      e.k = k;
      e.estimate = acc[c].mean();
      e.std_error = acc[c].std_error();
      e.replicates = replicates;
      if (moment_theory_applies(n, d, k)) {
        e.theory = std::pow(std::ldexp(static_cast<double>(n), -static_cast<int>(d)), k);
      }
      out.push_back(e);
      ++c;
    }
  }
  return out;
}

double poisson_pmf(std::uint64_t k, double mu) {
  if (mu <= 0.0) {
    return k == 0 ? 1.0 : 0.0;
  }
  const auto x = static_cast<double>(k);
  return std::exp(x * std::log(mu) - mu - std::lgamma(x + 1.0));
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
  const std::size_t len = std::max(p.size(), q.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    const double a = k < p.size() ? p[k] : 0.0;
    const double b = k < q.size() ? q[k] : 0.0;
    sum += std::abs(a - b);
  }
  return 0.5 * sum;
}

double tv_distance_to_poisson(std::span<const double> pmf, double mu) {
  constexpr double kTailCutoff = 1e-12;
  const double floor = std::max(mu, pmf.empty() ? 0.0 : static_cast<double>(pmf.size() - 1));
  double sum = 0.0;
  for (std::uint64_t k = 0;; ++k) {
    const double empirical = k < pmf.size() ? pmf[k] : 0.0;
    sum += std::abs(empirical - poisson_pmf(k, mu));
    if (static_cast<double>(k) >= floor) {
      // P(X > k) <= pi(k+1) / (1 - mu / (k + 2)) once k + 2 > mu.
      const double ratio = mu / static_cast<double>(k + 2);
      if (ratio < 1.0 && poisson_pmf(k + 1, mu) / (1.0 - ratio) < kTailCutoff) {
        break;
      }
    }
  }
  return std::min(1.0, 0.5 * sum);
}

TvEstimate estimate_tv_to_poisson(Vertex n, std::uint64_t d, std::uint64_t replicates,
                                  std::uint64_t seed, unsigned workers) {
  if (replicates < 100) {
    throw std::invalid_argument("estimate_tv_to_poisson: need at least 100 replicates");
  }
  const auto values = map_replicates(replicates, workers, [&](std::uint64_t r) {
    const RecursiveTree tree = replicate_tree(n, seed, r);
    std::uint64_t z = 0;
    for (std::uint32_t deg : tree.degrees().subspan(1)) {
      z += deg >= d;
    }
    return z;
  });
  const std::uint64_t top = *std::max_element(values.begin(), values.end());
  std::vector<double> pmf(top + 1, 0.0);
  for (std::uint64_t z : values) {
    pmf[z] += 1.0;
  }
  for (double& p : pmf) {
    p /= static_cast<double>(replicates);
  }
  TvEstimate out;
  out.n = n;
  out.d = d;
  out.mu = std::ldexp(static_cast<double>(n), -static_cast<int>(d));
  out.tv = tv_distance_to_poisson(pmf, out.mu);
  out.replicates = replicates;
  return out;
}

double RootDegreePmf::mean() const {
  double m = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    m += static_cast<double>(k) * pmf[k];
  }
  return m;
}

double RootDegreePmf::probability_between(double lower, double upper) const {
  double p = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    const auto x = static_cast<double>(k);
    if (x > lower && x < upper) {
      p += pmf[k];
    }
  }
  return p;
}

namespace {

std::string format_mass(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

} // namespace

RootDegreePmf root_degree_distribution_exact(std::uint64_t n) {
  if (n < 2 || n > kMaxExactRootDegreeN) {
    throw std::invalid_argument("root_degree_distribution_exact: n must lie in [2, 10^6]");
  }
  constexpr double kDropBelow = 1e-18;
  constexpr double kMaxDropped = 1e-10;

  // window[j] = P(D = lo + j) over the retained support.
  std::uint64_t lo = 0;
  std::vector<double> window{1.0};
  std::vector<double> next;
  double dropped = 0.0;
  for (std::uint64_t i = 2; i <= n; ++i) {
    const double p = 1.0 / static_cast<double>(i - 1);
    next.assign(window.size() + 1, 0.0);
    for (std::size_t j = 0; j < window.size(); ++j) {
      next[j] += window[j] * (1.0 - p);
      next[j + 1] += window[j] * p;
    }
    std::size_t first = 0;
    std::size_t last = next.size();
    while (last - first > 1 && next[first] < kDropBelow) {
      dropped += next[first++];
    }
    while (last - first > 1 && next[last - 1] < kDropBelow) {
      dropped += next[--last];
    }
    window.assign(next.begin() + static_cast<std::ptrdiff_t>(first),
                  next.begin() + static_cast<std::ptrdiff_t>(last));
    lo += first;
  }
  if (dropped > kMaxDropped) {
    throw std::runtime_error("root_degree_distribution_exact: truncation dropped " +
                             format_mass(dropped) + " of mass");
  }
  RootDegreePmf out;
  out.n = n;
  out.pmf.assign(lo, 0.0);
  out.pmf.insert(out.pmf.end(), window.begin(), window.end());
  out.dropped_mass = dropped;
  return out;
}

double root_degree_concentration_bound(std::uint64_t n, double epsilon) {
  return 2.0 * std::pow(static_cast<double>(n), -epsilon * epsilon / 12.0);
}

std::vector<GammaTrendPoint> gamma_trend(std::span<const std::uint64_t> n_ladder,
                                         std::uint64_t replicates, unsigned k_max,
                                         std::uint64_t seed, unsigned workers) {
  if (replicates < 1) {
    throw std::invalid_argument("gamma_trend: need at least one replicate");
  }
  std::vector<GammaTrendPoint> out;
  for (std::uint64_t n : n_ladder) {
    if (n < 2 || n > UINT32_MAX) {
      throw std::invalid_argument("gamma_trend: every n must lie in [2, 2^32)");
    }
    const auto z_values = map_replicates(replicates, workers, [&](std::uint64_t r) {
      return degree_tail(replicate_tree(static_cast<Vertex>(n), seed, r)).z_at_root_degree();
    });
    const double ln_n = std::log(static_cast<double>(n));
    SampleStats ratio;
    std::vector<SampleStats> powers(k_max);
    GammaTrendPoint point;
    point.n = n;
    point.replicates = replicates;
    point.min_ratio = 1.0;
    point.max_ratio = 0.0;
    std::array<std::uint64_t, kTrendDeltas.size()> outside{};
    for (std::uint64_t z : z_values) {
      const double ln_z = std::log(static_cast<double>(z));
      const double x = ln_z / ln_n;
      ratio.add(x);
      point.min_ratio = std::min(point.min_ratio, x);
      point.max_ratio = std::max(point.max_ratio, x);
      double power = 1.0;
      for (unsigned k = 0; k < k_max; ++k) {
        power *= ln_z;
        powers[k].add(power);
      }
      for (std::size_t j = 0; j < kTrendDeltas.size(); ++j) {
        outside[j] += !(x > kGamma - kTrendDeltas[j] && x < kGamma + kTrendDeltas[j]);
      }
    }
    point.mean_ratio = ratio.mean();
    point.ratio_std_error = ratio.std_error();
    for (const auto& p : powers) {
      point.kth_moment.push_back(p.mean());
      point.kth_std_error.push_back(p.std_error());
    }
    for (std::size_t j = 0; j < kTrendDeltas.size(); ++j) {
      point.tail_probability[j] =
          static_cast<double>(outside[j]) / static_cast<double>(replicates);
    }
    out.push_back(std::move(point));
  }
  return out;
}

} // namespace rrtcut
