#include "rrtcut/experiment.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>

#include "json.hpp"
#include "rrtcut/coupling.hpp"
#include "rrtcut/cutting.hpp"
#include "rrtcut/replicate.hpp"
#include "rrtcut/stats.hpp"
#include "rrtcut/tree.hpp"

namespace rrtcut {

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 10> kCommandNames{{
    {Command::Generate, "generate"},
    {Command::CutTargeted, "cut-targeted"},
    {Command::CutUniform, "cut-uniform"},
    {Command::Records, "records"},
    {Command::Coupling, "coupling"},
    {Command::Moments, "moments"},
    {Command::Tv, "tv"},
    {Command::RootDegree, "root-degree"},
    {Command::GammaTrend, "gamma-trend"},
    {Command::OracleSmallN, "oracle-smalln"},
}};

const std::vector<std::string> kEstimateColumns{"op",       "n",     "d",          "k",   "estimate",
                                                "std_error", "theory", "replicates", "seed"};

[[noreturn]] void invalid(std::string_view field, const std::string& why) {
  throw UsageError("invalid '" + std::string(field) + "': " + why);
}

Cell optional_cell(const std::optional<double>& x) {
  return x ? Cell{*x} : Cell{};
}

std::vector<Cell> estimate_row(std::string op, std::uint64_t n, Cell d, Cell k, double estimate,
                               Cell std_error, Cell theory, std::uint64_t replicates,
                               std::uint64_t seed) {
  return {std::move(op), n, std::move(d), std::move(k), estimate, std::move(std_error),
          std::move(theory), replicates, seed};
}

double binomial_se(double p, std::uint64_t count) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(count));
}

Vertex tree_size(const ExperimentSpec& spec) { return static_cast<Vertex>(*spec.n); }

// -- per-replicate commands -------------------------------------------------

ExperimentOutput run_generate(const ExperimentSpec& spec) {
  const Vertex n = tree_size(spec);
  auto tails = map_replicates(spec.replicates, spec.workers, [&](std::uint64_t r) {
    return degree_tail(replicate_tree(n, spec.seed, r));
  });
  ExperimentOutput out;
  out.table.columns = {"replicate",  "n",          "seed", "root_degree", "max_degree",
                       "z_at_root_degree", "tail"};
  SampleStats root_degree;
  SampleStats max_degree;
  for (std::uint64_t r = 0; r < tails.size(); ++r) {
    const TailCounts& t = tails[r];
    std::string tail;
    for (std::size_t d = 0; d < t.at_least.size(); ++d) {
      tail += (d ? ";" : "") + std::to_string(t.at_least[d]);
    }
    out.table.rows.push_back({r, std::uint64_t{n}, spec.seed, std::uint64_t{t.root_degree},
                              std::uint64_t{t.max_degree}, t.z_at_root_degree(), tail});
    root_degree.add(t.root_degree);
    max_degree.add(t.max_degree);
  }
  out.aggregate = {{"replicates", spec.replicates},
                   {"mean_root_degree", root_degree.mean()},
                   {"mean_max_degree", max_degree.mean()}};
  return out;
}

ExperimentOutput run_cuts(const ExperimentSpec& spec) {
  const Vertex n = tree_size(spec);
  auto results = map_replicates(spec.replicates, spec.workers, [&](std::uint64_t r) {
    const RecursiveTree tree = replicate_tree(n, spec.seed, r);
    RngStream rng = replicate_stream(spec.seed, r).substream(kCutStream);
    switch (spec.command) {
    case Command::CutTargeted:
      return targeted_cut(tree, rng);
    case Command::CutUniform:
      return uniform_edge_cut(tree, rng);
    default:
      return record_count(tree, rng);
    }
  });
  ExperimentOutput out;
  out.table.columns = {"policy", "n", "seed", "cuts", "z_at_root_degree"};
  SampleStats cuts;
  std::uint64_t bound_violations = 0;
  for (const CutResult& c : results) {
    Cell z = c.z_at_root_degree ? Cell{*c.z_at_root_degree} : Cell{};
    out.table.rows.push_back(
        {std::string(to_string(c.policy)), std::uint64_t{n}, spec.seed, c.cuts, z});
    cuts.add(static_cast<double>(c.cuts));
    if (c.z_at_root_degree && c.cuts > *c.z_at_root_degree) {
      ++bound_violations;
    }
  }
  out.aggregate = {{"replicates", spec.replicates},
                   {"mean_cuts", cuts.mean()},
                   {"std_error", cuts.std_error()}};
  if (spec.command == Command::CutTargeted) {
    out.aggregate.emplace_back("bound_violations", bound_violations);
  } else if (n >= 3) {
    const double ln_n = std::log(static_cast<double>(n));
    out.aggregate.emplace_back("mean_cuts_log_n_over_n",
                               cuts.mean() * ln_n / static_cast<double>(n));
    out.aggregate.emplace_back("y_at_mean_cuts",
                               y_statistic(n, 0).value +
                                   ln_n * ln_n * cuts.mean() / static_cast<double>(n));
  }
  return out;
}

bool coupling_invariants_hold(const CoupledSample& s, const std::vector<WdDiagnostic>& profile) {
  const RootDegreeWindow window = root_degree_window(s.n, s.epsilon);
  if (!window.contains(s.d_cond)) {
    return false;
  }
  for (Vertex i = 2; i <= s.n; ++i) {
    if (s.b[i] == s.b_cond[i] && s.tree.parent(i) != s.tree_cond.parent(i)) {
      return false;
    }
  }
  const double n = static_cast<double>(s.n);
  for (const WdDiagnostic& w : profile) {
    const auto gap = w.z_d > w.z_d_cond ? w.z_d - w.z_d_cond : w.z_d_cond - w.z_d;
    if (w.differing_degree_count > w.sym_diff_root_children ||
        gap > 1 + w.sym_diff_root_children || w.w < 1.0 / n || w.w > n ||
        (w.d == 0 && w.w != 1.0)) {
      return false;
    }
  }
  return true;
}

ExperimentOutput run_coupling(const ExperimentSpec& spec) {
  const Vertex n = tree_size(spec);
  const double eps = *spec.epsilon;
  const std::uint64_t d = spec.d_values.empty()
                              ? static_cast<std::uint64_t>(std::ceil(1.1 * std::log(double(n))))
                              : spec.d_values.front();
  struct Row {
    WdDiagnostic diag;
    std::uint64_t attempts = 0;
    bool invariants = false;
  };
  auto rows = map_replicates(spec.replicates, spec.workers, [&](std::uint64_t r) {
    RngStream rng = replicate_stream(spec.seed, r);
    const CoupledSample sample = build_coupled_pair(n, eps, rng);
    const auto profile = coupling_profile(sample);
    Row row;
    row.diag = d < profile.size() ? profile[d] : coupling_diagnostics(sample, d);
    row.attempts = sample.attempts;
    row.invariants = coupling_invariants_hold(sample, profile);
    return row;
  });
  ExperimentOutput out;
  out.table.columns = {"n", "epsilon", "seed", "d", "w", "sym_diff", "differing_degrees", "z_d",
                       "z_d_cond"};
  SampleStats w;
  SampleStats attempts;
  std::uint64_t violations = 0;
  for (const Row& row : rows) {
    const WdDiagnostic& x = row.diag;
    out.table.rows.push_back({std::uint64_t{n}, eps, spec.seed, x.d, x.w,
                              x.sym_diff_root_children, x.differing_degree_count, x.z_d,
                              x.z_d_cond});
    w.add(x.w);
    attempts.add(static_cast<double>(row.attempts));
    violations += !row.invariants;
  }
  out.aggregate = {{"replicates", spec.replicates},
                   {"mean_w", w.mean()},
                   {"mean_attempts", attempts.mean()},
                   {"invariant_violations", violations}};
  return out;
}

// -- aggregate commands ------------------------------------------------------

ExperimentOutput run_moments(const ExperimentSpec& spec) {
  const std::vector<unsigned> ks = spec.k_values.empty() ? std::vector<unsigned>{1, 2}
                                                         : spec.k_values;
  const auto estimates = estimate_tail_moments(tree_size(spec), spec.d_values, ks,
                                               spec.replicates, spec.seed, spec.workers);
  ExperimentOutput out;
  out.table.columns = kEstimateColumns;
  for (const MomentEstimate& e : estimates) {
    out.table.rows.push_back(estimate_row("moments", e.n, e.d, std::uint64_t{e.k}, e.estimate,
                                          e.std_error, optional_cell(e.theory), e.replicates,
                                          spec.seed));
  }
  out.aggregate = {{"estimates", std::uint64_t{estimates.size()}}};
  return out;
}

ExperimentOutput run_tv(const ExperimentSpec& spec) {
  ExperimentOutput out;
  out.table.columns = kEstimateColumns;
  for (std::uint64_t d : spec.d_values) {
    const TvEstimate e =
        estimate_tv_to_poisson(tree_size(spec), d, spec.replicates, spec.seed, spec.workers);
    out.table.rows.push_back(
        estimate_row("tv", e.n, e.d, Cell{}, e.tv, Cell{}, e.mu, e.replicates, spec.seed));
  }
  out.aggregate = {{"estimates", std::uint64_t{out.table.rows.size()}}};
  return out;
}

ExperimentOutput run_root_degree(const ExperimentSpec& spec) {
  const Vertex n = tree_size(spec);
  const RootDegreePmf exact = root_degree_distribution_exact(n);
  const auto degrees = map_replicates(spec.replicates, spec.workers, [&](std::uint64_t r) {
    return std::uint64_t{replicate_tree(n, spec.seed, r).root_degree()};
  });
  std::map<std::uint64_t, std::uint64_t> histogram;
  SampleStats mean;
  for (std::uint64_t d : degrees) {
    ++histogram[d];
    mean.add(static_cast<double>(d));
  }
  ExperimentOutput out;
  out.table.columns = kEstimateColumns;
  const auto reps = static_cast<double>(spec.replicates);
  for (std::uint64_t k = 0; k < std::max<std::uint64_t>(exact.pmf.size(),
                                                        histogram.empty() ? 0 : histogram.rbegin()->first + 1);
       ++k) {
    const double p = exact.probability(k);
    const auto it = histogram.find(k);
    const std::uint64_t hits = it == histogram.end() ? 0 : it->second;
    if (p < 1e-12 && hits == 0) {
      continue;
    }
    out.table.rows.push_back(estimate_row("root-degree", n, k, Cell{},
                                          static_cast<double>(hits) / reps,
                                          binomial_se(p, spec.replicates), p, spec.replicates,
                                          spec.seed));
  }
  double harmonic = 0.0;
  for (std::uint64_t i = 1; i < n; ++i) {
    harmonic += 1.0 / static_cast<double>(i);
  }
  out.table.rows.push_back(estimate_row("root-degree-mean", n, Cell{}, Cell{}, mean.mean(),
                                        mean.std_error(), harmonic, spec.replicates, spec.seed));
  if (spec.epsilon) {
    const RootDegreeWindow window = root_degree_window(n, *spec.epsilon);
    const double outside = 1.0 - exact.probability_between(window.lower, window.upper);
    out.table.rows.push_back(estimate_row("root-degree-outside-window", n, Cell{}, Cell{},
                                          outside, Cell{},
                                          root_degree_concentration_bound(n, *spec.epsilon),
                                          spec.replicates, spec.seed));
  }
  out.aggregate = {{"exact_mean", exact.mean()},
                   {"harmonic", harmonic},
                   {"dropped_mass", exact.dropped_mass}};
  return out;
}

ExperimentOutput run_gamma_trend(const ExperimentSpec& spec) {
  unsigned k_max = 2;
  if (!spec.k_values.empty()) {
    k_max = *std::max_element(spec.k_values.begin(), spec.k_values.end());
  }
  const auto points = gamma_trend(spec.n_ladder, spec.replicates, k_max, spec.seed, spec.workers);
  ExperimentOutput out;
  out.table.columns = kEstimateColumns;
  for (const GammaTrendPoint& p : points) {
    const double ln_n = std::log(static_cast<double>(p.n));
    out.table.rows.push_back(estimate_row("gamma-ratio", p.n, Cell{}, Cell{}, p.mean_ratio,
                                          p.ratio_std_error, kGamma, p.replicates, spec.seed));
    for (unsigned k = 1; k <= k_max; ++k) {
      out.table.rows.push_back(estimate_row("gamma-moment", p.n, Cell{}, std::uint64_t{k},
                                            p.kth_moment[k - 1], p.kth_std_error[k - 1],
                                            std::pow(kGamma * ln_n, k), p.replicates,
                                            spec.seed));
    }
    for (std::size_t j = 0; j < kTrendDeltas.size(); ++j) {
      out.table.rows.push_back(estimate_row(
          "gamma-tail-" + format_double(kTrendDeltas[j]), p.n, Cell{}, Cell{},
          p.tail_probability[j], binomial_se(p.tail_probability[j], p.replicates), Cell{},
          p.replicates, spec.seed));
    }
  }
  out.aggregate = {{"gamma", kGamma}, {"ladder_points", std::uint64_t{points.size()}}};
  return out;
}

ExperimentOutput run_oracle(const ExperimentSpec& spec) {
  const Vertex n = tree_size(spec);
  const auto trees = enumerate_increasing_trees(n);
  const auto count = static_cast<double>(trees.size());
  std::vector<double> root_pmf(n, 0.0);
  std::vector<double> tail_mean(n, 0.0);
  for (const auto& tree : trees) {
    root_pmf[tree.root_degree()] += 1.0 / count;
    const TailCounts tail = degree_tail(tree);
    for (std::uint64_t d = 0; d < n; ++d) {
      tail_mean[d] += static_cast<double>(tail.z(d)) / count;
    }
  }
  const double targeted_mean = targeted_cut_exact_mean(n);

  struct Sample {
    std::uint64_t cuts = 0;
    std::uint32_t root_degree = 0;
    std::vector<std::uint64_t> tail;
  };
  auto samples = map_replicates(spec.replicates, spec.workers, [&](std::uint64_t r) {
    const RecursiveTree tree = replicate_tree(n, spec.seed, r);
    RngStream rng = replicate_stream(spec.seed, r).substream(kCutStream);
    const TailCounts tail = degree_tail(tree);
    return Sample{targeted_cut(tree, rng).cuts, tail.root_degree, tail.at_least};
  });

  SampleStats cuts;
  std::vector<std::uint64_t> root_hits(n, 0);
  std::vector<SampleStats> tails(n);
  for (const Sample& s : samples) {
    cuts.add(static_cast<double>(s.cuts));
    ++root_hits[s.root_degree];
    for (std::uint64_t d = 0; d < n; ++d) {
      tails[d].add(d < s.tail.size() ? static_cast<double>(s.tail[d]) : 0.0);
    }
  }

  ExperimentOutput out;
  out.table.columns = kEstimateColumns;
  out.table.rows.push_back(estimate_row("oracle-targeted-mean", n, Cell{}, Cell{}, cuts.mean(),
                                        cuts.std_error(), targeted_mean, spec.replicates,
                                        spec.seed));
  const auto reps = static_cast<double>(spec.replicates);
  for (std::uint64_t k = 1; k < n; ++k) {
    out.table.rows.push_back(estimate_row("oracle-root-degree", n, k, Cell{},
                                          static_cast<double>(root_hits[k]) / reps,
                                          binomial_se(root_pmf[k], spec.replicates), root_pmf[k],
                                          spec.replicates, spec.seed));
  }
  for (std::uint64_t d = 0; d < n; ++d) {
    out.table.rows.push_back(estimate_row("oracle-tail-mean", n, d, Cell{}, tails[d].mean(),
                                          tails[d].std_error(), tail_mean[d], spec.replicates,
                                          spec.seed));
  }
  out.aggregate = {{"trees", std::uint64_t{trees.size()}},
                   {"exact_targeted_mean", targeted_mean}};
  return out;
}

// -- serialization -----------------------------------------------------------

std::string cell_text(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(std::uint64_t x) const { return std::to_string(x); }
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(double x) const { return format_double(x); }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, cell);
}

nlohmann::ordered_json cell_json(const Cell& cell) {
  struct Visitor {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(std::uint64_t x) const { return x; }
    nlohmann::ordered_json operator()(std::int64_t x) const { return x; }
    nlohmann::ordered_json operator()(double x) const {
      return std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json(nullptr);
    }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, cell);
}

nlohmann::ordered_json spec_json(const ExperimentSpec& spec) {
  // Execution details (workers, output path) are left out so that the report
  // depends only on what was computed.
  nlohmann::ordered_json j;
  j["command"] = std::string(to_string(spec.command));
  j["n"] = spec.n ? nlohmann::ordered_json(*spec.n) : nlohmann::ordered_json(nullptr);
  j["n_ladder"] = spec.n_ladder;
  j["replicates"] = spec.replicates;
  j["seed"] = spec.seed;
  j["epsilon"] =
      spec.epsilon ? nlohmann::ordered_json(*spec.epsilon) : nlohmann::ordered_json(nullptr);
  j["d"] = spec.d_values;
  j["k"] = spec.k_values;
  j["format"] = std::string(to_string(spec.format));
  return j;
}

} // namespace

std::string_view to_string(Command command) {
  for (const auto& [c, name] : kCommandNames) {
    if (c == command) {
      return name;
    }
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view name) {
  for (const auto& [c, known] : kCommandNames) {
    if (known == name) {
      return c;
    }
  }
  return std::nullopt;
}

std::string_view to_string(OutputFormat format) {
  return format == OutputFormat::Csv ? "csv" : "json";
}

std::string format_double(double x) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc{}) {
    return "nan";
  }
  return std::string(buf.data(), ptr);
}

void validate(const ExperimentSpec& spec) {
  if (spec.replicates < 1) {
    invalid("reps", "must be at least 1");
  }
  if (spec.workers < 1) {
    invalid("workers", "must be at least 1");
  }
  if (spec.epsilon && !(*spec.epsilon > 0.0 && *spec.epsilon < 1.0)) {
    invalid("eps", "epsilon must lie in (0, 1)");
  }
  if (spec.n && (*spec.n < 1 || *spec.n > UINT32_MAX)) {
    invalid("n", "must lie in [1, 2^32)");
  }
  for (std::uint64_t n : spec.n_ladder) {
    if (n < 2 || n > UINT32_MAX) {
      invalid("n_ladder", "every size must lie in [2, 2^32)");
    }
  }
  switch (spec.command) {
  case Command::OracleSmallN:
    if (spec.n && (*spec.n < 2 || *spec.n > 8)) {
      invalid("n", "oracle-smalln needs 2 <= n <= 8");
    }
    break;
  case Command::RootDegree:
    if (spec.n && (*spec.n < 2 || *spec.n > kMaxExactRootDegreeN)) {
      invalid("n", "root-degree needs 2 <= n <= 10^6");
    }
    break;
  case Command::Coupling:
    if (spec.n && *spec.n < 2) {
      invalid("n", "coupling needs n >= 2");
    }
    break;
  case Command::Moments:
    if (spec.replicates < 2) {
      invalid("reps", "moments needs at least 2 replicates");
    }
    break;
  case Command::Tv:
    if (spec.replicates < 100) {
      invalid("reps", "tv needs at least 100 replicates");
    }
    break;
  default:
    break;
  }
}

ExperimentOutput compute_experiment(const ExperimentSpec& spec) {
  validate(spec);
  try {
    switch (spec.command) {
    case Command::Generate:
      return run_generate(spec);
    case Command::CutTargeted:
    case Command::CutUniform:
    case Command::Records:
      return run_cuts(spec);
    case Command::Coupling:
      return run_coupling(spec);
    case Command::Moments:
      return run_moments(spec);
    case Command::Tv:
      return run_tv(spec);
    case Command::RootDegree:
      return run_root_degree(spec);
    case Command::GammaTrend:
      return run_gamma_trend(spec);
    case Command::OracleSmallN:
      return run_oracle(spec);
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  throw UsageError("unknown command");
}

void write_output(const ExperimentSpec& spec, const ExperimentOutput& output, std::ostream& os) {
  if (spec.format == OutputFormat::Csv) {
    for (std::size_t c = 0; c < output.table.columns.size(); ++c) {
      os << (c ? "," : "") << output.table.columns[c];
    }
    os << '\n';
    for (const auto& row : output.table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        os << (c ? "," : "") << cell_text(row[c]);
      }
      os << '\n';
    }
    return;
  }
  nlohmann::ordered_json report;
  report["spec"] = spec_json(spec);
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : output.table.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t c = 0; c < row.size(); ++c) {
      obj[output.table.columns[c]] = cell_json(row[c]);
    }
    rows.push_back(std::move(obj));
  }
  report["rows"] = std::move(rows);
  nlohmann::ordered_json aggregate = nlohmann::ordered_json::object();
  for (const auto& [key, value] : output.aggregate) {
    aggregate[key] = cell_json(value);
  }
  report["aggregate"] = std::move(aggregate);
  os << report.dump(2) << '\n';
}

void run_experiment(const ExperimentSpec& spec) {
  const ExperimentOutput output = compute_experiment(spec);
  if (spec.output_path.empty()) {
    write_output(spec, output, std::cout);
    std::cout.flush();
    if (!std::cout) {
      throw IoError("failed writing to standard output");
    }
    return;
  }
  std::ofstream file(spec.output_path, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw IoError("cannot open '" + spec.output_path + "' for writing");
  }
  write_output(spec, output, file);
  file.close();
  if (!file) {
    throw IoError("failed writing '" + spec.output_path + "'");
  }
}

} // namespace rrtcut
