#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace rrtcut {

enum class Command {
  Generate,
  CutTargeted,
  CutUniform,
  Records,
  Coupling,
  Moments,
  Tv,
  RootDegree,
  GammaTrend,
  OracleSmallN,
};

enum class OutputFormat { Csv, Json };

std::string_view to_string(Command command);
std::optional<Command> parse_command(std::string_view name);
std::string_view to_string(OutputFormat format);

/// Invalid or incomplete experiment configuration.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The output artifact could not be written.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ExperimentSpec {
  Command command = Command::Generate;
  std::optional<std::uint64_t> n;
  std::vector<std::uint64_t> n_ladder;
  std::uint64_t replicates = 1;
  std::uint64_t seed = 0;
  std::optional<double> epsilon;
  std::vector<std::uint64_t> d_values;
  std::vector<unsigned> k_values;
  /// Empty means standard output.
  std::string output_path;
  OutputFormat format = OutputFormat::Csv;
  unsigned workers = 1;
};

/// Throws UsageError naming the offending field.
void validate(const ExperimentSpec& spec);

using Cell = std::variant<std::monostate, std::uint64_t, std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct ExperimentOutput {
  Table table;
  /// Run-level summary; emitted as the "aggregate" object in JSON mode.
  std::vector<std::pair<std::string, Cell>> aggregate;
};

/// Runs the experiment in memory. Rows come out in replicate order and do not
/// depend on spec.workers.
ExperimentOutput compute_experiment(const ExperimentSpec& spec);

/// Serializes in spec.format. CSV: header row, then one line per row.
/// JSON: {"spec": ..., "rows": [...], "aggregate": {...}}.
void write_output(const ExperimentSpec& spec, const ExperimentOutput& output, std::ostream& os);

/// compute_experiment + write_output to spec.output_path (or stdout). Throws
/// UsageError or IoError.
void run_experiment(const ExperimentSpec& spec);

/// Shortest round-trip decimal form, '.' as separator.
std::string format_double(double x);

} // namespace rrtcut
