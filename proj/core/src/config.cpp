#include "rrtcut/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"

namespace rrtcut {

namespace {

// Canonical key, command-line flag.
struct KeySpec {
  std::string_view key;
  std::string_view flag;
  std::string_view help;
};

constexpr std::array<KeySpec, 10> kKeys{{
    {"n", "--n", "Tree size"},
    {"n_ladder", "--n-ladder", "Comma-separated tree sizes (gamma-trend)"},
    {"reps", "--reps", "Number of replicates"},
    {"seed", "--seed", "Master seed (falls back to RRTCUT_SEED, then 0)"},
    {"eps", "--eps", "Root-degree window half-width in (0, 1) (coupling, root-degree)"},
    {"d", "--d", "Comma-separated degree thresholds"},
    {"k", "--k", "Comma-separated moment orders"},
    {"out", "--out", "Output path (default: stdout)"},
    {"format", "--format", "csv or json"},
    {"workers", "--workers", "Worker threads"},
}};

std::string canonical_key(std::string_view key) {
  std::string out(key);
  std::replace(out.begin(), out.end(), '-', '_');
  if (out == "replicates") {
    return "reps";
  }
  if (out == "epsilon") {
    return "eps";
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view why) {
  throw UsageError("invalid value '" + std::string(value) + "' for '" + std::string(key) +
                   "': " + std::string(why));
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    bad_value(key, text, "expected a number");
  }
  return value;
}

template <class T>
std::vector<T> parse_list(std::string_view key, std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '[') {
    if (text.back() != ']') {
      bad_value(key, text, "unbalanced brackets");
    }
    text = text.substr(1, text.size() - 2);
  }
  std::vector<T> out;
  while (!trim(text).empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_number<T>(key, text.substr(0, comma)));
    if (comma == std::string_view::npos) {
      break;
    }
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) {
    bad_value(key, text, "expected at least one value");
  }
  return out;
}

void apply_key(const std::string& key, std::string_view value, ExperimentSpec& spec) {
  if (key == "command") {
    const auto command = parse_command(trim(value));
    if (!command) {
      bad_value(key, value, "unknown command");
    }
    spec.command = *command;
  } else if (key == "n") {
    spec.n = parse_number<std::uint64_t>(key, value);
  } else if (key == "n_ladder") {
    spec.n_ladder = parse_list<std::uint64_t>(key, value);
  } else if (key == "reps") {
    spec.replicates = parse_number<std::uint64_t>(key, value);
  } else if (key == "seed") {
    spec.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "eps") {
    spec.epsilon = parse_number<double>(key, value);
  } else if (key == "d") {
    spec.d_values = parse_list<std::uint64_t>(key, value);
  } else if (key == "k") {
    spec.k_values = parse_list<unsigned>(key, value);
  } else if (key == "out") {
    spec.output_path = std::string(trim(value));
  } else if (key == "format") {
    const auto v = trim(value);
    if (v == "csv") {
      spec.format = OutputFormat::Csv;
    } else if (v == "json") {
      spec.format = OutputFormat::Json;
    } else {
      bad_value(key, value, "expected csv or json");
    }
  } else if (key == "workers") {
    spec.workers = parse_number<unsigned>(key, value);
  } else {
    throw UsageError("unknown config key '" + key + "'");
  }
}

struct CommandLine {
  std::unique_ptr<CLI::App> app;
  std::string command;
  std::string config_path;
  std::array<std::string, kKeys.size()> values;
  std::array<CLI::Option*, kKeys.size()> options{};
  CLI::Option* command_option = nullptr;
  CLI::Option* config_option = nullptr;
};

std::unique_ptr<CommandLine> make_command_line() {
  auto cl = std::make_unique<CommandLine>();
  cl->app = std::make_unique<CLI::App>(
      "Random recursive tree cutting experiments.\n"
      "Commands: generate, cut-targeted, cut-uniform, records, coupling, moments, tv,\n"
      "          root-degree, gamma-trend, oracle-smalln",
      "rrtcut");
  cl->command_option = cl->app->add_option("command", cl->command, "Experiment to run");
  cl->config_option =
      cl->app->add_option("--config", cl->config_path, "Flat key=value configuration file");
  for (std::size_t i = 0; i < kKeys.size(); ++i) {
    cl->options[i] = cl->app->add_option(std::string(kKeys[i].flag), cl->values[i],
                                         std::string(kKeys[i].help));
  }
  return cl;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw UsageError("cannot read config file '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_required(const ExperimentSpec& spec) {
  auto require = [](bool present, std::string_view field) {
    if (!present) {
      throw UsageError("missing required field '" + std::string(field) + "'");
    }
  };
  switch (spec.command) {
  case Command::GammaTrend:
    require(!spec.n_ladder.empty(), "n_ladder");
    break;
  case Command::Coupling:
    require(spec.n.has_value(), "n");
    require(spec.epsilon.has_value(), "eps");
    break;
  case Command::Moments:
  case Command::Tv:
    require(spec.n.has_value(), "n");
    require(!spec.d_values.empty(), "d");
    break;
  default:
    require(spec.n.has_value(), "n");
    break;
  }
}

} // namespace

std::vector<std::string> apply_config_text(std::string_view text, ExperimentSpec& spec) {
  std::vector<std::string> applied;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = canonical_key(trim(line.substr(0, eq)));
    apply_key(key, line.substr(eq + 1), spec);
    applied.push_back(key);
  }
  return applied;
}

ExperimentSpec parse_config(const std::vector<std::string>& args,
                            const std::optional<std::string>& env_seed) {
  auto cl = make_command_line();
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    cl->app->parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw UsageError(cl->app->help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  ExperimentSpec spec;
  bool have_command = false;
  bool have_seed = false;
  if (cl->config_option->count() > 0) {
    for (const auto& key : apply_config_text(read_file(cl->config_path), spec)) {
      have_command |= key == "command";
      have_seed |= key == "seed";
    }
  }
  if (cl->command_option->count() > 0) {
    apply_key("command", cl->command, spec);
    have_command = true;
  }
  for (std::size_t i = 0; i < kKeys.size(); ++i) {
    if (cl->options[i]->count() > 0) {
      const std::string key(kKeys[i].key);
      apply_key(key, cl->values[i], spec);
      have_seed |= key == "seed";
    }
  }
  if (!have_seed && env_seed && !trim(*env_seed).empty()) {
    spec.seed = parse_number<std::uint64_t>("RRTCUT_SEED", *env_seed);
  }
  if (!have_command) {
    throw UsageError("missing required field 'command'");
  }
  check_required(spec);
  validate(spec);
  return spec;
}

ExperimentSpec parse_config(const std::vector<std::string>& args) {
  std::optional<std::string> env_seed;
  if (const char* value = std::getenv("RRTCUT_SEED")) {
    env_seed = value;
  }
  return parse_config(args, env_seed);
}

std::string usage() { return make_command_line()->app->help(); }

} // namespace rrtcut
