#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rrtcut/experiment.hpp"

namespace rrtcut {

/// Builds an ExperimentSpec from command-line arguments (without the program
/// name), e.g. {"cut-targeted", "--n", "100", "--reps", "10"}.
///
/// Precedence: flags, then the --config file, then `env_seed` for the seed.
/// The config file is flat `key = value` lines; `#` starts a comment, keys are
/// the flag names without dashes (n_ladder and n-ladder both accepted), lists
/// are comma separated with optional brackets. Unknown keys, malformed values
/// and missing required fields throw UsageError naming the field.
ExperimentSpec parse_config(const std::vector<std::string>& args,
                            const std::optional<std::string>& env_seed);

/// As above, reading the seed fallback from RRTCUT_SEED.
ExperimentSpec parse_config(const std::vector<std::string>& args);

/// Parses the text of a config file into `spec`, overwriting the fields it
/// names, and returns the keys it applied. Exposed for tests.
std::vector<std::string> apply_config_text(std::string_view text, ExperimentSpec& spec);

/// Help text for the command-line tool.
std::string usage();

} // namespace rrtcut
