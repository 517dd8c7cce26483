#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace fpflab {

/// Fully resolved run configuration for one CLI command. `settings` holds
/// every key of the command's schema (defaults filled in), so serializing
/// and re-parsing it round-trips exactly.
struct RunConfig {
  std::string command;
  nlohmann::json settings;

  bool operator==(const RunConfig& other) const = default;
};

/// Known commands: simulate, filter, cod, gain-sweep, sir-demo.
const std::vector<std::string>& known_commands();

/// Builds a RunConfig from an optional JSON config file and flag overrides
/// (a flat JSON object). Precedence: flags > file > defaults. Unknown keys
/// and out-of-range values raise ConfigError with the offending key path.
RunConfig parse_config(const std::string& command,
                       const nlohmann::json& file_settings,
                       const nlohmann::json& flag_overrides);

/// Reads and parses a config file, then delegates to parse_config.
RunConfig parse_config_file(const std::string& command,
                            const std::filesystem::path& file,
                            const nlohmann::json& flag_overrides);

nlohmann::json serialize_config(const RunConfig& cfg);

struct RunResult {
  int exit_code = 0;
  std::vector<std::filesystem::path> artifacts;
};

/// Dispatches a validated config to the experiment runners and writes all
/// artifacts (CSV + JSON sidecar) under the configured output directory.
RunResult run(const RunConfig& cfg);

/// Full command-line entry point (argument parsing + dispatch). Returns the
/// process exit code; on failure a machine-readable JSON error record is
/// printed to stderr.
int cli_main(int argc, const char* const* argv);

}  // namespace fpflab
