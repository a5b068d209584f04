#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace visforge::run {

namespace fs = std::filesystem;

/// Everything a run needs to be reproduced, snapshot into the manifest.
struct RunConfig {
  std::string backend = "replay";  ///< live | replay | scripted
  std::string transcript_path;     ///< replay source / recording sink
  std::string script_path;         ///< scripted backend rules
  bool record_transcript = false;  ///< tee requests into transcript_path

  int max_iterations = 5;
  std::map<std::string, int> role_turn_budgets;  ///< overrides by role name
  std::optional<std::int64_t> max_output_tokens_per_run;

  std::vector<std::string> mcp_command;  ///< browser server argv
  std::string rubric_path;               ///< empty: bundled default rubric
  std::string catalog_dir;               ///< empty: resolved default

  double blank_variance_threshold = 25.0;
  int overflow_tolerance_px = 8;
  int request_timeout_ms = 30000;
  int step_timeout_ms = 5000;
  int app_port_min = 0;  ///< 0: any free port
  int app_port_max = 0;
  std::int64_t stream_cap_bytes = 64 * 1024;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const fs::path& path);

  /// Throws ConfigInvalid on contradictions (non-positive budgets, bad
  /// port range, unknown roles, ...).
  void validate() const;

  /// Backend-specific checks (replay needs a transcript, scripted a
  /// script). Run paths need these; standalone eval does not.
  void validate_backend() const;
};

}  // namespace visforge::run
