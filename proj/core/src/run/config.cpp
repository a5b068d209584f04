#include "visforge/run/config.hpp"

#include "visforge/error.hpp"
#include "visforge/support/text.hpp"
#include "visforge/types.hpp"

namespace visforge::run {

using nlohmann::json;

json RunConfig::to_json() const {
  json j = {{"backend", backend},
            {"transcript_path", transcript_path},
            {"script_path", script_path},
            {"record_transcript", record_transcript},
            {"max_iterations", max_iterations},
            {"role_turn_budgets", role_turn_budgets},
            {"mcp_command", mcp_command},
            {"rubric_path", rubric_path},
            {"catalog_dir", catalog_dir},
            {"blank_variance_threshold", blank_variance_threshold},
            {"overflow_tolerance_px", overflow_tolerance_px},
            {"request_timeout_ms", request_timeout_ms},
            {"step_timeout_ms", step_timeout_ms},
            {"app_port_min", app_port_min},
            {"app_port_max", app_port_max},
            {"stream_cap_bytes", stream_cap_bytes}};
  if (max_output_tokens_per_run)
    j["max_output_tokens_per_run"] = *max_output_tokens_per_run;
  return j;
}

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object())
    raise(ErrorCode::ConfigInvalid, "config must be a JSON object");
  RunConfig cfg;
  cfg.backend = j.value("backend", cfg.backend);
  cfg.transcript_path = j.value("transcript_path", cfg.transcript_path);
  cfg.script_path = j.value("script_path", cfg.script_path);
  cfg.record_transcript = j.value("record_transcript", cfg.record_transcript);
  cfg.max_iterations = j.value("max_iterations", cfg.max_iterations);
  if (j.contains("role_turn_budgets")) {
    for (const auto& [role, turns] : j["role_turn_budgets"].items())
      cfg.role_turn_budgets[role] = turns.get<int>();
  }
  if (j.contains("max_output_tokens_per_run"))
    cfg.max_output_tokens_per_run =
        j["max_output_tokens_per_run"].get<std::int64_t>();
  if (j.contains("mcp_command"))
    for (const auto& a : j["mcp_command"])
      cfg.mcp_command.push_back(a.get<std::string>());
  cfg.rubric_path = j.value("rubric_path", cfg.rubric_path);
  cfg.catalog_dir = j.value("catalog_dir", cfg.catalog_dir);
  cfg.blank_variance_threshold =
      j.value("blank_variance_threshold", cfg.blank_variance_threshold);
  cfg.overflow_tolerance_px =
      j.value("overflow_tolerance_px", cfg.overflow_tolerance_px);
  cfg.request_timeout_ms = j.value("request_timeout_ms",
                                   cfg.request_timeout_ms);
  cfg.step_timeout_ms = j.value("step_timeout_ms", cfg.step_timeout_ms);
  cfg.app_port_min = j.value("app_port_min", cfg.app_port_min);
  cfg.app_port_max = j.value("app_port_max", cfg.app_port_max);
  cfg.stream_cap_bytes = j.value("stream_cap_bytes", cfg.stream_cap_bytes);
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::load(const fs::path& path) {
  if (!support::file_exists(path))
    raise(ErrorCode::ConfigInvalid, "no config at " + path.string());
  json j = json::parse(support::read_text_file(path), nullptr, false);
  if (j.is_discarded())
    raise(ErrorCode::ConfigInvalid, "unparseable config " + path.string());
  return from_json(j);
}

void RunConfig::validate() const {
  if (backend != "live" && backend != "replay" && backend != "scripted")
    raise(ErrorCode::ConfigInvalid, "unknown backend '" + backend + "'");
  if (max_iterations <= 0)
    raise(ErrorCode::ConfigInvalid, "max_iterations must be positive");
  for (const auto& [role, turns] : role_turn_budgets) {
    if (!role_from_string(role))
      raise(ErrorCode::ConfigInvalid, "unknown role '" + role + "'");
    if (turns <= 0)
      raise(ErrorCode::ConfigInvalid, "turn budget for " + role +
                                          " must be positive");
  }
  if (blank_variance_threshold < 0)
    raise(ErrorCode::ConfigInvalid, "negative variance threshold");
  if (app_port_min < 0 || app_port_max < app_port_min)
    raise(ErrorCode::ConfigInvalid, "bad app port range");
}

void RunConfig::validate_backend() const {
  if (backend == "replay" && transcript_path.empty())
    raise(ErrorCode::ConfigInvalid, "replay backend needs transcript_path");
  if (backend == "scripted" && script_path.empty())
    raise(ErrorCode::ConfigInvalid, "scripted backend needs script_path");
  if (record_transcript && transcript_path.empty())
    raise(ErrorCode::ConfigInvalid, "recording needs transcript_path");
}

}  // namespace visforge::run
