#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "visforge/mcp/probe.hpp"

namespace visforge::eval {

namespace fs = std::filesystem;
using nlohmann::json;

/// One deterministic browser check. Kinds:
///   BlankPanel      target panel renders something (pixel variance +
///                   child-element count, both must look blank to fail)
///   ConsoleError    no error-level console messages on load
///   LinkedViewSync  after `interaction` on `source`, at least one target's
///                   (element count, subtree hash) pair changed
///   LayoutOverflow  no tracked element exceeds the viewport beyond the
///                   tolerance
///   ControlResponds clicking `control` changes the `response` selector
struct CheckSpec {
  std::string check_id;
  std::string kind;
  std::string target;    ///< BlankPanel panel; ControlResponds control
  std::string response;  ///< ControlResponds observed selector
  std::string source;    ///< LinkedViewSync interaction source
  std::vector<std::string> targets;  ///< LinkedViewSync / LayoutOverflow
  std::vector<mcp::ProbeStep> interaction;
  std::optional<double> variance_threshold;

  json to_json() const;
  static std::optional<CheckSpec> from_json(const json& j);
};

struct CheckThresholds {
  double blank_variance = 25.0;  ///< calibrated on the bundled fixtures
  int overflow_tolerance_px = 8;
};

enum class Verdict { Pass, Fail, Inconclusive };

std::string_view to_string(Verdict v);

struct CheckResult {
  std::string check_id;
  std::string kind;
  Verdict verdict = Verdict::Inconclusive;
  std::string probe_ref;  ///< probe JSON path relative to the run dir
  json measured;          ///< variance, deltas, console excerpts
  std::string note;

  json to_json() const;
};

/// The default battery generated from a design plan: one BlankPanel per
/// panel, one ConsoleError, one LayoutOverflow over all panels, one
/// LinkedViewSync per linkage, plus the plan's own validation_checks.
std::vector<CheckSpec> checks_from_plan(const json& plan_meta);

/// Fallback battery when no plan exists (standalone `eval` on an app dir):
/// panels are discovered by the browser's panel convention.
std::vector<CheckSpec> default_checks(
    const std::vector<std::string>& panel_selectors);

/// Executes every spec via browser probes. Mechanistic by construction:
/// verdicts are a pure function of probe evidence and thresholds. A page
/// that cannot be loaded yields Inconclusive verdicts carrying the
/// navigation evidence, never an exception.
std::vector<CheckResult> run_mechanistic_checks(
    const std::string& app_url, const std::vector<CheckSpec>& specs,
    mcp::McpEndpoint& endpoint, const fs::path& probes_dir, int iteration,
    const CheckThresholds& thresholds = {});

}  // namespace visforge::eval
