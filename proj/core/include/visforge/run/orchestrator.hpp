#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "visforge/artifact/store.hpp"
#include "visforge/eval/feedback.hpp"
#include "visforge/gateway/gateway.hpp"
#include "visforge/memory/scratchbook.hpp"
#include "visforge/memory/wiki.hpp"
#include "visforge/roles/catalog.hpp"
#include "visforge/run/config.hpp"
#include "visforge/workspace/workspace.hpp"

namespace visforge::run {

struct RunOutcome {
  bool passed = false;
  std::string reason;  ///< "pass" | "budget_exhausted" | "stage_failure: ..."
};

/// Resumable record of one run. Reconstructable purely from the persisted
/// manifest, index and stage log.
struct RunState {
  fs::path run_dir;
  std::string run_id;
  fs::path task_dir;
  std::string instruction;
  RunConfig config;
  Stage stage = Stage::Init;
  int iteration = 0;  ///< completed design-loop passes
  std::optional<RunOutcome> outcome;

  bool terminal() const {
    return stage == Stage::Done || stage == Stage::Failed;
  }
};

enum class FixHandler { OrchestratorDirect, VisDesigner };

struct FixRoute {
  std::string issue_id;
  FixHandler handler;
};

/// Rule table: render/interaction issues go to the VIS designer,
/// data/layout/task-fit issues the orchestrator fixes directly. Minor
/// issues are never routed; all-minor feedback yields an empty list.
std::vector<FixRoute> route_fixes(const eval::FeedbackData& feedback);

bool legal_transition(Stage from, Stage to);

/// Drives runs end to end: owns the gateway, catalog, wiki and per-stage
/// role execution. One driver may host several runs sequentially; distinct
/// run directories may be driven concurrently by separate processes.
class RunDriver {
 public:
  /// `root` holds runs/ and wiki/. A null backend is built from the
  /// config at start_run/resume time.
  RunDriver(fs::path root, std::shared_ptr<gateway::Backend> backend = {});

  RunState start_run(const fs::path& task_dir, const std::string& instruction,
                     RunConfig config);

  /// Executes exactly one stage and applies the transition rule.
  /// Unrecoverable stage errors land in stage = Failed with the reason in
  /// the outcome; prior artifacts are always retained.
  void advance(RunState& state);

  /// Runs until Done/Failed, or until `stop_after` completes.
  void run_to_completion(RunState& state,
                         std::optional<Stage> stop_after = std::nullopt);

  /// Rebuilds state from disk, verifying every stored hash first.
  /// Throws UnknownRun or CorruptRun; never re-executes a stage whose
  /// artifact exists and validates.
  RunState resume(const fs::path& run_dir);

  gateway::Gateway& gateway();
  const fs::path& root() const { return root_; }
  fs::path runs_root() const { return root_ / "runs"; }
  memory::Wiki wiki() const { return memory::Wiki(root_ / "wiki"); }

  /// Progress callback for CLI streaming (stage, detail).
  std::function<void(Stage, const std::string&)> on_stage;

 private:
  void ensure_services(const RunConfig& config);
  roles::RoleSpec role_with_budget(RoleName name,
                                   const RunConfig& config) const;

  void exec_eda(RunState& state);
  void exec_environment(RunState& state);
  void exec_plan(RunState& state);
  void exec_implement(RunState& state);
  void exec_evaluate(RunState& state);
  void exec_memory_maintain(RunState& state);

  void write_manifest(const RunState& state);
  void log_stage(RunState& state, Stage stage, const std::string& outcome,
                 const std::string& entered_at);

  fs::path root_;
  std::shared_ptr<gateway::Backend> backend_;
  std::unique_ptr<gateway::Gateway> gateway_;
  std::optional<roles::Catalog> catalog_;
  std::string catalog_dir_;
};

/// ISO-8601 UTC timestamp helper shared by the run machinery.
std::string iso_timestamp();

}  // namespace visforge::run
