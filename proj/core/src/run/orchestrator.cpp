#include "visforge/run/orchestrator.hpp"

#include <chrono>

#include "visforge/artifact/body.hpp"
#include "visforge/build_info.hpp"
#include "visforge/error.hpp"
#include "visforge/eval/checks.hpp"
#include "visforge/eval/rubric.hpp"
#include "visforge/mcp/client.hpp"
#include "visforge/roles/runner.hpp"
#include "visforge/roles/tool_registry.hpp"
#include "visforge/support/digest.hpp"
#include "visforge/support/text.hpp"
#include "visforge/workspace/app_server.hpp"

namespace visforge::run {

using artifact::ArtifactStore;
using artifact::EnvelopeFields;
using nlohmann::json;

std::string iso_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool legal_transition(Stage from, Stage to) {
  if (to == Stage::Failed) return from != Stage::Done;
  switch (from) {
    case Stage::Init: return to == Stage::Eda;
    case Stage::Eda: return to == Stage::Environment;
    case Stage::Environment: return to == Stage::Plan;
    case Stage::Plan: return to == Stage::Implement;
    case Stage::Implement: return to == Stage::Evaluate;
    case Stage::Evaluate:
      return to == Stage::Implement || to == Stage::MemoryMaintain;
    case Stage::MemoryMaintain: return to == Stage::Done;
    case Stage::Done:
    case Stage::Failed: return false;
  }
  return false;
}

std::vector<FixRoute> route_fixes(const eval::FeedbackData& feedback) {
  std::vector<FixRoute> routes;
  for (const auto& issue : feedback.issues) {
    if (issue.severity == "minor") continue;
    FixHandler handler =
        (issue.category == "render" || issue.category == "interaction")
            ? FixHandler::VisDesigner
            : FixHandler::OrchestratorDirect;
    routes.push_back({issue.issue_id, handler});
  }
  return routes;
}

// ---------------------------------------------------------------------------

RunDriver::RunDriver(fs::path root, std::shared_ptr<gateway::Backend> backend)
    : root_(std::move(root)), backend_(std::move(backend)) {}

gateway::Gateway& RunDriver::gateway() {
  if (!gateway_)
    raise(ErrorCode::BackendUnavailable, "gateway not initialized yet");
  return *gateway_;
}

void RunDriver::ensure_services(const RunConfig& config) {
  if (!backend_) {
    if (config.backend == "replay") {
      backend_ = gateway::ReplayBackend::open(config.transcript_path);
    } else if (config.backend == "scripted") {
      backend_ = gateway::ScriptedBackend::from_file(config.script_path);
    } else {
      backend_ = std::make_shared<gateway::LiveBackend>(
          gateway::LiveBackend::config_from_env());
    }
    if (config.record_transcript)
      backend_ = std::make_shared<gateway::RecordingBackend>(
          backend_, config.transcript_path);
  }
  if (!gateway_) {
    gateway::BudgetCaps caps;
    caps.max_output_tokens_per_run = config.max_output_tokens_per_run;
    gateway_ = std::make_unique<gateway::Gateway>(backend_, caps);
  }
  const std::string dir =
      roles::resolve_catalog_dir(config.catalog_dir).string();
  if (!catalog_ || catalog_dir_ != dir) {
    catalog_ = roles::default_catalog(dir);
    catalog_dir_ = dir;
    // Tools a run can register, browser tools included: the catalog must
    // not allow anything outside this universe.
    catalog_->validate({"write_file", "read_file", "list_files",
                        "run_command", "read_task_file", "list_task_files",
                        "scratchbook_append", "navigate", "click",
                        "set_value", "wait_for_selector", "screenshot",
                        "console_messages", "dom_summary"});
  }
}

roles::RoleSpec RunDriver::role_with_budget(RoleName name,
                                            const RunConfig& config) const {
  roles::RoleSpec spec = catalog_->find(name);
  auto it = config.role_turn_budgets.find(std::string(to_string(name)));
  if (it != config.role_turn_budgets.end()) spec.max_turns = it->second;
  return spec;
}

// --- manifest bookkeeping ---------------------------------------------------

namespace {

json load_manifest(const fs::path& run_dir) {
  fs::path p = run_dir / "manifest.json";
  if (!support::file_exists(p))
    raise(ErrorCode::UnknownRun, "no manifest at " + p.string());
  json m = json::parse(support::read_text_file(p), nullptr, false);
  if (m.is_discarded())
    raise(ErrorCode::CorruptRun, "manifest unparseable: " + p.string());
  return m;
}

void save_manifest(const fs::path& run_dir, const json& manifest) {
  support::write_text_file(run_dir / "manifest.json",
                           manifest.dump(2) + "\n");
}

std::string make_run_id(const fs::path& runs_root, const fs::path& task_dir,
                        const std::string& instruction) {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y%m%d-%H%M%S", &tm);
  auto nanos = std::chrono::duration_cast<std::chrono::nanoseconds>(
                   now.time_since_epoch())
                   .count();
  std::string salt = support::short_digest(task_dir.string() + instruction +
                                           std::to_string(nanos))
                         .substr(0, 6);
  std::string base = "r-" + std::string(stamp) + "-" + salt;
  std::string id = base;
  int bump = 1;
  while (fs::exists(runs_root / id)) id = base + "-" + std::to_string(++bump);
  return id;
}

}  // namespace

void RunDriver::write_manifest(const RunState& state) {
  json manifest = load_manifest(state.run_dir);
  manifest["stage"] = to_string(state.stage);
  manifest["iteration"] = state.iteration;
  if (state.outcome)
    manifest["outcome"] = {{"passed", state.outcome->passed},
                           {"reason", state.outcome->reason}};
  if (gateway_) manifest["usage"] = gateway_->ledger().to_json();
  save_manifest(state.run_dir, manifest);
}

void RunDriver::log_stage(RunState& state, Stage stage,
                          const std::string& outcome,
                          const std::string& entered_at) {
  json manifest = load_manifest(state.run_dir);
  manifest["stage_log"].push_back({{"stage", to_string(stage)},
                                   {"entered_at", entered_at},
                                   {"exited_at", iso_timestamp()},
                                   {"outcome", outcome}});
  save_manifest(state.run_dir, manifest);
  write_manifest(state);
}

// --- run lifecycle ----------------------------------------------------------

RunState RunDriver::start_run(const fs::path& task_dir,
                              const std::string& instruction,
                              RunConfig config) {
  if (!fs::exists(task_dir) || !fs::is_directory(task_dir))
    raise(ErrorCode::TaskDirMissing, task_dir.string());
  config.validate();
  config.validate_backend();
  ensure_services(config);

  const std::string entered = iso_timestamp();
  fs::create_directories(runs_root());
  RunState state;
  state.run_id = make_run_id(runs_root(), task_dir, instruction);
  state.run_dir = runs_root() / state.run_id;
  state.task_dir = fs::absolute(task_dir);
  state.instruction = instruction;
  state.config = std::move(config);

  ws::Workspace::init(state.run_dir, state.task_dir);
  ArtifactStore::create(state.run_dir, state.run_id);

  json manifest = {{"run_id", state.run_id},
                   {"task_dir", state.task_dir.string()},
                   {"instruction", instruction},
                   {"config", state.config.to_json()},
                   {"stage_log", json::array()},
                   {"stage", to_string(Stage::Init)},
                   {"iteration", 0}};
  save_manifest(state.run_dir, manifest);

  state.stage = Stage::Eda;
  log_stage(state, Stage::Init, "ok", entered);
  if (on_stage) on_stage(Stage::Init, state.run_id);
  return state;
}

void RunDriver::advance(RunState& state) {
  if (state.terminal())
    raise(ErrorCode::StageFailure,
          "run is already " + std::string(to_string(state.stage)));
  ensure_services(state.config);

  const Stage executing = state.stage;
  const std::string entered = iso_timestamp();
  std::string outcome = "ok";
  try {
    switch (executing) {
      case Stage::Eda: exec_eda(state); break;
      case Stage::Environment: exec_environment(state); break;
      case Stage::Plan: exec_plan(state); break;
      case Stage::Implement: exec_implement(state); break;
      case Stage::Evaluate: exec_evaluate(state); break;
      case Stage::MemoryMaintain: exec_memory_maintain(state); break;
      default:
        raise(ErrorCode::StageFailure,
              "cannot execute stage " + std::string(to_string(executing)));
    }
    if (executing == Stage::Evaluate)
      outcome = state.stage == Stage::MemoryMaintain
                    ? (state.outcome && state.outcome->passed
                           ? "pass"
                           : "budget_exhausted")
                    : "blocking_issues";
  } catch (const Error& e) {
    state.stage = Stage::Failed;
    state.outcome = RunOutcome{false, "stage_failure: " + std::string(
                                          to_string(e.code())) +
                                          ": " + e.detail()};
    log_stage(state, executing, "failed: " + std::string(e.what()), entered);
    if (on_stage) on_stage(Stage::Failed, e.what());
    return;
  }
  log_stage(state, executing, outcome, entered);
  if (on_stage) on_stage(executing, outcome);
}

void RunDriver::run_to_completion(RunState& state,
                                  std::optional<Stage> stop_after) {
  while (!state.terminal()) {
    Stage executing = state.stage;
    advance(state);
    if (stop_after && executing == *stop_after) return;
  }
}

// --- stage executors --------------------------------------------------------

namespace {

/// Wires the scratchbook tool: every role may capture lessons.
void register_scratchbook_tool(roles::ToolRegistry& registry,
                               memory::Scratchbook& scratchbook,
                               const ArtifactStore& store, RoleName role,
                               Stage stage) {
  gateway::ToolSchema schema;
  schema.name = "scratchbook_append";
  schema.description =
      "Record a durable lesson for future runs. refs may name artifact ids "
      "of this run.";
  schema.parameters = {{"type", "object"},
                       {"properties",
                        {{"lesson", {{"type", "string"}}},
                         {"tags", {{"type", "array"}}},
                         {"refs", {{"type", "array"}}}}},
                       {"required", {"lesson"}}};
  registry.add(schema, [&scratchbook, &store, role, stage](const json& args) {
    memory::ScratchbookEntry entry;
    entry.author_role = role;
    entry.stage = stage;
    entry.lesson = args.value("lesson", "");
    for (const auto& t : args.value("tags", json::array()))
      entry.tags.push_back(t.get<std::string>());
    for (const auto& r : args.value("refs", json::array()))
      entry.refs.push_back(r.get<std::string>());
    std::string id = scratchbook.append(std::move(entry), &store);
    return json{{"ok", true}, {"entry_id", id}};
  });
}

json parse_meta(const ArtifactStore& store, ArtifactKind kind) {
  auto env = store.latest(kind);
  if (!env)
    raise(ErrorCode::MissingInputArtifact, std::string(to_string(kind)));
  auto doc = artifact::parse_document(store.read_body(*env));
  if (!doc)
    raise(ErrorCode::CorruptRun,
          env->artifact_id + " lost its front matter");
  return doc->meta;
}

std::vector<std::string> known_variables_of(const json& eda_meta) {
  std::vector<std::string> vars;
  for (const auto& v : eda_meta.value("variable_catalog", json::array()))
    if (v.contains("name")) vars.push_back(v["name"].get<std::string>());
  return vars;
}

}  // namespace

void RunDriver::exec_eda(RunState& state) {
  ArtifactStore store(state.run_dir);
  ws::Workspace workspace = ws::Workspace::open(state.run_dir);
  memory::Scratchbook scratchbook(state.run_dir, state.run_id);

  roles::ToolRegistry registry;
  roles::register_task_tools(registry, workspace);
  roles::register_workspace_tools(registry, workspace);
  register_scratchbook_tool(registry, scratchbook, store, RoleName::Eda,
                            Stage::Eda);

  std::string listing;
  for (const auto& f : workspace.list_task_files()) listing += f + "\n";

  roles::ContextSources sources;
  sources.store = &store;
  sources.instruction = state.instruction;
  sources.extra_sections = {{"Task files", listing}};

  auto result = roles::run_role(role_with_budget(RoleName::Eda, state.config),
                                *catalog_, *gateway_, registry, sources,
                                Stage::Eda);
  support::write_text_file(state.run_dir / "transcripts" / "eda.json",
                           result.transcript.to_json().dump(2) + "\n");
  if (!result.emitted())
    raise(ErrorCode::StageFailure,
          "EDA role ended with " +
              std::string(to_string(result.transcript.status)));

  store.write({ArtifactKind::EdaReport, RoleName::Eda, 0}, result.body);
  state.stage = Stage::Environment;
}

void RunDriver::exec_environment(RunState& state) {
  ArtifactStore store(state.run_dir);
  ws::Workspace workspace = ws::Workspace::open(state.run_dir);
  memory::Scratchbook scratchbook(state.run_dir, state.run_id);

  roles::ToolRegistry registry;
  roles::register_workspace_tools(registry, workspace);
  register_scratchbook_tool(registry, scratchbook, store,
                            RoleName::EnvironmentBuilder, Stage::Environment);

  roles::ContextSources sources;
  sources.store = &store;
  sources.instruction = state.instruction;

  auto result = roles::run_role(
      role_with_budget(RoleName::EnvironmentBuilder, state.config), *catalog_,
      *gateway_, registry, sources, Stage::Environment);
  support::write_text_file(state.run_dir / "transcripts" / "environment.json",
                           result.transcript.to_json().dump(2) + "\n");
  if (!result.emitted())
    raise(ErrorCode::StageFailure,
          "EnvironmentBuilder ended with " +
              std::string(to_string(result.transcript.status)));

  store.write({ArtifactKind::EnvironmentManifest,
               RoleName::EnvironmentBuilder, 0},
              result.body);

  // Environment failures are attributed to this stage, distinctly from
  // later rendering or interaction problems.
  auto doc = artifact::parse_document(result.body);
  for (const auto& cmd :
       doc->meta.value("install_commands", json::array())) {
    ws::CommandSpec spec;
    for (const auto& a : cmd) spec.argv.push_back(a.get<std::string>());
    ws::CommandResult r = workspace.execute(spec);
    if (r.exit_code != 0)
      raise(ErrorCode::StageFailure,
            "install command failed (exit " + std::to_string(r.exit_code) +
                "): " + r.stderr_excerpt.substr(0, 200));
  }
  state.stage = Stage::Plan;
}

void RunDriver::exec_plan(RunState& state) {
  ArtifactStore store(state.run_dir);
  ws::Workspace workspace = ws::Workspace::open(state.run_dir);
  memory::Scratchbook scratchbook(state.run_dir, state.run_id);

  roles::ToolRegistry registry;
  register_scratchbook_tool(registry, scratchbook, store, RoleName::Planner,
                            Stage::Plan);

  roles::ContextSources sources;
  sources.store = &store;
  sources.instruction = state.instruction;

  artifact::ValidationContext vctx;
  vctx.known_variables =
      known_variables_of(parse_meta(store, ArtifactKind::EdaReport));

  auto result = roles::run_role(
      role_with_budget(RoleName::Planner, state.config), *catalog_, *gateway_,
      registry, sources, Stage::Plan, vctx);
  support::write_text_file(state.run_dir / "transcripts" / "plan.json",
                           result.transcript.to_json().dump(2) + "\n");
  if (!result.emitted())
    raise(ErrorCode::StageFailure,
          "Planner ended with " +
              std::string(to_string(result.transcript.status)));

  store.write({ArtifactKind::DesignPlan, RoleName::Planner, 0}, result.body);
  state.stage = Stage::Implement;
}

void RunDriver::exec_implement(RunState& state) {
  ArtifactStore store(state.run_dir);
  ws::Workspace workspace = ws::Workspace::open(state.run_dir);
  memory::Scratchbook scratchbook(state.run_dir, state.run_id);
  const int pass = state.iteration + 1;

  std::vector<RoleName> executors;
  std::vector<std::pair<std::string, std::string>> routed_sections;
  if (pass == 1) {
    executors = {RoleName::Orchestrator};
  } else {
    auto feedback_env = store.latest(ArtifactKind::Feedback);
    auto feedback =
        eval::feedback_from_body(store.read_body(*feedback_env));
    if (!feedback)
      raise(ErrorCode::CorruptRun, "latest feedback unparseable");
    std::vector<FixRoute> routes = route_fixes(*feedback);
    std::string direct, designer;
    for (const auto& r : routes) {
      (r.handler == FixHandler::OrchestratorDirect ? direct : designer) +=
          "- " + r.issue_id + "\n";
    }
    if (!direct.empty()) {
      executors.push_back(RoleName::Orchestrator);
      routed_sections.push_back({"Issues routed to you", direct});
    }
    if (!designer.empty()) {
      executors.push_back(RoleName::VisDesigner);
      routed_sections.push_back({"Issues routed to you", designer});
    }
    if (executors.empty()) {
      // All-minor feedback cannot reach here through the gate, but routing
      // is total: the orchestrator sweeps anything left over.
      executors = {RoleName::Orchestrator};
      routed_sections.push_back({"Issues routed to you", "- (none)\n"});
    }
  }

  for (size_t i = 0; i < executors.size(); ++i) {
    RoleName role_name = executors[i];
    roles::ToolRegistry registry;
    roles::register_workspace_tools(registry, workspace);
    roles::register_task_tools(registry, workspace);
    register_scratchbook_tool(registry, scratchbook, store, role_name,
                              Stage::Implement);

    roles::ContextSources sources;
    sources.store = &store;
    sources.instruction = state.instruction;
    sources.iteration = pass;
    if (pass > 1 && i < routed_sections.size())
      sources.extra_sections = {routed_sections[i]};

    auto result = roles::run_role(role_with_budget(role_name, state.config),
                                  *catalog_, *gateway_, registry, sources,
                                  Stage::Implement);
    const std::string tag = "implement-i" + std::to_string(pass) + "-" +
                            support::to_lower(std::string(
                                to_string(role_name)));
    support::write_text_file(
        state.run_dir / "transcripts" / (tag + ".json"),
        result.transcript.to_json().dump(2) + "\n");
    if (!result.emitted())
      raise(ErrorCode::StageFailure,
            std::string(to_string(role_name)) + " ended with " +
                std::string(to_string(result.transcript.status)));

    // The bundle must be real before it is recorded: resolve each listed
    // file on disk and stamp its hash and size into the artifact body.
    auto doc = artifact::parse_document(result.body);
    fs::path bundle_root =
        state.run_dir / doc->meta["root"].get<std::string>();
    if (!support::path_within(state.run_dir, bundle_root))
      raise(ErrorCode::PathViolation, "bundle root escapes the run dir");
    for (auto& f : doc->meta["files"]) {
      fs::path p = bundle_root / f["path"].get<std::string>();
      if (!support::file_exists(p))
        raise(ErrorCode::StageFailure,
              "bundle names a missing file: " + p.string());
      const std::string digest = support::sha256_file(p.string());
      if (f.contains("sha256") && f["sha256"].get<std::string>() != digest)
        raise(ErrorCode::StageFailure,
              "bundle hash mismatch for " + f["path"].get<std::string>());
      f["sha256"] = digest;
      f["bytes"] = static_cast<std::int64_t>(fs::file_size(p));
    }
    store.write({ArtifactKind::AppBundleRef, role_name, pass},
                artifact::serialize_document(doc->meta, doc->prose));
  }

  state.stage = Stage::Evaluate;
}

void RunDriver::exec_evaluate(RunState& state) {
  ArtifactStore store(state.run_dir);
  ws::Workspace workspace = ws::Workspace::open(state.run_dir);
  const int pass = state.iteration + 1;

  json plan_meta = parse_meta(store, ArtifactKind::DesignPlan);
  json bundle = parse_meta(store, ArtifactKind::AppBundleRef);
  fs::path app_root = state.run_dir / bundle["root"].get<std::string>();

  ws::AppServer server = ws::AppServer::serve(
      app_root, state.config.app_port_min, state.config.app_port_max);

  if (state.config.mcp_command.empty())
    raise(ErrorCode::StageFailure, "no browser server configured");
  mcp::EndpointOptions mcp_opts;
  mcp_opts.command = state.config.mcp_command;
  mcp_opts.request_timeout =
      std::chrono::milliseconds(state.config.request_timeout_ms);
  mcp_opts.handshake_timeout = mcp_opts.request_timeout;
  mcp::McpEndpoint endpoint(mcp_opts);
  endpoint.initialize();

  eval::CheckThresholds thresholds;
  thresholds.blank_variance = state.config.blank_variance_threshold;
  thresholds.overflow_tolerance_px = state.config.overflow_tolerance_px;

  std::vector<eval::CheckSpec> specs = eval::checks_from_plan(plan_meta);
  std::vector<eval::CheckResult> results = eval::run_mechanistic_checks(
      server.url() + "/index.html", specs, endpoint, workspace.probes_dir(),
      pass, thresholds);

  fs::path rubric_path = state.config.rubric_path.empty()
                             ? fs::path(catalog_dir_) / "rubric/default.json"
                             : fs::path(state.config.rubric_path);
  std::vector<eval::RubricCriterion> rubric = eval::load_rubric(rubric_path);

  std::string evidence = "Instruction: " + state.instruction + "\n\n";
  evidence += "Design plan:\n" + plan_meta.dump(2) + "\n\n";
  evidence += "Mechanistic check results:\n";
  for (const auto& r : results)
    evidence += "- " + r.check_id + ": " +
                std::string(eval::to_string(r.verdict)) +
                (r.note.empty() ? "" : " (" + r.note + ")") + " " +
                r.measured.dump() + "\n";

  const roles::RoleSpec& evaluator = catalog_->find(RoleName::Evaluator);
  std::string judge_prompt = support::render_template(
      evaluator.system_prompt_template,
      {{"role_name", "Evaluator"},
       {"output_kind", "Scorecard"},
       {"artifact_fence", roles::kArtifactFence}});
  eval::ScorecardData scorecard = eval::score_rubric(
      evidence, rubric, *gateway_, judge_prompt, Stage::Evaluate);

  eval::FeedbackData feedback =
      eval::compile_feedback(results, scorecard, rubric, pass);

  store.write({ArtifactKind::Scorecard, RoleName::Evaluator, pass},
              eval::scorecard_body(scorecard));
  store.write({ArtifactKind::Feedback, RoleName::Evaluator, pass},
              eval::feedback_body(feedback));

  server.stop();
  endpoint.close();

  state.iteration = pass;
  if (feedback.pass) {
    state.outcome = RunOutcome{true, "pass"};
    state.stage = Stage::MemoryMaintain;
  } else if (state.iteration < state.config.max_iterations) {
    state.stage = Stage::Implement;
  } else {
    state.outcome = RunOutcome{false, "budget_exhausted"};
    state.stage = Stage::MemoryMaintain;
  }
}

void RunDriver::exec_memory_maintain(RunState& state) {
  ArtifactStore store(state.run_dir);
  memory::Scratchbook scratchbook(state.run_dir, state.run_id);
  memory::Wiki wiki_store = wiki();

  memory::DistillOutcome outcome =
      memory::distill(store, scratchbook, *catalog_, *gateway_, wiki_store,
                      state.instruction);
  for (const auto& body : outcome.applied_bodies)
    store.write({ArtifactKind::WikiPageUpdate, RoleName::MemoryMaintainer,
                 state.iteration},
                body);
  if (!outcome.dropped.empty()) {
    std::string log;
    for (const auto& [body, reason] : outcome.dropped)
      log += reason + "\n";
    support::append_text_file(state.run_dir / "distill-dropped.log", log);
  }
  if (outcome.applied_bodies.empty())
    raise(ErrorCode::StageFailure,
          "memory maintainer produced no valid page update");

  scratchbook.close();
  if (!state.outcome)
    state.outcome = RunOutcome{false, "no evaluation outcome"};
  state.stage = Stage::Done;
}

// --- resume -----------------------------------------------------------------

RunState RunDriver::resume(const fs::path& run_dir) {
  json manifest = load_manifest(run_dir);

  RunState state;
  state.run_dir = run_dir;
  state.run_id = manifest.value("run_id", run_dir.filename().string());
  state.task_dir = fs::path(manifest.value("task_dir", ""));
  state.instruction = manifest.value("instruction", "");
  state.config = RunConfig::from_json(manifest.value("config", json::object()));
  ensure_services(state.config);

  ArtifactStore store(run_dir);
  if (auto corrupt = store.first_corrupt())
    raise(ErrorCode::CorruptRun, "artifact fails its hash: " + *corrupt);

  if (manifest.contains("outcome") &&
      manifest.value("stage", "") == to_string(Stage::Failed)) {
    state.stage = Stage::Failed;
    state.outcome = RunOutcome{manifest["outcome"].value("passed", false),
                               manifest["outcome"].value("reason", "")};
    return state;
  }

  auto latest_feedback = store.latest(ArtifactKind::Feedback);
  state.iteration = latest_feedback ? latest_feedback->iteration : 0;
  bool passed = false;
  if (latest_feedback) {
    auto feedback = eval::feedback_from_body(store.read_body(*latest_feedback));
    passed = feedback && feedback->pass;
  }

  if (!store.latest(ArtifactKind::EdaReport)) {
    state.stage = Stage::Eda;
  } else if (!store.latest(ArtifactKind::EnvironmentManifest)) {
    state.stage = Stage::Environment;
  } else if (!store.latest(ArtifactKind::DesignPlan)) {
    state.stage = Stage::Plan;
  } else {
    bool loop_done =
        passed || state.iteration >= state.config.max_iterations;
    if (!loop_done) {
      const int next_pass = state.iteration + 1;
      bool bundle_ready = false;
      for (const auto& env : store.list())
        if (env.kind == ArtifactKind::AppBundleRef &&
            env.iteration == next_pass)
          bundle_ready = true;
      state.stage = bundle_ready ? Stage::Evaluate : Stage::Implement;
    } else {
      state.outcome =
          RunOutcome{passed, passed ? "pass" : "budget_exhausted"};
      state.stage = store.latest(ArtifactKind::WikiPageUpdate)
                        ? Stage::Done
                        : Stage::MemoryMaintain;
      if (state.stage == Stage::Done) {
        memory::Scratchbook(run_dir, state.run_id).close();
        write_manifest(state);  // complete interrupted bookkeeping
      }
    }
  }
  return state;
}

}  // namespace visforge::run
