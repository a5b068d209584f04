#include "visforge/cli/commands.hpp"

#include <iostream>

#include "visforge/artifact/body.hpp"
#include "visforge/artifact/store.hpp"
#include "visforge/error.hpp"
#include "visforge/eval/checks.hpp"
#include "visforge/eval/feedback.hpp"
#include "visforge/eval/rubric.hpp"
#include "visforge/memory/wiki.hpp"
#include "visforge/roles/catalog.hpp"
#include "visforge/run/orchestrator.hpp"
#include "visforge/support/text.hpp"
#include "visforge/workspace/app_server.hpp"

namespace visforge::cli {

using nlohmann::json;

namespace {

int report_error(const Error& e, std::ostream& err) {
  err << e.what() << "\n";
  return exit_code_for(e.code());
}

int finish_run(run::RunDriver& driver, run::RunState& state,
               std::optional<Stage> stop_after, const GlobalOptions& opts,
               std::ostream& out) {
  driver.run_to_completion(state, stop_after);

  if (opts.json_output) {
    json summary = {{"run_id", state.run_id},
                    {"run_dir", state.run_dir.string()},
                    {"stage", to_string(state.stage)},
                    {"iteration", state.iteration}};
    if (state.outcome)
      summary["outcome"] = {{"passed", state.outcome->passed},
                            {"reason", state.outcome->reason}};
    out << summary.dump(2) << "\n";
  } else {
    out << "run " << state.run_id << " at stage " << to_string(state.stage);
    if (state.outcome)
      out << " (" << (state.outcome->passed ? "passed" : "not passed") << ": "
          << state.outcome->reason << ")";
    out << "\n";
  }

  if (stop_after && !state.terminal()) return 0;  // intentional checkpoint
  if (state.stage == Stage::Failed) return exit_code_for(
      ErrorCode::StageFailure);
  return state.outcome && state.outcome->passed ? 0 : 1;
}

}  // namespace

int cmd_run(const GlobalOptions& opts, const fs::path& task_dir,
            const std::string& instruction, run::RunConfig config,
            std::optional<Stage> stop_after, std::ostream& out,
            std::ostream& err) {
  try {
    run::RunDriver driver(opts.root);
    driver.on_stage = [&](Stage stage, const std::string& detail) {
      out << "[stage] " << to_string(stage) << ": " << detail << "\n";
    };
    run::RunState state = driver.start_run(task_dir, instruction, config);
    return finish_run(driver, state, stop_after, opts, out);
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

int cmd_resume(const GlobalOptions& opts, const fs::path& run_dir,
               std::ostream& out, std::ostream& err) {
  try {
    run::RunDriver driver(opts.root);
    driver.on_stage = [&](Stage stage, const std::string& detail) {
      out << "[stage] " << to_string(stage) << ": " << detail << "\n";
    };
    run::RunState state = driver.resume(run_dir);
    return finish_run(driver, state, std::nullopt, opts, out);
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

int cmd_inspect(const GlobalOptions& opts, const fs::path& run_dir,
                const std::string& kind_filter, std::optional<int> iteration,
                std::ostream& out, std::ostream& err) {
  try {
    artifact::ArtifactStore store(run_dir);
    if (auto corrupt = store.first_corrupt()) {
      err << "corrupt artifact: " << *corrupt << "\n";
      return exit_code_for(ErrorCode::CorruptRun);
    }

    if (!kind_filter.empty()) {
      auto kind = kind_from_string(kind_filter);
      if (!kind) raise(ErrorCode::UnknownKind, kind_filter);
      for (const auto& env : store.list()) {
        if (env.kind != *kind) continue;
        if (iteration && env.iteration != *iteration) continue;
        out << store.read_body(env);
        return 0;
      }
      err << "no such artifact in run\n";
      return exit_code_for(ErrorCode::UnknownRun);
    }

    if (opts.json_output) {
      json trail = json::array();
      for (const auto& env : store.list()) trail.push_back(env.to_json());
      out << trail.dump(2) << "\n";
    } else {
      out << "seq  iter  kind                 role               id\n";
      for (const auto& env : store.list()) {
        char line[256];
        std::snprintf(line, sizeof(line), "%-4d %-5d %-20s %-18s %s\n",
                      env.seq, env.iteration,
                      std::string(to_string(env.kind)).c_str(),
                      std::string(to_string(env.author_role)).c_str(),
                      env.artifact_id.c_str());
        out << line;
      }
    }
    return 0;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

int cmd_eval(const GlobalOptions& opts, const std::string& app_dir_or_url,
             const std::string& rubric_path, const std::string& checks_path,
             run::RunConfig config, std::ostream& out, std::ostream& err) {
  try {
    if (config.mcp_command.empty())
      raise(ErrorCode::ConfigInvalid, "eval needs mcp_command in the config");

    // Serve a directory; use a URL as-is.
    std::optional<ws::AppServer> server;
    std::string url = app_dir_or_url;
    if (url.rfind("http://", 0) != 0 && url.rfind("https://", 0) != 0) {
      server = ws::AppServer::serve(fs::path(app_dir_or_url),
                                    config.app_port_min, config.app_port_max);
      url = server->url() + "/index.html";
    }

    mcp::EndpointOptions mcp_opts;
    mcp_opts.command = config.mcp_command;
    mcp_opts.request_timeout =
        std::chrono::milliseconds(config.request_timeout_ms);
    mcp_opts.handshake_timeout = mcp_opts.request_timeout;
    mcp::McpEndpoint endpoint(mcp_opts);
    endpoint.initialize();

    // Ad-hoc run dir for the graded evidence.
    fs::path runs = opts.root / "runs";
    fs::create_directories(runs);
    std::string eval_id = "eval-" + run::iso_timestamp();
    for (char& c : eval_id)
      if (c == ':') c = '-';
    int bump = 1;
    std::string base = eval_id;
    while (fs::exists(runs / eval_id))
      eval_id = base + "-" + std::to_string(++bump);
    fs::path eval_dir = runs / eval_id;
    artifact::ArtifactStore store =
        artifact::ArtifactStore::create(eval_dir, eval_id);

    std::vector<eval::CheckSpec> specs;
    if (!checks_path.empty()) {
      json doc = json::parse(support::read_text_file(checks_path), nullptr,
                             false);
      if (doc.is_discarded() || !doc.contains("checks"))
        raise(ErrorCode::ConfigInvalid,
              "checks file needs {\"checks\": [...]}");
      for (const auto& c : doc["checks"]) {
        auto spec = eval::CheckSpec::from_json(c);
        if (!spec)
          raise(ErrorCode::ConfigInvalid, "bad check spec: " + c.dump());
        specs.push_back(*spec);
      }
    } else {
      // Discover panels by the `.panel` convention, then apply defaults.
      mcp::ToolResult nav = endpoint.invoke("navigate", {{"url", url}});
      if (nav.is_error || !nav.value.value("ok", false))
        raise(ErrorCode::AppUnreachable, "cannot load " + url);
      mcp::ToolResult summary =
          endpoint.invoke("dom_summary", {{"selectors", json::array()}});
      std::vector<std::string> panels;
      for (const auto& e :
           summary.value.value("elements", json::array()))
        panels.push_back(e.value("selector", ""));
      specs = eval::default_checks(panels);
    }

    eval::CheckThresholds thresholds;
    thresholds.blank_variance = config.blank_variance_threshold;
    thresholds.overflow_tolerance_px = config.overflow_tolerance_px;
    auto results = eval::run_mechanistic_checks(
        url, specs, endpoint, eval_dir / "probes", 1, thresholds);

    bool all_unreachable = !results.empty();
    for (const auto& r : results)
      all_unreachable &= r.verdict == eval::Verdict::Inconclusive &&
                         r.measured.contains("navigation_error");
    if (all_unreachable)
      raise(ErrorCode::AppUnreachable, "no check could load " + url);

    std::vector<eval::RubricCriterion> rubric;
    eval::ScorecardData scorecard;
    bool judged = false;
    if (!rubric_path.empty()) {
      rubric = eval::load_rubric(rubric_path);
      bool backend_ready =
          (config.backend == "replay" && !config.transcript_path.empty()) ||
          (config.backend == "scripted" && !config.script_path.empty()) ||
          (config.backend == "live" && getenv("VISFORGE_LLM_ENDPOINT"));
      if (backend_ready) {
        std::string evidence = "URL: " + mcp::normalize_probe_url(url) + "\n";
        for (const auto& r : results)
          evidence += "- " + r.check_id + ": " +
                      std::string(eval::to_string(r.verdict)) + "\n";
        // A lightweight judge preamble; standalone eval has no run catalog.
        std::shared_ptr<gateway::Backend> backend;
        if (config.backend == "replay")
          backend = gateway::ReplayBackend::open(config.transcript_path);
        else if (config.backend == "scripted")
          backend = gateway::ScriptedBackend::from_file(config.script_path);
        else
          backend = std::make_shared<gateway::LiveBackend>(
              gateway::LiveBackend::config_from_env());
        gateway::Gateway gw(backend);
        scorecard = eval::score_rubric(
            evidence, rubric, gw,
            "You grade visualization apps against rubric criteria on a 1-5 "
            "scale. Respond with JSON.",
            Stage::Evaluate);
        judged = true;
      }
    }

    eval::FeedbackData feedback =
        eval::compile_feedback(results, scorecard, rubric, 1);
    if (judged)
      store.write({ArtifactKind::Scorecard, RoleName::Evaluator, 1},
                  eval::scorecard_body(scorecard));
    store.write({ArtifactKind::Feedback, RoleName::Evaluator, 1},
                eval::feedback_body(feedback));

    for (const auto& r : results)
      out << "[check] " << r.check_id << ": " << eval::to_string(r.verdict)
          << (r.note.empty() ? "" : " (" + r.note + ")") << "\n";
    out << (feedback.pass ? "PASS" : "FAIL") << " — " << feedback.issues.size()
        << " issue(s); evidence in " << eval_dir.string() << "\n";
    return feedback.pass ? 0 : 1;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

int cmd_memory(const GlobalOptions& opts, const std::string& action,
               const std::string& arg, int k, std::ostream& out,
               std::ostream& err) {
  try {
    memory::Wiki wiki(opts.root / "wiki");
    if (action == "retrieve") {
      auto ranked = wiki.retrieve(arg, static_cast<size_t>(k));
      if (opts.json_output) {
        json j = json::array();
        for (const auto& [page, score] : ranked)
          j.push_back({{"page", page.path}, {"score", score}});
        out << j.dump(2) << "\n";
      } else {
        for (const auto& [page, score] : ranked) {
          char line[512];
          std::snprintf(line, sizeof(line), "%.4f  %s — %s\n", score,
                        page.path.c_str(), page.title.c_str());
          out << line;
        }
      }
      return 0;
    }
    if (action == "show") {
      auto page = wiki.load(arg);
      if (!page) {
        err << "no page '" << arg << "'\n";
        return exit_code_for(ErrorCode::UnknownRun);
      }
      out << page->serialize();
      return 0;
    }
    if (action == "lint") {
      auto problems = wiki.lint(opts.root / "runs");
      for (const auto& p : problems) out << p << "\n";
      out << (problems.empty() ? "wiki clean" : "wiki has problems") << "\n";
      return problems.empty() ? 0 : 1;
    }
    err << "unknown memory action '" << action << "'\n";
    return 2;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

int cmd_replay(const GlobalOptions& opts, const fs::path& run_dir,
               std::ostream& out, std::ostream& err) {
  try {
    artifact::ArtifactStore source(run_dir);
    json manifest = json::parse(
        support::read_text_file(run_dir / "manifest.json"), nullptr, false);
    if (manifest.is_discarded())
      raise(ErrorCode::CorruptRun, "manifest unparseable");

    run::RunConfig config = run::RunConfig::from_json(manifest["config"]);
    if (config.backend != "replay") {
      // A recorded live/scripted run replays from its own transcript.
      if (config.transcript_path.empty())
        raise(ErrorCode::ConfigInvalid,
              "source run has no transcript to replay from");
      config.backend = "replay";
      config.record_transcript = false;
    }

    run::RunDriver driver(opts.root);
    run::RunState state = driver.start_run(
        manifest["task_dir"].get<std::string>(),
        manifest["instruction"].get<std::string>(), config);
    driver.run_to_completion(state);

    artifact::ArtifactStore fresh(state.run_dir);
    int differing = 0;
    for (const auto& env : source.list()) {
      bool matched = false;
      for (const auto& candidate : fresh.list()) {
        if (candidate.artifact_id != env.artifact_id) continue;
        matched = fresh.read_body(candidate) == source.read_body(env);
        break;
      }
      if (!matched) {
        ++differing;
        out << "[diff] " << env.artifact_id << "\n";
      }
    }
    out << "replayed into " << state.run_dir.string() << ": "
        << (differing == 0 ? "identical" : std::to_string(differing) +
                                               " artifact(s) differ")
        << "\n";
    return differing == 0 ? 0 : 1;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

}  // namespace visforge::cli
