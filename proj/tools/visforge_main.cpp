#include <CLI11.hpp>

#include <iostream>

#include "visforge/build_info.hpp"
#include "visforge/cli/commands.hpp"
#include "visforge/error.hpp"
#include "visforge/run/config.hpp"

using namespace visforge;

namespace {

run::RunConfig resolve_config(const std::string& config_path,
                              const std::string& backend,
                              const std::string& transcript,
                              const std::string& script, bool record,
                              const std::vector<std::string>& mcp_command) {
  run::RunConfig config;
  if (!config_path.empty()) config = run::RunConfig::load(config_path);
  if (!backend.empty()) config.backend = backend;
  if (!transcript.empty()) config.transcript_path = transcript;
  if (!script.empty()) config.script_path = script;
  if (record) config.record_transcript = true;
  if (!mcp_command.empty()) config.mcp_command = mcp_command;
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"visforge — multi-agent harness that turns a dataset and an "
               "instruction into a validated single-page vis app"};
  app.set_version_flag("--version", VISFORGE_VERSION);

  cli::GlobalOptions opts;
  std::string root = ".";
  app.add_option("--root", root,
                 "harness root holding runs/ and wiki/ (all paths resolve "
                 "against it)");
  app.add_flag("--json", opts.json_output, "machine-readable summaries");

  std::string config_path_env;
  if (const char* env = getenv("VISFORGE_CONFIG")) config_path_env = env;

  // run
  auto* run_cmd = app.add_subcommand("run", "launch a run on a task dir");
  std::string task_dir, instruction, config_path = config_path_env;
  std::string backend, transcript, script, until;
  bool record = false;
  std::vector<std::string> mcp_command;
  run_cmd->add_option("task_dir", task_dir)->required();
  run_cmd->add_option("--instruction", instruction)->required();
  run_cmd->add_option("--config", config_path, "run config JSON");
  run_cmd->add_option("--backend", backend, "live|replay|scripted");
  run_cmd->add_option("--transcript", transcript, "transcript path");
  run_cmd->add_option("--script", script, "scripted backend rules");
  run_cmd->add_flag("--record", record, "record requests into --transcript");
  run_cmd->add_option("--mcp-command", mcp_command,
                      "browser server argv (repeatable)");
  run_cmd->add_option("--until", until,
                      "stop after this stage completes (checkpoint)");

  // resume
  auto* resume_cmd = app.add_subcommand("resume", "continue a stopped run");
  std::string run_dir;
  resume_cmd->add_option("run_dir", run_dir)->required();

  // inspect
  auto* inspect_cmd =
      app.add_subcommand("inspect", "print a run's artifact trail");
  std::string inspect_dir, kind;
  int iteration = -1;
  inspect_cmd->add_option("run_dir", inspect_dir)->required();
  inspect_cmd->add_option("--kind", kind, "artifact kind to print");
  inspect_cmd->add_option("--iteration", iteration);

  // eval
  auto* eval_cmd =
      app.add_subcommand("eval", "grade an app dir or URL standalone");
  std::string app_target, rubric, checks, eval_config = config_path_env;
  std::vector<std::string> eval_mcp;
  eval_cmd->add_option("app", app_target, "app directory or URL")->required();
  eval_cmd->add_option("--rubric", rubric);
  eval_cmd->add_option("--checks", checks, "check-spec JSON file");
  eval_cmd->add_option("--config", eval_config);
  eval_cmd->add_option("--mcp-command", eval_mcp,
                       "browser server argv (repeatable)");

  // memory
  auto* memory_cmd = app.add_subcommand("memory", "wiki retrieval and pages");
  std::string action, memory_arg;
  int topk = 5;
  memory_cmd->add_option("action", action, "retrieve|show|lint")->required();
  memory_cmd->add_option("arg", memory_arg, "query or page path");
  memory_cmd->add_option("-k", topk, "results to return");

  // replay
  auto* replay_cmd = app.add_subcommand(
      "replay", "re-execute a run's transcript into a fresh run dir");
  std::string replay_dir;
  replay_cmd->add_option("run_dir", replay_dir)->required();

  app.require_subcommand(1);
  CLI11_PARSE(app, argc, argv);
  opts.root = root;

  try {
    if (*run_cmd) {
      std::optional<Stage> stop_after;
      if (!until.empty()) {
        stop_after = stage_from_string(until);
        if (!stop_after) {
          std::cerr << "unknown stage '" << until << "'\n";
          return 2;
        }
      }
      return cli::cmd_run(
          opts, task_dir, instruction,
          resolve_config(config_path, backend, transcript, script, record,
                         mcp_command),
          stop_after, std::cout, std::cerr);
    }
    if (*resume_cmd)
      return cli::cmd_resume(opts, run_dir, std::cout, std::cerr);
    if (*inspect_cmd)
      return cli::cmd_inspect(opts, inspect_dir, kind,
                              iteration >= 0 ? std::optional<int>(iteration)
                                             : std::nullopt,
                              std::cout, std::cerr);
    if (*eval_cmd)
      return cli::cmd_eval(
          opts, app_target, rubric, checks,
          resolve_config(eval_config, "", "", "", false, eval_mcp), std::cout,
          std::cerr);
    if (*memory_cmd)
      return cli::cmd_memory(opts, action, memory_arg, topk, std::cout,
                             std::cerr);
    if (*replay_cmd)
      return cli::cmd_replay(opts, replay_dir, std::cout, std::cerr);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << "\n";
    return 99;
  }
  return 2;
}
