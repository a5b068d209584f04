#include "visforge/workspace/workspace.hpp"

#include <algorithm>

#include "visforge/error.hpp"
#include "visforge/support/subprocess.hpp"
#include "visforge/support/text.hpp"

namespace visforge::ws {

using nlohmann::json;

json CommandResult::to_json() const {
  return json{{"exit_code", exit_code},
              {"stdout", stdout_excerpt},
              {"stderr", stderr_excerpt},
              {"duration_ms", duration.count()},
              {"timed_out", timed_out}};
}

Workspace Workspace::init(const fs::path& run_dir, const fs::path& task_dir) {
  if (!fs::exists(task_dir) || !fs::is_directory(task_dir))
    raise(ErrorCode::IoFailure, "task dir unreadable: " + task_dir.string());
  if (fs::exists(run_dir / "work"))
    raise(ErrorCode::AlreadyInitialized,
          "workspace already initialized at " + run_dir.string());

  std::error_code ec;
  for (const char* sub : {"work", "artifacts", "probes"}) {
    fs::create_directories(run_dir / sub, ec);
    if (ec) raise(ErrorCode::IoFailure, "cannot create " + run_dir.string());
  }
  support::write_text_file(
      run_dir / "workspace.json",
      json{{"task_dir", fs::absolute(task_dir).string()}}.dump(2) + "\n");
  return Workspace(run_dir, fs::absolute(task_dir));
}

Workspace Workspace::open(const fs::path& run_dir) {
  if (!fs::exists(run_dir / "workspace.json"))
    raise(ErrorCode::UnknownRun,
          "no workspace at " + run_dir.string());
  json meta = json::parse(
      support::read_text_file(run_dir / "workspace.json"), nullptr, false);
  if (meta.is_discarded() || !meta.contains("task_dir"))
    raise(ErrorCode::CorruptRun,
          "workspace.json unparseable in " + run_dir.string());
  return Workspace(run_dir, meta["task_dir"].get<std::string>());
}

fs::path Workspace::resolve_inside(const fs::path& base,
                                   const std::string& rel_path) const {
  fs::path candidate = base / rel_path;
  if (!support::path_within(base, candidate))
    raise(ErrorCode::PathViolation,
          "'" + rel_path + "' escapes " + base.string());
  return candidate;
}

void Workspace::write_file(const std::string& rel_path,
                           std::string_view content) {
  support::write_text_file(resolve_inside(work_dir(), rel_path), content);
}

std::string Workspace::read_file(const std::string& rel_path) const {
  return support::read_text_file(resolve_inside(work_dir(), rel_path));
}

std::string Workspace::read_task_file(const std::string& rel_path) const {
  return support::read_text_file(resolve_inside(task_dir_, rel_path));
}

namespace {

std::vector<std::string> list_tree(const fs::path& root) {
  std::vector<std::string> out;
  if (!fs::exists(root)) return out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    out.push_back(fs::relative(entry.path(), root).generic_string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<std::string> Workspace::list_files() const {
  return list_tree(work_dir());
}

std::vector<std::string> Workspace::list_task_files() const {
  return list_tree(task_dir_);
}

CommandResult Workspace::execute(const CommandSpec& spec, size_t output_cap) {
  if (spec.argv.empty())
    raise(ErrorCode::CommandSpawnFailure, "empty argv");

  fs::path cwd = spec.cwd.empty() ? work_dir()
                                  : fs::path(run_dir_) / spec.cwd;
  if (!support::path_within(run_dir_, cwd))
    raise(ErrorCode::PathViolation,
          "cwd '" + spec.cwd + "' escapes the run workspace");
  std::error_code ec;
  fs::create_directories(cwd, ec);

  support::SpawnOptions opts;
  opts.argv = spec.argv;
  opts.cwd = cwd;
  opts.env_allowlist = spec.env_allowlist;
  support::RunResult raw = support::run_command(opts, spec.timeout,
                                                output_cap);

  CommandResult result;
  result.exit_code = raw.exit_code;
  result.stdout_excerpt = raw.stdout_text;
  result.stderr_excerpt = raw.stderr_text;
  result.duration = raw.duration;
  result.timed_out = raw.timed_out;

  json log_entry = result.to_json();
  log_entry["argv"] = spec.argv;
  support::append_text_file(run_dir_ / "commands.jsonl",
                            log_entry.dump() + "\n");
  return result;
}

}  // namespace visforge::ws
