#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace visforge::ws {

namespace fs = std::filesystem;

struct CommandSpec {
  std::vector<std::string> argv;
  std::string cwd;  ///< relative to the run workspace; empty means work/
  std::chrono::milliseconds timeout{60000};
  std::vector<std::string> env_allowlist;
};

struct CommandResult {
  int exit_code = -1;
  std::string stdout_excerpt;
  std::string stderr_excerpt;
  std::chrono::milliseconds duration{0};
  bool timed_out = false;

  nlohmann::json to_json() const;
};

/// Per-run filesystem sandbox: run_dir/{work,artifacts,probes}. Task data
/// is referenced read-only by path, never copied. Every write and every
/// command cwd must resolve inside the run directory.
class Workspace {
 public:
  /// Creates the layout. Throws AlreadyInitialized when work/ exists and
  /// IoFailure when the task dir is unreadable.
  static Workspace init(const fs::path& run_dir, const fs::path& task_dir);

  /// Opens an existing workspace (resume path).
  static Workspace open(const fs::path& run_dir);

  const fs::path& run_dir() const { return run_dir_; }
  const fs::path& task_dir() const { return task_dir_; }
  fs::path work_dir() const { return run_dir_ / "work"; }
  fs::path probes_dir() const { return run_dir_ / "probes"; }

  /// Role-visible file surface, all relative to work/. Escaping paths are
  /// refused with PathViolation before any byte is touched.
  void write_file(const std::string& rel_path, std::string_view content);
  std::string read_file(const std::string& rel_path) const;
  std::vector<std::string> list_files() const;

  /// Read-only view of the task directory.
  std::string read_task_file(const std::string& rel_path) const;
  std::vector<std::string> list_task_files() const;

  /// Runs the command with cwd containment, env allowlisting, a wall-clock
  /// timeout and capped output excerpts; the result is appended to the
  /// run's command log.
  CommandResult execute(const CommandSpec& spec,
                        size_t output_cap = 64 * 1024);

 private:
  Workspace(fs::path run_dir, fs::path task_dir)
      : run_dir_(std::move(run_dir)), task_dir_(std::move(task_dir)) {}

  fs::path resolve_inside(const fs::path& base,
                          const std::string& rel_path) const;

  fs::path run_dir_;
  fs::path task_dir_;
};

}  // namespace visforge::ws
