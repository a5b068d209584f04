#pragma once

#include <sys/types.h>

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace visforge::support {

namespace fs = std::filesystem;

struct SpawnOptions {
  std::vector<std::string> argv;
  std::optional<fs::path> cwd;
  /// Environment variable names copied from the parent into the child.
  /// PATH always passes so argv[0] can be resolved by name.
  std::vector<std::string> env_allowlist;
  /// Extra variables set explicitly in the child.
  std::vector<std::pair<std::string, std::string>> env_extra;
  bool capture_stderr = true;  ///< false: child inherits parent stderr
};

enum class ReadStatus { Data, Timeout, Eof };

/// A spawned child with piped stdin/stdout (and optionally stderr).
/// Movable, not copyable; the destructor kills and reaps a live child.
class ChildProcess {
 public:
  ChildProcess() = default;
  ~ChildProcess();
  ChildProcess(ChildProcess&& other) noexcept;
  ChildProcess& operator=(ChildProcess&& other) noexcept;
  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  /// Throws Error(SpawnFailure) when the program cannot be started.
  static ChildProcess spawn(const SpawnOptions& opts);

  bool valid() const { return pid_ > 0; }
  pid_t pid() const { return pid_; }

  /// False once the child exited (non-blocking check, reaps on exit).
  bool running();

  /// Writes all bytes to the child's stdin. False on broken pipe.
  bool write_stdin(std::string_view bytes);
  void close_stdin();

  /// Reads up to `max` bytes from the child's stdout, waiting at most
  /// `timeout`. On Data, `out` receives the bytes.
  ReadStatus read_stdout(std::string& out, size_t max,
                         std::chrono::milliseconds timeout);
  ReadStatus read_stderr(std::string& out, size_t max,
                         std::chrono::milliseconds timeout);

  int stdout_fd() const { return out_fd_; }
  int stderr_fd() const { return err_fd_; }

  void kill_process(int sig);
  /// Blocks until exit; returns the exit code (128+signal when killed).
  int wait();

 private:
  void reset();

  pid_t pid_ = -1;
  int in_fd_ = -1;
  int out_fd_ = -1;
  int err_fd_ = -1;
  std::optional<int> exit_code_;
};

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
  std::string stderr_text;
  bool timed_out = false;
  std::chrono::milliseconds duration{0};
  bool output_truncated = false;
};

/// Runs a command to completion with a wall-clock timeout and per-stream
/// output caps. A child that outlives the timeout is killed; its exit code
/// reports the kill (128+SIGKILL).
RunResult run_command(const SpawnOptions& opts,
                      std::chrono::milliseconds timeout, size_t output_cap);

}  // namespace visforge::support
