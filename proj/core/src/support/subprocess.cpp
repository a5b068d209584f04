#include "visforge/support/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>

#include "visforge/error.hpp"

namespace visforge::support {

namespace {

void close_quiet(int& fd) {
  if (fd >= 0) {
    ::close(fd);
    fd = -1;
  }
}

ReadStatus read_fd(int fd, std::string& out, size_t max,
                   std::chrono::milliseconds timeout) {
  if (fd < 0) return ReadStatus::Eof;
  struct pollfd pfd {
    fd, POLLIN, 0
  };
  int rc = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
  if (rc == 0) return ReadStatus::Timeout;
  if (rc < 0) return ReadStatus::Eof;
  std::string buf(max, '\0');
  ssize_t n = ::read(fd, buf.data(), max);
  if (n <= 0) return ReadStatus::Eof;
  buf.resize(static_cast<size_t>(n));
  out += buf;
  return ReadStatus::Data;
}

}  // namespace

ChildProcess::~ChildProcess() { reset(); }

ChildProcess::ChildProcess(ChildProcess&& other) noexcept {
  *this = std::move(other);
}

ChildProcess& ChildProcess::operator=(ChildProcess&& other) noexcept {
  if (this != &other) {
    reset();
    pid_ = other.pid_;
    in_fd_ = other.in_fd_;
    out_fd_ = other.out_fd_;
    err_fd_ = other.err_fd_;
    exit_code_ = other.exit_code_;
    other.pid_ = -1;
    other.in_fd_ = other.out_fd_ = other.err_fd_ = -1;
    other.exit_code_.reset();
  }
  return *this;
}

void ChildProcess::reset() {
  close_quiet(in_fd_);
  close_quiet(out_fd_);
  close_quiet(err_fd_);
  if (pid_ > 0 && !exit_code_) {
    ::kill(pid_, SIGKILL);
    int status = 0;
    ::waitpid(pid_, &status, 0);
  }
  pid_ = -1;
}

ChildProcess ChildProcess::spawn(const SpawnOptions& opts) {
  if (opts.argv.empty())
    raise(ErrorCode::SpawnFailure, "empty argv");

  int in_pipe[2], out_pipe[2], err_pipe[2] = {-1, -1};
  if (::pipe(in_pipe) != 0 || ::pipe(out_pipe) != 0)
    raise(ErrorCode::SpawnFailure, "pipe: " + std::string(strerror(errno)));
  if (opts.capture_stderr && ::pipe(err_pipe) != 0)
    raise(ErrorCode::SpawnFailure, "pipe: " + std::string(strerror(errno)));

  // Collect the child environment before forking.
  std::vector<std::string> env_storage;
  env_storage.emplace_back("PATH=" +
                           std::string(getenv("PATH") ? getenv("PATH") : ""));
  for (const auto& name : opts.env_allowlist) {
    if (name == "PATH") continue;
    if (const char* v = getenv(name.c_str()))
      env_storage.emplace_back(name + "=" + v);
  }
  for (const auto& [k, v] : opts.env_extra) env_storage.emplace_back(k + "=" + v);

  pid_t pid = ::fork();
  if (pid < 0)
    raise(ErrorCode::SpawnFailure, "fork: " + std::string(strerror(errno)));

  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    if (opts.capture_stderr) ::dup2(err_pipe[1], STDERR_FILENO);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    if (opts.capture_stderr) {
      ::close(err_pipe[0]);
      ::close(err_pipe[1]);
    }
    if (opts.cwd && ::chdir(opts.cwd->c_str()) != 0) _exit(127);

    std::vector<char*> envp;
    for (auto& e : env_storage) envp.push_back(e.data());
    envp.push_back(nullptr);
    std::vector<char*> argv;
    std::vector<std::string> argv_storage = opts.argv;
    for (auto& a : argv_storage) argv.push_back(a.data());
    argv.push_back(nullptr);
    environ = envp.data();
    ::execvp(argv[0], argv.data());
    _exit(127);
  }

  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  if (opts.capture_stderr) ::close(err_pipe[1]);

  ChildProcess child;
  child.pid_ = pid;
  child.in_fd_ = in_pipe[1];
  child.out_fd_ = out_pipe[0];
  child.err_fd_ = opts.capture_stderr ? err_pipe[0] : -1;
  return child;
}

bool ChildProcess::running() {
  if (pid_ <= 0 || exit_code_) return false;
  int status = 0;
  pid_t rc = ::waitpid(pid_, &status, WNOHANG);
  if (rc == pid_) {
    exit_code_ = WIFSIGNALED(status) ? 128 + WTERMSIG(status)
                                     : WEXITSTATUS(status);
    return false;
  }
  return rc == 0;
}

bool ChildProcess::write_stdin(std::string_view bytes) {
  if (in_fd_ < 0) return false;
  size_t off = 0;
  // The child may die mid-write; treat EPIPE as a clean failure.
  signal(SIGPIPE, SIG_IGN);
  while (off < bytes.size()) {
    ssize_t n = ::write(in_fd_, bytes.data() + off, bytes.size() - off);
    if (n <= 0) return false;
    off += static_cast<size_t>(n);
  }
  return true;
}

void ChildProcess::close_stdin() { close_quiet(in_fd_); }

ReadStatus ChildProcess::read_stdout(std::string& out, size_t max,
                                     std::chrono::milliseconds timeout) {
  return read_fd(out_fd_, out, max, timeout);
}

ReadStatus ChildProcess::read_stderr(std::string& out, size_t max,
                                     std::chrono::milliseconds timeout) {
  return read_fd(err_fd_, out, max, timeout);
}

void ChildProcess::kill_process(int sig) {
  if (pid_ > 0 && !exit_code_) ::kill(pid_, sig);
}

int ChildProcess::wait() {
  if (pid_ <= 0) return -1;
  if (exit_code_) return *exit_code_;
  int status = 0;
  ::waitpid(pid_, &status, 0);
  exit_code_ =
      WIFSIGNALED(status) ? 128 + WTERMSIG(status) : WEXITSTATUS(status);
  return *exit_code_;
}

RunResult run_command(const SpawnOptions& opts,
                      std::chrono::milliseconds timeout, size_t output_cap) {
  auto start = std::chrono::steady_clock::now();
  ChildProcess child = ChildProcess::spawn(opts);
  child.close_stdin();

  RunResult result;
  auto deadline = start + timeout;
  bool out_open = true, err_open = true;
  while (out_open || err_open) {
    auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      child.kill_process(SIGKILL);
      result.timed_out = true;
      break;
    }
    auto slice = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::min(deadline - now, std::chrono::steady_clock::duration(
                                     std::chrono::milliseconds(100))));
    bool progressed = false;
    if (out_open) {
      std::string chunk;
      ReadStatus st = child.read_stdout(chunk, 4096, slice);
      if (st == ReadStatus::Eof) out_open = false;
      if (st == ReadStatus::Data) {
        progressed = true;
        if (result.stdout_text.size() < output_cap)
          result.stdout_text += chunk.substr(
              0, output_cap - result.stdout_text.size());
        else
          result.output_truncated = true;
      }
    }
    if (err_open) {
      std::string chunk;
      ReadStatus st = child.read_stderr(chunk, 4096,
                                        std::chrono::milliseconds(0));
      if (st == ReadStatus::Eof) err_open = false;
      if (st == ReadStatus::Data) {
        progressed = true;
        if (result.stderr_text.size() < output_cap)
          result.stderr_text += chunk.substr(
              0, output_cap - result.stderr_text.size());
        else
          result.output_truncated = true;
      }
    }
    (void)progressed;
  }

  result.exit_code = child.wait();
  result.duration = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  return result;
}

}  // namespace visforge::support
