#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "visforge/run/config.hpp"
#include "visforge/types.hpp"

namespace visforge::cli {

namespace fs = std::filesystem;

/// Flags shared by every subcommand. All paths resolve against root.
struct GlobalOptions {
  fs::path root = ".";
  bool json_output = false;
};

/// Launch a run and drive it to completion (or until `stop_after`
/// completes, the checkpoint/resume workflow). Exit 0 iff passed.
int cmd_run(const GlobalOptions& opts, const fs::path& task_dir,
            const std::string& instruction, run::RunConfig config,
            std::optional<Stage> stop_after, std::ostream& out,
            std::ostream& err);

/// Continue a stopped run from its persisted state.
int cmd_resume(const GlobalOptions& opts, const fs::path& run_dir,
               std::ostream& out, std::ostream& err);

/// Print the ordered artifact trail (or one body with --kind/--iteration),
/// verifying every stored hash. Read-only.
int cmd_inspect(const GlobalOptions& opts, const fs::path& run_dir,
                const std::string& kind_filter, std::optional<int> iteration,
                std::ostream& out, std::ostream& err);

/// Grade any app directory or URL: mechanistic checks, plus the rubric
/// when a backend is configured. Writes Feedback (+ Scorecard) into an
/// ad-hoc run dir. Exit 0 iff the feedback passes.
int cmd_eval(const GlobalOptions& opts, const std::string& app_dir_or_url,
             const std::string& rubric_path, const std::string& checks_path,
             run::RunConfig config, std::ostream& out, std::ostream& err);

/// memory retrieve <query> / show <page> / lint
int cmd_memory(const GlobalOptions& opts, const std::string& action,
               const std::string& arg, int k, std::ostream& out,
               std::ostream& err);

/// Re-execute a finished run's transcript into a fresh run dir and diff
/// the artifact trails. Exit 0 iff byte-identical.
int cmd_replay(const GlobalOptions& opts, const fs::path& run_dir,
               std::ostream& out, std::ostream& err);

}  // namespace visforge::cli
