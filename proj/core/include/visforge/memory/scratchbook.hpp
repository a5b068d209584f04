#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "visforge/types.hpp"

namespace visforge::artifact {
class ArtifactStore;
}

namespace visforge::memory {

namespace fs = std::filesystem;

struct ScratchbookEntry {
  std::string run_id;  ///< stamped on append
  RoleName author_role = RoleName::Orchestrator;
  Stage stage = Stage::Init;
  std::string lesson;
  std::vector<std::string> tags;
  std::vector<std::string> refs;  ///< artifact ids within the run
  int seq = 0;                    ///< stamped on append

  nlohmann::json to_json() const;
  static std::optional<ScratchbookEntry> from_json(const nlohmann::json& j);
};

/// Append-only per-run lesson log (scratchbook.jsonl inside the run dir).
/// Entries are never mutated; a closed run refuses appends.
class Scratchbook {
 public:
  Scratchbook(fs::path run_dir, std::string run_id);

  /// Validates (non-empty lesson; refs resolve when a store is supplied)
  /// and appends. Returns the entry id. Throws RunClosed or
  /// InvalidWikiUpdate-style Error(OutputInvalid) on a bad entry.
  std::string append(ScratchbookEntry entry,
                     const artifact::ArtifactStore* store = nullptr);

  std::vector<ScratchbookEntry> entries() const;

  /// Whole log rendered as readable text (embedded into the memory
  /// maintainer's context).
  std::string render() const;

  void close();
  bool closed() const;

 private:
  fs::path file_path() const { return run_dir_ / "scratchbook.jsonl"; }
  fs::path closed_marker() const { return run_dir_ / "scratchbook.closed"; }

  fs::path run_dir_;
  std::string run_id_;
};

}  // namespace visforge::memory
