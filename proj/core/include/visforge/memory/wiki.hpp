#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "visforge/gateway/gateway.hpp"
#include "visforge/memory/scratchbook.hpp"
#include "visforge/roles/catalog.hpp"

namespace visforge::artifact {
class ArtifactStore;
}
namespace visforge::roles {
class ToolRegistry;
}

namespace visforge::memory {

namespace fs = std::filesystem;

struct WikiBullet {
  std::string text;
  std::string run_id;
  std::string artifact_id;
};

struct WikiSection {
  std::string heading;
  std::vector<WikiBullet> bullets;
};

/// One markdown page of the memory tree. Every bullet carries provenance;
/// the file renders standalone without any harness code.
struct WikiPage {
  std::string path;  ///< datasets/<x>, tasks/<x>, vis-patterns/<x>
  std::string title;
  std::vector<WikiSection> sections;

  std::string serialize() const;
  static std::optional<WikiPage> parse(std::string_view markdown);
};

/// A validated WikiPageUpdate artifact body, ready to merge.
struct PageUpdate {
  std::string page;
  std::string title;
  std::vector<WikiSection> sections;  ///< bullets carry artifact_id only

  static std::optional<PageUpdate> from_body(std::string_view body);
};

/// Merge semantics: an absent page is created; bullets land under their
/// heading (new sections append); a bullet whose (text, provenance) pair
/// already exists is skipped. The same lesson from a different run is
/// evidence, not noise, and both copies stay.
WikiPage merge_page(const std::optional<WikiPage>& existing,
                    const PageUpdate& update, const std::string& run_id);

/// The on-disk wiki: one markdown file per page under the root. Merges
/// are serialized by the caller; reads are concurrent.
class Wiki {
 public:
  explicit Wiki(fs::path root) : root_(std::move(root)) {}

  const fs::path& root() const { return root_; }
  fs::path page_file(const std::string& page_path) const;

  std::optional<WikiPage> load(const std::string& page_path) const;
  void save(const WikiPage& page);
  void apply(const PageUpdate& update, const std::string& run_id);

  std::vector<std::string> list_pages() const;

  /// Content hash over every page file; unchanged iff a merge was a no-op.
  std::string tree_hash() const;

  /// Lexical retrieval: normalized term overlap, title terms weighted x3,
  /// ties broken by path order. Pages with zero overlap are omitted.
  std::vector<std::pair<WikiPage, double>> retrieve(const std::string& query,
                                                    size_t k) const;

  /// Structural lint + provenance check. Returns problems; empty is clean.
  /// With a runs root given, every bullet must resolve to a recorded
  /// artifact of its run.
  std::vector<std::string> lint(
      const std::optional<fs::path>& runs_root) const;

 private:
  fs::path root_;
};

struct DistillOutcome {
  std::vector<std::string> applied_bodies;  ///< valid WikiPageUpdate bodies
  std::vector<std::pair<std::string, std::string>> dropped;  ///< body, reason
};

/// Runs the memory maintainer over the run's artifacts + scratchbook and
/// merges every valid emitted page update into the wiki. Invalid updates
/// are dropped with a reason, never partially merged. Idempotent: the
/// same run distilled twice leaves the tree hash unchanged.
DistillOutcome distill(const artifact::ArtifactStore& store,
                       const Scratchbook& scratchbook,
                       const roles::Catalog& catalog,
                       gateway::Gateway& gateway, Wiki& wiki,
                       const std::string& instruction);

}  // namespace visforge::memory
