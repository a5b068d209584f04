#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "visforge/types.hpp"

namespace visforge::artifact {

namespace fs = std::filesystem;

/// Versioned, hashed, role-attributed wrapper around one stored document.
struct ArtifactEnvelope {
  std::string artifact_id;
  std::string run_id;
  ArtifactKind kind = ArtifactKind::RunManifest;
  RoleName author_role = RoleName::Orchestrator;
  Stage stage = Stage::Init;
  int iteration = 0;
  std::string created_at;    ///< ISO-8601 UTC wall clock
  std::string content_hash;  ///< sha256 of the stored body bytes
  int schema_version = 1;
  std::string path;  ///< relative to the run directory
  int seq = 0;       ///< append order in the index

  nlohmann::json to_json() const;
  static std::optional<ArtifactEnvelope> from_json(const nlohmann::json& j);
};

/// Fields the writer supplies; everything else the store computes.
struct EnvelopeFields {
  ArtifactKind kind = ArtifactKind::RunManifest;
  RoleName author_role = RoleName::Orchestrator;
  int iteration = 0;
};

/// Persists every artifact of one run as an immutable markdown file plus an
/// append-only JSONL index. Nothing is ever overwritten or deleted; the
/// trail order is recoverable from the persisted metadata alone.
///
/// Writes are serialized by the caller (the orchestrator is the only
/// writer); reads are safe concurrently.
class ArtifactStore {
 public:
  /// Opens the store of an existing run directory. Throws UnknownRun when
  /// the directory does not exist.
  explicit ArtifactStore(fs::path run_dir);

  /// Creates the artifacts/index layout for a new run.
  static ArtifactStore create(const fs::path& run_dir,
                              const std::string& run_id);

  /// Normalizes line endings, hashes, stores the body at a deterministic
  /// path, appends the index entry, and returns the envelope.
  ArtifactEnvelope write(const EnvelopeFields& fields, std::string_view body);

  /// Returns envelope + body, verifying the recorded hash on every read.
  std::pair<ArtifactEnvelope, std::string> read(
      const std::string& artifact_id) const;

  /// All envelopes ever written, ordered by (stage order, iteration, seq).
  std::vector<ArtifactEnvelope> list() const;

  /// Most recent envelope of a kind: the highest (iteration, seq).
  std::optional<ArtifactEnvelope> latest(ArtifactKind kind) const;

  std::string read_body(const ArtifactEnvelope& env) const;

  /// Recomputes every stored hash; returns the first mismatching artifact
  /// id, or nullopt when the whole trail is intact.
  std::optional<std::string> first_corrupt() const;

  const fs::path& run_dir() const { return run_dir_; }
  const std::string& run_id() const { return run_id_; }
  fs::path index_path() const { return run_dir_ / "index.jsonl"; }

 private:
  std::vector<ArtifactEnvelope> load_index() const;
  std::string artifact_file_name(const EnvelopeFields& fields,
                                 int dup_seq) const;

  fs::path run_dir_;
  std::string run_id_;
};

/// Stable identifier for an artifact: stage ordinal + kind slug +
/// iteration, with role/sequence suffixes only where several artifacts of
/// one kind can legally coexist. Deterministic across runs by design.
std::string make_artifact_id(ArtifactKind kind, RoleName role, int iteration,
                             int dup_seq);

}  // namespace visforge::artifact
