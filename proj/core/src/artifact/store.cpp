#include "visforge/artifact/store.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include "visforge/artifact/schemas.hpp"
#include "visforge/error.hpp"
#include "visforge/support/digest.hpp"
#include "visforge/support/text.hpp"

namespace visforge::artifact {

using nlohmann::json;

namespace {

std::string iso_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string role_slug(RoleName r) {
  return support::to_lower(std::string(to_string(r)));
}

}  // namespace

json ArtifactEnvelope::to_json() const {
  return json{{"artifact_id", artifact_id},
              {"run_id", run_id},
              {"kind", to_string(kind)},
              {"author_role", to_string(author_role)},
              {"stage", to_string(stage)},
              {"iteration", iteration},
              {"created_at", created_at},
              {"content_hash", content_hash},
              {"schema_version", schema_version},
              {"path", path},
              {"seq", seq}};
}

std::optional<ArtifactEnvelope> ArtifactEnvelope::from_json(const json& j) {
  if (!j.is_object()) return std::nullopt;
  ArtifactEnvelope env;
  try {
    env.artifact_id = j.at("artifact_id").get<std::string>();
    env.run_id = j.at("run_id").get<std::string>();
    auto kind = kind_from_string(j.at("kind").get<std::string>());
    auto role = role_from_string(j.at("author_role").get<std::string>());
    auto stage = stage_from_string(j.at("stage").get<std::string>());
    if (!kind || !role || !stage) return std::nullopt;
    env.kind = *kind;
    env.author_role = *role;
    env.stage = *stage;
    env.iteration = j.at("iteration").get<int>();
    env.created_at = j.at("created_at").get<std::string>();
    env.content_hash = j.at("content_hash").get<std::string>();
    env.schema_version = j.at("schema_version").get<int>();
    env.path = j.at("path").get<std::string>();
    env.seq = j.value("seq", 0);
  } catch (const json::exception&) {
    return std::nullopt;
  }
  return env;
}

std::string make_artifact_id(ArtifactKind kind, RoleName role, int iteration,
                             int dup_seq) {
  char ord[8];
  std::snprintf(ord, sizeof(ord), "%03d",
                stage_ordinal(producing_stage(kind)));
  std::string id = std::string(ord) + "-" + std::string(kind_slug(kind));
  if (iteration > 0) id += "-i" + std::to_string(iteration);
  // AppBundleRef is the only kind two roles may produce in one iteration.
  if (kind == ArtifactKind::AppBundleRef && role != RoleName::Orchestrator)
    id += "-" + role_slug(role);
  if (dup_seq > 0) id += "-n" + std::to_string(dup_seq + 1);
  return id;
}

ArtifactStore::ArtifactStore(fs::path run_dir) : run_dir_(std::move(run_dir)) {
  if (!fs::exists(run_dir_))
    raise(ErrorCode::UnknownRun, "no run at " + run_dir_.string());
  run_id_ = run_dir_.filename().string();
}

ArtifactStore ArtifactStore::create(const fs::path& run_dir,
                                    const std::string& run_id) {
  std::error_code ec;
  fs::create_directories(run_dir / "artifacts", ec);
  if (ec)
    raise(ErrorCode::IoFailure, "cannot create " + run_dir.string());
  ArtifactStore store(run_dir);
  store.run_id_ = run_id;
  return store;
}

std::string ArtifactStore::artifact_file_name(const EnvelopeFields& fields,
                                              int dup_seq) const {
  return make_artifact_id(fields.kind, fields.author_role, fields.iteration,
                          dup_seq) +
         ".md";
}

ArtifactEnvelope ArtifactStore::write(const EnvelopeFields& fields,
                                      std::string_view body) {
  if (fields.kind == ArtifactKind::RunManifest ||
      fields.kind == ArtifactKind::ScratchbookEntry)
    raise(ErrorCode::UnknownKind,
          std::string(to_string(fields.kind)) +
              " is not stored as a trail artifact (manifest.json / "
              "scratchbook.jsonl)");
  if (body.empty())
    raise(ErrorCode::IoFailure, "refusing to store an empty body");

  auto existing = load_index();
  int dup_seq = 0;
  for (const auto& env : existing) {
    if (env.kind != fields.kind) continue;
    if (is_singleton_kind(fields.kind))
      raise(ErrorCode::DuplicateArtifact,
            std::string(to_string(fields.kind)) + " already written for run " +
                run_id_);
    if (is_per_iteration_kind(fields.kind)) {
      if (env.iteration == fields.iteration &&
          env.author_role == fields.author_role)
        raise(ErrorCode::DuplicateArtifact,
              std::string(to_string(fields.kind)) + " already written for " +
                  "iteration " + std::to_string(fields.iteration) + " by " +
                  std::string(to_string(fields.author_role)));
    } else if (env.iteration == fields.iteration) {
      ++dup_seq;
    }
  }

  const std::string canonical = support::normalize_newlines(body);

  ArtifactEnvelope env;
  env.artifact_id = make_artifact_id(fields.kind, fields.author_role,
                                     fields.iteration, dup_seq);
  env.run_id = run_id_;
  env.kind = fields.kind;
  env.author_role = fields.author_role;
  env.stage = producing_stage(fields.kind);
  env.iteration = fields.iteration;
  env.created_at = iso_now();
  env.content_hash = support::sha256_hex(canonical);
  env.path = "artifacts/" + artifact_file_name(fields, dup_seq);
  env.seq = static_cast<int>(existing.size());

  support::write_text_file(run_dir_ / env.path, canonical);
  support::append_text_file(index_path(), env.to_json().dump() + "\n");
  return env;
}

std::vector<ArtifactEnvelope> ArtifactStore::load_index() const {
  std::vector<ArtifactEnvelope> out;
  if (!fs::exists(index_path())) return out;
  std::ifstream in(index_path());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (support::trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    auto env = j.is_discarded() ? std::nullopt : ArtifactEnvelope::from_json(j);
    if (!env)
      raise(ErrorCode::CorruptRun, "index line " + std::to_string(lineno) +
                                       " unparseable in " +
                                       index_path().string());
    out.push_back(*env);
  }
  return out;
}

std::pair<ArtifactEnvelope, std::string> ArtifactStore::read(
    const std::string& artifact_id) const {
  for (const auto& env : load_index()) {
    if (env.artifact_id != artifact_id) continue;
    std::string body = read_body(env);
    return {env, body};
  }
  raise(ErrorCode::UnknownRun,
        "no artifact '" + artifact_id + "' in run " + run_id_);
}

std::string ArtifactStore::read_body(const ArtifactEnvelope& env) const {
  std::string body = support::read_text_file(run_dir_ / env.path);
  if (support::sha256_hex(body) != env.content_hash)
    raise(ErrorCode::CorruptRun,
          "content hash mismatch for " + env.artifact_id);
  return body;
}

std::vector<ArtifactEnvelope> ArtifactStore::list() const {
  auto envs = load_index();
  std::stable_sort(envs.begin(), envs.end(),
                   [](const ArtifactEnvelope& a, const ArtifactEnvelope& b) {
                     int sa = stage_ordinal(a.stage);
                     int sb = stage_ordinal(b.stage);
                     if (sa != sb) return sa < sb;
                     if (a.iteration != b.iteration)
                       return a.iteration < b.iteration;
                     return a.seq < b.seq;
                   });
  return envs;
}

std::optional<ArtifactEnvelope> ArtifactStore::latest(
    ArtifactKind kind) const {
  std::optional<ArtifactEnvelope> best;
  for (const auto& env : load_index()) {
    if (env.kind != kind) continue;
    if (!best || env.iteration > best->iteration ||
        (env.iteration == best->iteration && env.seq > best->seq))
      best = env;
  }
  return best;
}

std::optional<std::string> ArtifactStore::first_corrupt() const {
  for (const auto& env : list()) {
    if (!fs::exists(run_dir_ / env.path)) return env.artifact_id;
    std::string body = support::read_text_file(run_dir_ / env.path);
    if (support::sha256_hex(body) != env.content_hash)
      return env.artifact_id;
  }
  return std::nullopt;
}

}  // namespace visforge::artifact
