#include "visforge/memory/scratchbook.hpp"

#include <fstream>

#include "visforge/artifact/store.hpp"
#include "visforge/error.hpp"
#include "visforge/support/text.hpp"

namespace visforge::memory {

using nlohmann::json;

json ScratchbookEntry::to_json() const {
  return json{{"run_id", run_id},
              {"author_role", to_string(author_role)},
              {"stage", to_string(stage)},
              {"lesson", lesson},
              {"tags", tags},
              {"refs", refs},
              {"seq", seq}};
}

std::optional<ScratchbookEntry> ScratchbookEntry::from_json(const json& j) {
  if (!j.is_object()) return std::nullopt;
  ScratchbookEntry e;
  e.run_id = j.value("run_id", "");
  auto role = role_from_string(j.value("author_role", ""));
  auto stage = stage_from_string(j.value("stage", ""));
  if (!role || !stage) return std::nullopt;
  e.author_role = *role;
  e.stage = *stage;
  e.lesson = j.value("lesson", "");
  for (const auto& t : j.value("tags", json::array()))
    e.tags.push_back(t.get<std::string>());
  for (const auto& r : j.value("refs", json::array()))
    e.refs.push_back(r.get<std::string>());
  e.seq = j.value("seq", 0);
  return e;
}

Scratchbook::Scratchbook(fs::path run_dir, std::string run_id)
    : run_dir_(std::move(run_dir)), run_id_(std::move(run_id)) {}

std::string Scratchbook::append(ScratchbookEntry entry,
                                const artifact::ArtifactStore* store) {
  if (closed())
    raise(ErrorCode::RunClosed, "scratchbook of " + run_id_ + " is closed");
  if (support::trim(entry.lesson).empty())
    raise(ErrorCode::OutputInvalid, "scratchbook lesson must be non-empty");
  if (store) {
    for (const auto& ref : entry.refs) {
      bool found = false;
      for (const auto& env : store->list())
        if (env.artifact_id == ref) found = true;
      if (!found)
        raise(ErrorCode::OutputInvalid,
              "scratchbook ref '" + ref + "' does not resolve in the run");
    }
  }
  entry.run_id = run_id_;
  entry.seq = static_cast<int>(entries().size());
  support::append_text_file(file_path(), entry.to_json().dump() + "\n");
  return "sb-" + std::to_string(entry.seq);
}

std::vector<ScratchbookEntry> Scratchbook::entries() const {
  std::vector<ScratchbookEntry> out;
  if (!support::file_exists(file_path())) return out;
  std::ifstream in(file_path());
  std::string line;
  while (std::getline(in, line)) {
    if (support::trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    auto entry = j.is_discarded() ? std::nullopt
                                  : ScratchbookEntry::from_json(j);
    if (entry) out.push_back(*entry);
  }
  return out;
}

std::string Scratchbook::render() const {
  std::string out;
  for (const auto& e : entries()) {
    out += "- [" + std::string(to_string(e.author_role)) + " @ " +
           std::string(to_string(e.stage)) + "] " + e.lesson;
    if (!e.refs.empty()) {
      out += " (refs:";
      for (const auto& r : e.refs) out += " " + r;
      out += ")";
    }
    out += "\n";
  }
  return out;
}

void Scratchbook::close() {
  if (!closed()) support::write_text_file(closed_marker(), "closed\n");
}

bool Scratchbook::closed() const {
  return support::file_exists(closed_marker());
}

}  // namespace visforge::memory
