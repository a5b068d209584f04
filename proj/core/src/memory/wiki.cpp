#include "visforge/memory/wiki.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "visforge/artifact/body.hpp"
#include "visforge/artifact/schemas.hpp"
#include "visforge/artifact/store.hpp"
#include "visforge/error.hpp"
#include "visforge/roles/runner.hpp"
#include "visforge/roles/tool_registry.hpp"
#include "visforge/support/digest.hpp"
#include "visforge/support/text.hpp"

namespace visforge::memory {

using nlohmann::json;

std::string WikiPage::serialize() const {
  json meta = {{"path", path}, {"title", title}};
  std::string out = "---\n" + meta.dump(2) + "\n---\n\n";
  out += "# " + title + "\n";
  for (const auto& section : sections) {
    out += "\n## " + section.heading + "\n\n";
    for (const auto& b : section.bullets)
      out += "- " + b.text + " _(" + b.run_id + "/" + b.artifact_id + ")_\n";
  }
  return out;
}

std::optional<WikiPage> WikiPage::parse(std::string_view markdown) {
  auto doc = artifact::parse_document(markdown);
  if (!doc || !doc->meta.contains("path") || !doc->meta.contains("title"))
    return std::nullopt;

  WikiPage page;
  page.path = doc->meta["path"].get<std::string>();
  page.title = doc->meta["title"].get<std::string>();

  WikiSection* current = nullptr;
  for (const std::string& raw : support::split(doc->prose, '\n')) {
    std::string line = support::trim(raw);
    if (line.rfind("## ", 0) == 0) {
      page.sections.push_back({line.substr(3), {}});
      current = &page.sections.back();
    } else if (line.rfind("- ", 0) == 0 && current) {
      std::string text = line.substr(2);
      size_t open = text.rfind(" _(");
      if (open == std::string::npos || text.size() < 2 ||
          text.compare(text.size() - 2, 2, ")_") != 0)
        return std::nullopt;  // bullet without provenance
      std::string prov = text.substr(open + 3,
                                     text.size() - open - 3 - 2);
      size_t slash = prov.find('/');
      if (slash == std::string::npos) return std::nullopt;
      WikiBullet bullet;
      bullet.text = text.substr(0, open);
      bullet.run_id = prov.substr(0, slash);
      bullet.artifact_id = prov.substr(slash + 1);
      current->bullets.push_back(std::move(bullet));
    }
  }
  return page;
}

std::optional<PageUpdate> PageUpdate::from_body(std::string_view body) {
  auto validation =
      artifact::validate_artifact(ArtifactKind::WikiPageUpdate, body);
  if (!validation.ok()) return std::nullopt;
  auto doc = artifact::parse_document(body);
  PageUpdate update;
  update.page = doc->meta["page"].get<std::string>();
  update.title = doc->meta["title"].get<std::string>();
  for (const auto& s : doc->meta["sections"]) {
    WikiSection section;
    section.heading = s["heading"].get<std::string>();
    for (const auto& b : s["bullets"]) {
      WikiBullet bullet;
      bullet.text = b["text"].get<std::string>();
      bullet.artifact_id = b["artifact"].get<std::string>();
      section.bullets.push_back(std::move(bullet));
    }
    update.sections.push_back(std::move(section));
  }
  return update;
}

WikiPage merge_page(const std::optional<WikiPage>& existing,
                    const PageUpdate& update, const std::string& run_id) {
  WikiPage page;
  if (existing) {
    page = *existing;
  } else {
    page.path = update.page;
    page.title = update.title;
  }

  for (const auto& incoming : update.sections) {
    WikiSection* section = nullptr;
    for (auto& s : page.sections)
      if (s.heading == incoming.heading) section = &s;
    if (!section) {
      page.sections.push_back({incoming.heading, {}});
      section = &page.sections.back();
    }
    for (const auto& b : incoming.bullets) {
      WikiBullet bullet{b.text, run_id, b.artifact_id};
      bool duplicate = std::any_of(
          section->bullets.begin(), section->bullets.end(),
          [&](const WikiBullet& have) {
            return have.text == bullet.text && have.run_id == bullet.run_id &&
                   have.artifact_id == bullet.artifact_id;
          });
      if (!duplicate) section->bullets.push_back(std::move(bullet));
    }
  }
  return page;
}

fs::path Wiki::page_file(const std::string& page_path) const {
  return root_ / (page_path + ".md");
}

std::optional<WikiPage> Wiki::load(const std::string& page_path) const {
  if (!support::file_exists(page_file(page_path))) return std::nullopt;
  return WikiPage::parse(support::read_text_file(page_file(page_path)));
}

void Wiki::save(const WikiPage& page) {
  support::write_text_file(page_file(page.path), page.serialize());
}

void Wiki::apply(const PageUpdate& update, const std::string& run_id) {
  save(merge_page(load(update.page), update, run_id));
}

std::vector<std::string> Wiki::list_pages() const {
  std::vector<std::string> out;
  if (!fs::exists(root_)) return out;
  for (const auto& entry : fs::recursive_directory_iterator(root_)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".md")
      continue;
    std::string rel = fs::relative(entry.path(), root_).generic_string();
    out.push_back(rel.substr(0, rel.size() - 3));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string Wiki::tree_hash() const {
  std::string acc;
  for (const auto& page : list_pages()) {
    acc += page;
    acc += '\0';
    acc += support::read_text_file(page_file(page));
    acc += '\0';
  }
  return support::sha256_hex(acc);
}

std::vector<std::pair<WikiPage, double>> Wiki::retrieve(
    const std::string& query, size_t k) const {
  std::set<std::string> query_terms;
  for (auto& t : support::tokenize_terms(query)) query_terms.insert(t);
  if (query_terms.empty()) return {};

  struct Scored {
    WikiPage page;
    double score;
    std::string path;
  };
  std::vector<Scored> scored;

  for (const auto& path : list_pages()) {
    auto page = load(path);
    if (!page) continue;
    std::set<std::string> title_terms;
    for (auto& t : support::tokenize_terms(page->title))
      title_terms.insert(t);
    std::set<std::string> page_terms = title_terms;
    for (auto& t : support::tokenize_terms(
             support::read_text_file(page_file(path))))
      page_terms.insert(t);

    // Normalized overlap with a x3 title boost:
    //   (|Q ∩ P| + 3|Q ∩ T|) / (|Q| + 3|T|)  ∈ [0,1]
    double hit = 0, title_hit = 0;
    for (const auto& t : query_terms) {
      if (page_terms.count(t)) hit += 1;
      if (title_terms.count(t)) title_hit += 1;
    }
    double denom = static_cast<double>(query_terms.size()) +
                   3.0 * static_cast<double>(title_terms.size());
    double score = denom > 0 ? (hit + 3.0 * title_hit) / denom : 0.0;
    if (score > 0.0) scored.push_back({*page, score, path});
  }

  std::sort(scored.begin(), scored.end(), [](const Scored& a,
                                             const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.path < b.path;
  });
  if (scored.size() > k) scored.resize(k);

  std::vector<std::pair<WikiPage, double>> out;
  for (auto& s : scored) out.emplace_back(std::move(s.page), s.score);
  return out;
}

std::vector<std::string> Wiki::lint(
    const std::optional<fs::path>& runs_root) const {
  std::vector<std::string> problems;
  for (const auto& path : list_pages()) {
    auto page = load(path);
    if (!page) {
      problems.push_back(path + ": unparseable page");
      continue;
    }
    if (page->path != path)
      problems.push_back(path + ": front-matter path says " + page->path);
    if (page->title.empty()) problems.push_back(path + ": empty title");
    for (const auto& section : page->sections) {
      for (const auto& b : section.bullets) {
        if (b.run_id.empty() || b.artifact_id.empty()) {
          problems.push_back(path + ": bullet without provenance");
          continue;
        }
        if (!runs_root) continue;
        bool resolved = false;
        try {
          artifact::ArtifactStore store(*runs_root / b.run_id);
          for (const auto& env : store.list())
            if (env.artifact_id == b.artifact_id) resolved = true;
        } catch (const Error&) {
        }
        if (!resolved)
          problems.push_back(path + ": provenance " + b.run_id + "/" +
                             b.artifact_id + " does not resolve");
      }
    }
  }
  return problems;
}

DistillOutcome distill(const artifact::ArtifactStore& store,
                       const Scratchbook& scratchbook,
                       const roles::Catalog& catalog,
                       gateway::Gateway& gateway, Wiki& wiki,
                       const std::string& instruction) {
  const roles::RoleSpec& maintainer =
      catalog.find(RoleName::MemoryMaintainer);

  roles::ContextSources sources;
  sources.store = &store;
  sources.instruction = instruction;
  std::string trail;
  for (const auto& env : store.list())
    trail += "- " + env.artifact_id + " (" +
             std::string(to_string(env.kind)) + ")\n";
  sources.extra_sections = {
      {"Scratchbook lessons", scratchbook.render()},
      {"Artifact trail", trail},
  };

  roles::ToolRegistry empty_registry;
  roles::RoleRunResult run = roles::run_role(
      maintainer, catalog, gateway, empty_registry, sources,
      Stage::MemoryMaintain);

  DistillOutcome outcome;
  if (!run.emitted()) {
    outcome.dropped.emplace_back(
        "", "maintainer did not emit (" +
                std::string(to_string(run.transcript.status)) + ")");
    return outcome;
  }

  for (const std::string& body :
       roles::extract_all_artifact_blocks(run.final_text)) {
    auto update = PageUpdate::from_body(body);
    if (!update) {
      auto validation =
          artifact::validate_artifact(ArtifactKind::WikiPageUpdate, body);
      outcome.dropped.emplace_back(body, validation.summary());
      continue;
    }
    wiki.apply(*update, store.run_id());
    outcome.applied_bodies.push_back(body);
  }
  return outcome;
}

}  // namespace visforge::memory
