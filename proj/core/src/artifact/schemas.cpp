#include "visforge/artifact/schemas.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "visforge/artifact/body.hpp"
#include "visforge/support/rational.hpp"

namespace visforge::artifact {

using nlohmann::json;

namespace {

class Checker {
 public:
  explicit Checker(ValidationResult& result) : result_(result) {}

  void fail(std::string field, std::string message) {
    result_.violations.push_back({std::move(field), std::move(message)});
  }

  const json* object(const json& meta, const std::string& field) {
    if (!meta.contains(field) || !meta[field].is_object()) {
      fail(field, "missing or not an object");
      return nullptr;
    }
    return &meta[field];
  }

  const json* array(const json& meta, const std::string& field) {
    if (!meta.contains(field) || !meta[field].is_array()) {
      fail(field, "missing or not an array");
      return nullptr;
    }
    return &meta[field];
  }

  std::optional<std::string> string(const json& obj, const std::string& field,
                                    bool non_empty = true) {
    if (!obj.contains(field) || !obj[field].is_string()) {
      fail(field, "missing or not a string");
      return std::nullopt;
    }
    std::string v = obj[field].get<std::string>();
    if (non_empty && v.empty()) {
      fail(field, "must be non-empty");
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::int64_t> integer(const json& obj,
                                      const std::string& field) {
    if (!obj.contains(field) || !obj[field].is_number_integer()) {
      fail(field, "missing or not an integer");
      return std::nullopt;
    }
    return obj[field].get<std::int64_t>();
  }

 private:
  ValidationResult& result_;
};

void check_eda_report(Checker& ck, const json& meta) {
  ck.string(meta, "dataset_summary");
  ck.string(meta, "feasibility_notes", /*non_empty=*/false);

  std::set<std::string> variables;
  if (const json* catalog = ck.array(meta, "variable_catalog")) {
    for (size_t i = 0; i < catalog->size(); ++i) {
      const json& var = (*catalog)[i];
      std::string at = "variable_catalog[" + std::to_string(i) + "]";
      if (!var.is_object()) {
        ck.fail(at, "not an object");
        continue;
      }
      if (auto name = ck.string(var, "name")) variables.insert(*name);
      ck.string(var, "dtype");
      ck.string(var, "role_tag", false);
      if (!var.contains("missing_fraction") ||
          !var["missing_fraction"].is_number()) {
        ck.fail(at + ".missing_fraction", "missing or not a number");
      } else {
        double mf = var["missing_fraction"].get<double>();
        if (mf < 0.0 || mf > 1.0)
          ck.fail(at + ".missing_fraction",
                  "missing_fraction out of [0,1]: " + std::to_string(mf));
      }
    }
  }

  if (const json* findings = ck.array(meta, "data_quality_findings")) {
    for (const json& f : *findings) {
      if (!f.is_object() || !f.contains("finding"))
        ck.fail("data_quality_findings", "entry needs a 'finding' tag");
    }
  }
  if (const json* sources = ck.array(meta, "authoritative_sources")) {
    for (const json& s : *sources) {
      if (!s.is_object() || !s.contains("path"))
        ck.fail("authoritative_sources", "entry needs a 'path'");
    }
  }
  if (const json* axes = ck.array(meta, "recommended_primary_axes")) {
    for (size_t i = 0; i < axes->size(); ++i) {
      const json& a = (*axes)[i];
      std::string at = "recommended_primary_axes[" + std::to_string(i) + "]";
      if (!a.is_object()) {
        ck.fail(at, "not an object");
        continue;
      }
      for (const char* key : {"x", "y"}) {
        if (auto v = ck.string(a, key)) {
          if (!variables.count(*v))
            ck.fail(at + "." + key,
                    "variable '" + *v + "' not in variable_catalog");
        }
      }
    }
  }
}

void check_design_plan(Checker& ck, const json& meta,
                       const ValidationContext& ctx) {
  std::set<std::string> panel_ids;
  if (const json* panels = ck.array(meta, "panels")) {
    for (size_t i = 0; i < panels->size(); ++i) {
      const json& p = (*panels)[i];
      std::string at = "panels[" + std::to_string(i) + "]";
      if (!p.is_object()) {
        ck.fail(at, "not an object");
        continue;
      }
      if (auto id = ck.string(p, "panel_id")) {
        if (!panel_ids.insert(*id).second)
          ck.fail(at + ".panel_id", "duplicate panel_id '" + *id + "'");
      }
      ck.string(p, "encoding");
      if (p.contains("bindings") && p["bindings"].is_array() &&
          ctx.known_variables) {
        for (const json& b : p["bindings"]) {
          if (!b.is_string()) continue;
          const std::string var = b.get<std::string>();
          if (std::find(ctx.known_variables->begin(),
                        ctx.known_variables->end(),
                        var) == ctx.known_variables->end())
            ck.fail(at + ".bindings",
                    "variable '" + var + "' not in the variable catalog");
        }
      }
    }
  }

  std::set<std::string> state_slots;
  if (const json* shared = ck.array(meta, "shared_state")) {
    for (const json& s : *shared) {
      if (s.is_object() && s.contains("name") && s["name"].is_string())
        state_slots.insert(s["name"].get<std::string>());
      else
        ck.fail("shared_state", "entry needs a 'name'");
    }
  }

  if (const json* linkages = ck.array(meta, "linkages")) {
    for (size_t i = 0; i < linkages->size(); ++i) {
      const json& l = (*linkages)[i];
      std::string at = "linkages[" + std::to_string(i) + "]";
      if (!l.is_object()) {
        ck.fail(at, "not an object");
        continue;
      }
      for (const char* key : {"source", "target"}) {
        if (auto v = ck.string(l, key)) {
          if (!panel_ids.count(*v))
            ck.fail(at + "." + key, "undeclared panel '" + *v + "'");
        }
      }
      if (auto v = ck.string(l, "state")) {
        if (!state_slots.count(*v))
          ck.fail(at + ".state", "undeclared state slot '" + *v + "'");
      }
    }
  }

  ck.array(meta, "risks");
  if (const json* checks = ck.array(meta, "validation_checks")) {
    static const std::set<std::string> kinds = {
        "BlankPanel", "ConsoleError", "LinkedViewSync", "LayoutOverflow",
        "ControlResponds"};
    for (size_t i = 0; i < checks->size(); ++i) {
      const json& c = (*checks)[i];
      std::string at = "validation_checks[" + std::to_string(i) + "]";
      if (!c.is_object()) {
        ck.fail(at, "not an object");
        continue;
      }
      ck.string(c, "check_id");
      auto kind = ck.string(c, "kind");
      if (kind && !kinds.count(*kind))
        ck.fail(at + ".kind", "unknown check kind '" + *kind + "'");
      if (kind && *kind == "LinkedViewSync") {
        if (!c.contains("source") || !c["source"].is_string())
          ck.fail(at + ".source", "LinkedViewSync needs a source selector");
        if (!c.contains("targets") || !c["targets"].is_array() ||
            c["targets"].empty())
          ck.fail(at + ".targets", "LinkedViewSync needs >=1 target");
        if (!c.contains("interaction") || !c["interaction"].is_array())
          ck.fail(at + ".interaction", "LinkedViewSync needs an interaction");
      }
    }
  }
}

void check_environment_manifest(Checker& ck, const json& meta) {
  if (const json* deps = ck.array(meta, "dependencies")) {
    static const std::set<std::string> purposes = {
        "data-access", "visualization", "browser-validation"};
    for (size_t i = 0; i < deps->size(); ++i) {
      const json& d = (*deps)[i];
      std::string at = "dependencies[" + std::to_string(i) + "]";
      if (!d.is_object()) {
        ck.fail(at, "not an object");
        continue;
      }
      ck.string(d, "name");
      ck.string(d, "version", false);
      auto purpose = ck.string(d, "purpose");
      if (purpose && !purposes.count(*purpose))
        ck.fail(at + ".purpose",
                "purpose must be one of data-access|visualization|"
                "browser-validation, got '" +
                    *purpose + "'");
    }
  }
  if (const json* cmds = ck.array(meta, "install_commands")) {
    for (const json& c : *cmds) {
      if (!c.is_array() || c.empty())
        ck.fail("install_commands", "each command is a non-empty argv array");
    }
  }
  if (const json* run = ck.object(meta, "run_command")) {
    if (run->empty()) ck.fail("run_command", "must not be empty");
  }
  ck.string(meta, "verification_notes", false);
}

void check_feedback(Checker& ck, const json& meta) {
  auto iteration = ck.integer(meta, "iteration");
  if (iteration && *iteration < 0) ck.fail("iteration", "must be >= 0");

  bool any_blocking = false;
  if (const json* issues = ck.array(meta, "issues")) {
    static const std::set<std::string> severities = {"blocking", "major",
                                                     "minor"};
    static const std::set<std::string> categories = {
        "render", "interaction", "data", "layout", "task-fit"};
    for (size_t i = 0; i < issues->size(); ++i) {
      const json& is = (*issues)[i];
      std::string at = "issues[" + std::to_string(i) + "]";
      if (!is.is_object()) {
        ck.fail(at, "not an object");
        continue;
      }
      ck.string(is, "issue_id");
      auto sev = ck.string(is, "severity");
      if (sev) {
        if (!severities.count(*sev))
          ck.fail(at + ".severity", "unknown severity '" + *sev + "'");
        if (*sev == "blocking") any_blocking = true;
      }
      auto cat = ck.string(is, "category");
      if (cat && !categories.count(*cat))
        ck.fail(at + ".category", "unknown category '" + *cat + "'");
      ck.string(is, "evidence");
      ck.string(is, "suggested_fix");
    }
  }
  if (!meta.contains("pass") || !meta["pass"].is_boolean()) {
    ck.fail("pass", "missing or not a boolean");
  } else if (meta["pass"].get<bool>() == any_blocking) {
    ck.fail("pass", "pass must be true iff no blocking issue exists");
  }
}

void check_scorecard(Checker& ck, const json& meta) {
  std::vector<int> scores;
  if (const json* criteria = ck.array(meta, "criteria")) {
    for (size_t i = 0; i < criteria->size(); ++i) {
      const json& c = (*criteria)[i];
      std::string at = "criteria[" + std::to_string(i) + "]";
      if (!c.is_object()) {
        ck.fail(at, "not an object");
        continue;
      }
      ck.string(c, "criterion_id");
      ck.string(c, "prompt");
      ck.string(c, "justification", false);
      if (auto score = ck.integer(c, "score")) {
        if (*score < 1 || *score > 5)
          ck.fail(at + ".score",
                  "score out of [1,5]: " + std::to_string(*score));
        else
          scores.push_back(static_cast<int>(*score));
      }
    }
  }

  support::Rational expected = support::mean_of(scores);
  if (const json* mean = ck.object(meta, "mean")) {
    auto num = ck.integer(*mean, "num");
    auto den = ck.integer(*mean, "den");
    if (num && den) {
      support::Rational stored = support::Rational::of(*num, *den);
      if (!(stored == expected))
        ck.fail("mean", "stored mean " + stored.to_string() +
                            " != recomputed " + expected.to_string());
    }
  }
  if (const json* range = ck.array(meta, "range")) {
    if (range->size() != 2 || !(*range)[0].is_number_integer() ||
        !(*range)[1].is_number_integer()) {
      ck.fail("range", "must be [min,max] integers");
    } else if (!scores.empty()) {
      int lo = *std::min_element(scores.begin(), scores.end());
      int hi = *std::max_element(scores.begin(), scores.end());
      if ((*range)[0].get<int>() != lo || (*range)[1].get<int>() != hi)
        ck.fail("range", "range does not match scores (" +
                             std::to_string(lo) + "," + std::to_string(hi) +
                             ")");
    }
  }
}

void check_scratchbook_entry(Checker& ck, const json& meta) {
  if (auto role = ck.string(meta, "author_role")) {
    if (!role_from_string(*role))
      ck.fail("author_role", "unknown role '" + *role + "'");
  }
  if (auto stage = ck.string(meta, "stage")) {
    if (!stage_from_string(*stage))
      ck.fail("stage", "unknown stage '" + *stage + "'");
  }
  ck.string(meta, "lesson");
  ck.array(meta, "tags");
  ck.array(meta, "refs");
}

bool valid_wiki_path(const std::string& path) {
  auto parts = [&] {
    std::vector<std::string> out;
    std::string cur;
    for (char c : path) {
      if (c == '/') {
        out.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    out.push_back(cur);
    return out;
  }();
  if (parts.size() < 2 || parts.size() > 3) return false;
  if (parts[0] != "datasets" && parts[0] != "tasks" &&
      parts[0] != "vis-patterns")
    return false;
  for (size_t i = 1; i < parts.size(); ++i) {
    if (parts[i].empty()) return false;
    for (char c : parts[i]) {
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
            c == '_'))
        return false;
    }
  }
  return true;
}

void check_wiki_page_update(Checker& ck, const json& meta) {
  if (auto page = ck.string(meta, "page")) {
    if (!valid_wiki_path(*page))
      ck.fail("page",
              "page path must be datasets/|tasks/|vis-patterns/ with depth "
              "<= 3, got '" +
                  *page + "'");
  }
  ck.string(meta, "title");
  bool any_bullet = false;
  if (const json* sections = ck.array(meta, "sections")) {
    for (size_t i = 0; i < sections->size(); ++i) {
      const json& s = (*sections)[i];
      std::string at = "sections[" + std::to_string(i) + "]";
      if (!s.is_object()) {
        ck.fail(at, "not an object");
        continue;
      }
      ck.string(s, "heading");
      if (!s.contains("bullets") || !s["bullets"].is_array()) {
        ck.fail(at + ".bullets", "missing or not an array");
        continue;
      }
      for (size_t j = 0; j < s["bullets"].size(); ++j) {
        const json& b = s["bullets"][j];
        std::string bat = at + ".bullets[" + std::to_string(j) + "]";
        if (!b.is_object()) {
          ck.fail(bat, "not an object");
          continue;
        }
        ck.string(b, "text");
        if (!b.contains("artifact") || !b["artifact"].is_string() ||
            b["artifact"].get<std::string>().empty())
          ck.fail(bat + ".artifact", "bullet lacks provenance artifact id");
        else
          any_bullet = true;
      }
    }
  }
  if (!any_bullet) ck.fail("sections", "update carries no bullets");
}

void check_run_manifest(Checker& ck, const json& meta) {
  ck.string(meta, "run_id");
  ck.string(meta, "task_dir");
  ck.string(meta, "instruction");
  ck.object(meta, "config");
  if (const json* log = ck.array(meta, "stage_log")) {
    std::string prev_exit;
    for (size_t i = 0; i < log->size(); ++i) {
      const json& e = (*log)[i];
      std::string at = "stage_log[" + std::to_string(i) + "]";
      if (!e.is_object()) {
        ck.fail(at, "not an object");
        continue;
      }
      if (auto st = ck.string(e, "stage")) {
        if (!stage_from_string(*st))
          ck.fail(at + ".stage", "unknown stage '" + *st + "'");
      }
      auto entered = ck.string(e, "entered_at");
      auto exited = ck.string(e, "exited_at", false);
      // ISO-8601 UTC strings order lexicographically.
      if (entered && exited && !exited->empty() && *exited < *entered)
        ck.fail(at, "exited_at precedes entered_at");
      if (entered && !prev_exit.empty() && *entered < prev_exit)
        ck.fail(at, "stage_log entries overlap");
      if (exited && !exited->empty()) prev_exit = *exited;
    }
  }
}

void check_app_bundle_ref(Checker& ck, const json& meta) {
  auto root = ck.string(meta, "root");
  if (root && ((*root)[0] == '/' || root->find("..") != std::string::npos))
    ck.fail("root", "must be a relative path inside the workspace");
  auto entry = ck.string(meta, "entry");
  std::set<std::string> paths;
  if (const json* files = ck.array(meta, "files")) {
    for (size_t i = 0; i < files->size(); ++i) {
      const json& f = (*files)[i];
      std::string at = "files[" + std::to_string(i) + "]";
      if (!f.is_object()) {
        ck.fail(at, "not an object");
        continue;
      }
      if (auto p = ck.string(f, "path")) paths.insert(*p);
      // sha256/bytes are stamped by the harness from disk; emitting roles
      // list paths only.
      if (f.contains("sha256") && !f["sha256"].is_string())
        ck.fail(at + ".sha256", "not a string");
      if (f.contains("bytes")) {
        if (!f["bytes"].is_number_integer() ||
            f["bytes"].get<std::int64_t>() < 0)
          ck.fail(at + ".bytes", "not a non-negative integer");
      }
    }
  }
  if (entry && !paths.count(*entry))
    ck.fail("entry", "entry '" + *entry + "' not among bundle files");
}

}  // namespace

std::string ValidationResult::summary() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.field + ": " + v.message;
  }
  return out;
}

ValidationResult validate_artifact(ArtifactKind kind, std::string_view body,
                                   const ValidationContext& ctx) {
  ValidationResult result;
  Checker ck(result);

  auto doc = parse_document(body);
  if (!doc) {
    ck.fail("front_matter", "body lacks a parseable front-matter block");
    return result;
  }
  const json& meta = doc->meta;
  if (!meta.contains("kind") || !meta["kind"].is_string() ||
      meta["kind"].get<std::string>() != to_string(kind)) {
    ck.fail("kind", std::string("front matter kind must be '") +
                        std::string(to_string(kind)) + "'");
    return result;
  }

  switch (kind) {
    case ArtifactKind::EdaReport:
      check_eda_report(ck, meta);
      break;
    case ArtifactKind::DesignPlan:
      check_design_plan(ck, meta, ctx);
      break;
    case ArtifactKind::EnvironmentManifest:
      check_environment_manifest(ck, meta);
      break;
    case ArtifactKind::Feedback:
      check_feedback(ck, meta);
      break;
    case ArtifactKind::Scorecard:
      check_scorecard(ck, meta);
      break;
    case ArtifactKind::ScratchbookEntry:
      check_scratchbook_entry(ck, meta);
      break;
    case ArtifactKind::WikiPageUpdate:
      check_wiki_page_update(ck, meta);
      break;
    case ArtifactKind::RunManifest:
      check_run_manifest(ck, meta);
      break;
    case ArtifactKind::AppBundleRef:
      check_app_bundle_ref(ck, meta);
      break;
  }
  return result;
}

bool is_per_iteration_kind(ArtifactKind kind) {
  return kind == ArtifactKind::Feedback || kind == ArtifactKind::Scorecard ||
         kind == ArtifactKind::AppBundleRef;
}

bool is_singleton_kind(ArtifactKind kind) {
  return kind == ArtifactKind::EdaReport ||
         kind == ArtifactKind::EnvironmentManifest ||
         kind == ArtifactKind::DesignPlan;
}

}  // namespace visforge::artifact
