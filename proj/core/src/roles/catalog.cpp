#include "visforge/roles/catalog.hpp"

#include <algorithm>
#include <set>

#include "visforge/build_info.hpp"
#include "visforge/error.hpp"
#include "visforge/support/text.hpp"

namespace visforge::roles {

bool RoleSpec::tool_allowed(const std::string& name) const {
  return std::find(allowed_tools.begin(), allowed_tools.end(), name) !=
         allowed_tools.end();
}

const RoleSpec& Catalog::find(RoleName name) const {
  for (const auto& r : roles)
    if (r.name == name) return r;
  raise(ErrorCode::ConfigInvalid,
        "role " + std::string(to_string(name)) + " missing from catalog");
}

std::vector<const SkillPack*> Catalog::skills_for(RoleName name) const {
  std::vector<const SkillPack*> out;
  for (const auto& s : skills) {
    if (std::find(s.attach_to.begin(), s.attach_to.end(), name) !=
        s.attach_to.end())
      out.push_back(&s);
  }
  return out;
}

void Catalog::validate(const std::vector<std::string>& registered_tools) const {
  std::set<std::string> known(registered_tools.begin(),
                              registered_tools.end());
  for (const auto& r : roles) {
    for (const auto& t : r.allowed_tools) {
      if (!known.count(t))
        raise(ErrorCode::ConfigInvalid,
              std::string(to_string(r.name)) + " allows unregistered tool '" +
                  t + "'");
    }
    if (r.max_turns <= 0)
      raise(ErrorCode::ConfigInvalid,
            std::string(to_string(r.name)) + " has non-positive max_turns");
  }
  for (const auto& s : skills) {
    for (RoleName target : s.attach_to) {
      bool exists = std::any_of(roles.begin(), roles.end(),
                                [&](const RoleSpec& r) {
                                  return r.name == target;
                                });
      if (!exists)
        raise(ErrorCode::ConfigInvalid,
              "skill " + s.name + " attaches to a role not in the catalog");
    }
  }
  // Single-producer kinds must have exactly one producing role;
  // AppBundleRef is shared by Orchestrator and VisDesigner by design.
  for (ArtifactKind kind :
       {ArtifactKind::EdaReport, ArtifactKind::DesignPlan,
        ArtifactKind::EnvironmentManifest, ArtifactKind::Scorecard,
        ArtifactKind::WikiPageUpdate}) {
    int producers = 0;
    for (const auto& r : roles)
      if (r.output_kind == kind) ++producers;
    if (producers != 1)
      raise(ErrorCode::ConfigInvalid,
            std::string(to_string(kind)) + " has " +
                std::to_string(producers) + " producing roles");
  }
}

namespace {

std::string load_text(const fs::path& dir, const std::string& rel) {
  fs::path p = dir / rel;
  if (!support::file_exists(p))
    raise(ErrorCode::ConfigInvalid, "catalog file missing: " + p.string());
  return support::read_text_file(p);
}

}  // namespace

Catalog default_catalog(const fs::path& catalog_dir) {
  const std::vector<std::string> file_tools = {"write_file", "read_file",
                                               "list_files"};
  const std::vector<std::string> task_tools = {"read_task_file",
                                               "list_task_files"};
  const std::vector<std::string> browser_tools = {
      "navigate",        "click",       "set_value", "wait_for_selector",
      "screenshot", "console_messages", "dom_summary"};

  auto concat = [](std::initializer_list<std::vector<std::string>> lists) {
    std::vector<std::string> out;
    for (const auto& l : lists) out.insert(out.end(), l.begin(), l.end());
    return out;
  };

  Catalog cat;

  RoleSpec orchestrator;
  orchestrator.name = RoleName::Orchestrator;
  orchestrator.system_prompt_template =
      load_text(catalog_dir, "roles/orchestrator.md");
  orchestrator.input_kinds = {ArtifactKind::EdaReport,
                              ArtifactKind::EnvironmentManifest,
                              ArtifactKind::DesignPlan};
  orchestrator.output_kind = ArtifactKind::AppBundleRef;
  orchestrator.allowed_tools = concat(
      {file_tools, task_tools, {"run_command", "scratchbook_append"}});
  orchestrator.max_turns = 20;
  cat.roles.push_back(std::move(orchestrator));

  RoleSpec eda;
  eda.name = RoleName::Eda;
  eda.system_prompt_template = load_text(catalog_dir, "roles/eda.md");
  eda.input_kinds = {};
  eda.output_kind = ArtifactKind::EdaReport;
  eda.allowed_tools =
      concat({task_tools, {"run_command", "scratchbook_append"}});
  eda.max_turns = 12;
  cat.roles.push_back(std::move(eda));

  RoleSpec planner;
  planner.name = RoleName::Planner;
  planner.system_prompt_template = load_text(catalog_dir, "roles/planner.md");
  planner.input_kinds = {ArtifactKind::EdaReport};
  planner.output_kind = ArtifactKind::DesignPlan;
  planner.allowed_tools = {"scratchbook_append"};
  planner.max_turns = 6;
  cat.roles.push_back(std::move(planner));

  RoleSpec env_builder;
  env_builder.name = RoleName::EnvironmentBuilder;
  env_builder.system_prompt_template =
      load_text(catalog_dir, "roles/environment_builder.md");
  env_builder.input_kinds = {ArtifactKind::EdaReport};
  env_builder.output_kind = ArtifactKind::EnvironmentManifest;
  env_builder.allowed_tools =
      concat({file_tools, {"run_command", "scratchbook_append"}});
  env_builder.max_turns = 8;
  cat.roles.push_back(std::move(env_builder));

  RoleSpec designer;
  designer.name = RoleName::VisDesigner;
  designer.system_prompt_template =
      load_text(catalog_dir, "roles/vis_designer.md");
  designer.input_kinds = {ArtifactKind::DesignPlan, ArtifactKind::Feedback};
  designer.output_kind = ArtifactKind::AppBundleRef;
  designer.allowed_tools =
      concat({file_tools, browser_tools, {"scratchbook_append"}});
  designer.max_turns = 20;
  cat.roles.push_back(std::move(designer));

  RoleSpec evaluator;
  evaluator.name = RoleName::Evaluator;
  evaluator.system_prompt_template =
      load_text(catalog_dir, "roles/evaluator.md");
  evaluator.input_kinds = {ArtifactKind::DesignPlan,
                           ArtifactKind::AppBundleRef};
  evaluator.output_kind = ArtifactKind::Scorecard;
  evaluator.allowed_tools = concat({browser_tools, {"scratchbook_append"}});
  evaluator.max_turns = 12;
  cat.roles.push_back(std::move(evaluator));

  RoleSpec maintainer;
  maintainer.name = RoleName::MemoryMaintainer;
  maintainer.system_prompt_template =
      load_text(catalog_dir, "roles/memory_maintainer.md");
  maintainer.input_kinds = {ArtifactKind::EdaReport, ArtifactKind::Feedback,
                            ArtifactKind::Scorecard};
  maintainer.output_kind = ArtifactKind::WikiPageUpdate;
  maintainer.allowed_tools = {};
  maintainer.max_turns = 6;
  cat.roles.push_back(std::move(maintainer));

  SkillPack vis_skill;
  vis_skill.name = "VisSkill";
  vis_skill.body = load_text(catalog_dir, "skills/vis_skill.md");
  vis_skill.attach_to = {RoleName::Planner, RoleName::VisDesigner,
                         RoleName::Evaluator};
  cat.skills.push_back(std::move(vis_skill));

  SkillPack frontend_skill;
  frontend_skill.name = "FrontendSkill";
  frontend_skill.body = load_text(catalog_dir, "skills/frontend_skill.md");
  frontend_skill.attach_to = {RoleName::Orchestrator, RoleName::VisDesigner};
  cat.skills.push_back(std::move(frontend_skill));

  SkillPack scratchbook_skill;
  scratchbook_skill.name = "ScratchbookSkill";
  scratchbook_skill.body =
      load_text(catalog_dir, "skills/scratchbook_skill.md");
  scratchbook_skill.attach_to = {
      RoleName::Orchestrator, RoleName::Eda,       RoleName::Planner,
      RoleName::EnvironmentBuilder, RoleName::VisDesigner,
      RoleName::Evaluator};
  cat.skills.push_back(std::move(scratchbook_skill));

  SkillPack retrieval_skill;
  retrieval_skill.name = "MemoryRetrievalSkill";
  retrieval_skill.body =
      load_text(catalog_dir, "skills/memory_retrieval_skill.md");
  retrieval_skill.attach_to = {RoleName::MemoryMaintainer};
  cat.skills.push_back(std::move(retrieval_skill));

  return cat;
}

fs::path resolve_catalog_dir(const std::string& configured) {
  if (!configured.empty()) return configured;
  if (const char* env = getenv("VISFORGE_CATALOG")) return env;
  if (support::file_exists(fs::path(VISFORGE_INSTALL_CATALOG_DIR) / "roles"))
    return VISFORGE_INSTALL_CATALOG_DIR;
  return VISFORGE_SOURCE_CATALOG_DIR;
}

}  // namespace visforge::roles
