#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "visforge/types.hpp"

namespace visforge::roles {

namespace fs = std::filesystem;

/// Declarative definition of one subagent: what it reads, what it emits,
/// which tools it may call, and how many turns it gets.
struct RoleSpec {
  RoleName name = RoleName::Orchestrator;
  std::string system_prompt_template;  ///< {{placeholder}} syntax
  std::vector<ArtifactKind> input_kinds;
  ArtifactKind output_kind = ArtifactKind::AppBundleRef;
  std::vector<std::string> allowed_tools;
  int max_turns = 6;

  bool tool_allowed(const std::string& name) const;
};

struct SkillPack {
  std::string name;  ///< VisSkill | FrontendSkill | ScratchbookSkill |
                     ///< MemoryRetrievalSkill
  std::string body;
  std::vector<RoleName> attach_to;
};

struct Catalog {
  std::vector<RoleSpec> roles;
  std::vector<SkillPack> skills;

  const RoleSpec& find(RoleName name) const;
  /// Skills attached to a role, in catalog order.
  std::vector<const SkillPack*> skills_for(RoleName name) const;

  /// Throws ConfigInvalid when attach_to names unknown roles, a role's
  /// allowed_tools are not registered, or the kind->producer map is broken.
  void validate(const std::vector<std::string>& registered_tools) const;
};

/// The seven roles and four skills with the stage map wired in. Template
/// and skill text load from `catalog_dir` (roles/*.md, skills/*.md); any
/// file a user overrides simply replaces the shipped text.
Catalog default_catalog(const fs::path& catalog_dir);

/// Resolution order: explicit config value, VISFORGE_CATALOG env var,
/// the source-tree catalog this binary was built from.
fs::path resolve_catalog_dir(const std::string& configured);

}  // namespace visforge::roles
