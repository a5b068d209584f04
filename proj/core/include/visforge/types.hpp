#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace visforge {

/// Pipeline stages of one run, in execution order. Evaluate may loop back to
/// Implement; every stage may drop to Failed on an unrecoverable error.
enum class Stage {
  Init,
  Eda,
  Environment,
  Plan,
  Implement,
  Evaluate,
  MemoryMaintain,
  Done,
  Failed,
};

/// Every document the agents exchange is one of these kinds.
enum class ArtifactKind {
  EdaReport,
  DesignPlan,
  EnvironmentManifest,
  Feedback,
  Scorecard,
  ScratchbookEntry,
  WikiPageUpdate,
  RunManifest,
  AppBundleRef,
};

/// The seven agent roles in the catalog.
enum class RoleName {
  Orchestrator,
  Eda,
  Planner,
  EnvironmentBuilder,
  VisDesigner,
  Evaluator,
  MemoryMaintainer,
};

std::string_view to_string(Stage s);
std::string_view to_string(ArtifactKind k);
std::string_view to_string(RoleName r);

std::optional<Stage> stage_from_string(std::string_view s);
std::optional<ArtifactKind> kind_from_string(std::string_view s);
std::optional<RoleName> role_from_string(std::string_view s);

/// Ordinal used in artifact file names and trail ordering. Stages that
/// produce artifacts are numbered 0..5 in pipeline order.
int stage_ordinal(Stage s);

/// File-name slug for an artifact kind, e.g. EdaReport -> "eda-report".
std::string_view kind_slug(ArtifactKind k);

/// Which stage produces a given artifact kind in a normal run.
Stage producing_stage(ArtifactKind k);

inline constexpr std::array<RoleName, 7> kAllRoles = {
    RoleName::Orchestrator,    RoleName::Eda,       RoleName::Planner,
    RoleName::EnvironmentBuilder, RoleName::VisDesigner, RoleName::Evaluator,
    RoleName::MemoryMaintainer,
};

inline constexpr std::array<ArtifactKind, 9> kAllKinds = {
    ArtifactKind::EdaReport,     ArtifactKind::DesignPlan,
    ArtifactKind::EnvironmentManifest, ArtifactKind::Feedback,
    ArtifactKind::Scorecard,     ArtifactKind::ScratchbookEntry,
    ArtifactKind::WikiPageUpdate, ArtifactKind::RunManifest,
    ArtifactKind::AppBundleRef,
};

}  // namespace visforge
