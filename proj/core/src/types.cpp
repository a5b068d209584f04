#include "visforge/types.hpp"

#include "visforge/error.hpp"

namespace visforge {

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::Init: return "Init";
    case Stage::Eda: return "Eda";
    case Stage::Environment: return "Environment";
    case Stage::Plan: return "Plan";
    case Stage::Implement: return "Implement";
    case Stage::Evaluate: return "Evaluate";
    case Stage::MemoryMaintain: return "MemoryMaintain";
    case Stage::Done: return "Done";
    case Stage::Failed: return "Failed";
  }
  return "?";
}

std::string_view to_string(ArtifactKind k) {
  switch (k) {
    case ArtifactKind::EdaReport: return "EdaReport";
    case ArtifactKind::DesignPlan: return "DesignPlan";
    case ArtifactKind::EnvironmentManifest: return "EnvironmentManifest";
    case ArtifactKind::Feedback: return "Feedback";
    case ArtifactKind::Scorecard: return "Scorecard";
    case ArtifactKind::ScratchbookEntry: return "ScratchbookEntry";
    case ArtifactKind::WikiPageUpdate: return "WikiPageUpdate";
    case ArtifactKind::RunManifest: return "RunManifest";
    case ArtifactKind::AppBundleRef: return "AppBundleRef";
  }
  return "?";
}

std::string_view to_string(RoleName r) {
  switch (r) {
    case RoleName::Orchestrator: return "Orchestrator";
    case RoleName::Eda: return "EDA";
    case RoleName::Planner: return "Planner";
    case RoleName::EnvironmentBuilder: return "EnvironmentBuilder";
    case RoleName::VisDesigner: return "VisDesigner";
    case RoleName::Evaluator: return "Evaluator";
    case RoleName::MemoryMaintainer: return "MemoryMaintainer";
  }
  return "?";
}

std::optional<Stage> stage_from_string(std::string_view s) {
  for (Stage st : {Stage::Init, Stage::Eda, Stage::Environment, Stage::Plan,
                   Stage::Implement, Stage::Evaluate, Stage::MemoryMaintain,
                   Stage::Done, Stage::Failed}) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

std::optional<ArtifactKind> kind_from_string(std::string_view s) {
  for (ArtifactKind k : kAllKinds) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

std::optional<RoleName> role_from_string(std::string_view s) {
  for (RoleName r : kAllRoles) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

int stage_ordinal(Stage s) {
  switch (s) {
    case Stage::Init: return 0;
    case Stage::Eda: return 0;
    case Stage::Environment: return 1;
    case Stage::Plan: return 2;
    case Stage::Implement: return 3;
    case Stage::Evaluate: return 4;
    case Stage::MemoryMaintain: return 5;
    case Stage::Done: return 6;
    case Stage::Failed: return 6;
  }
  return 6;
}

std::string_view kind_slug(ArtifactKind k) {
  switch (k) {
    case ArtifactKind::EdaReport: return "eda-report";
    case ArtifactKind::DesignPlan: return "design-plan";
    case ArtifactKind::EnvironmentManifest: return "environment-manifest";
    case ArtifactKind::Feedback: return "feedback";
    case ArtifactKind::Scorecard: return "scorecard";
    case ArtifactKind::ScratchbookEntry: return "scratchbook-entry";
    case ArtifactKind::WikiPageUpdate: return "wiki-page-update";
    case ArtifactKind::RunManifest: return "run-manifest";
    case ArtifactKind::AppBundleRef: return "app-bundle-ref";
  }
  return "?";
}

Stage producing_stage(ArtifactKind k) {
  switch (k) {
    case ArtifactKind::EdaReport: return Stage::Eda;
    case ArtifactKind::EnvironmentManifest: return Stage::Environment;
    case ArtifactKind::DesignPlan: return Stage::Plan;
    case ArtifactKind::AppBundleRef: return Stage::Implement;
    case ArtifactKind::Feedback: return Stage::Evaluate;
    case ArtifactKind::Scorecard: return Stage::Evaluate;
    case ArtifactKind::ScratchbookEntry: return Stage::MemoryMaintain;
    case ArtifactKind::WikiPageUpdate: return Stage::MemoryMaintain;
    case ArtifactKind::RunManifest: return Stage::Init;
  }
  return Stage::Init;
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownKind: return "UnknownKind";
    case ErrorCode::DuplicateArtifact: return "DuplicateArtifact";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::UnknownRun: return "UnknownRun";
    case ErrorCode::BackendUnavailable: return "BackendUnavailable";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::TranscriptMiss: return "TranscriptMiss";
    case ErrorCode::CorruptTranscript: return "CorruptTranscript";
    case ErrorCode::DigestCollision: return "DigestCollision";
    case ErrorCode::SpawnFailure: return "SpawnFailure";
    case ErrorCode::HandshakeTimeout: return "HandshakeTimeout";
    case ErrorCode::ProtocolError: return "ProtocolError";
    case ErrorCode::UnknownTool: return "UnknownTool";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::TransportClosed: return "TransportClosed";
    case ErrorCode::NavigationFailure: return "NavigationFailure";
    case ErrorCode::MissingInputArtifact: return "MissingInputArtifact";
    case ErrorCode::TurnBudgetExhausted: return "TurnBudgetExhausted";
    case ErrorCode::OutputInvalid: return "OutputInvalid";
    case ErrorCode::TaskDirMissing: return "TaskDirMissing";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::StageFailure: return "StageFailure";
    case ErrorCode::CorruptRun: return "CorruptRun";
    case ErrorCode::AppUnreachable: return "AppUnreachable";
    case ErrorCode::RubricInvalid: return "RubricInvalid";
    case ErrorCode::RunClosed: return "RunClosed";
    case ErrorCode::InvalidWikiUpdate: return "InvalidWikiUpdate";
    case ErrorCode::AlreadyInitialized: return "AlreadyInitialized";
    case ErrorCode::PathViolation: return "PathViolation";
    case ErrorCode::NoEntryPage: return "NoEntryPage";
    case ErrorCode::BindFailure: return "BindFailure";
    case ErrorCode::CommandSpawnFailure: return "CommandSpawnFailure";
  }
  return "?";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownKind: return 10;
    case ErrorCode::DuplicateArtifact: return 11;
    case ErrorCode::IoFailure: return 12;
    case ErrorCode::UnknownRun: return 13;
    case ErrorCode::BackendUnavailable: return 20;
    case ErrorCode::BudgetExceeded: return 21;
    case ErrorCode::TranscriptMiss: return 22;
    case ErrorCode::CorruptTranscript: return 23;
    case ErrorCode::DigestCollision: return 24;
    case ErrorCode::SpawnFailure: return 30;
    case ErrorCode::HandshakeTimeout: return 31;
    case ErrorCode::ProtocolError: return 32;
    case ErrorCode::UnknownTool: return 33;
    case ErrorCode::SchemaViolation: return 34;
    case ErrorCode::Timeout: return 35;
    case ErrorCode::TransportClosed: return 36;
    case ErrorCode::NavigationFailure: return 37;
    case ErrorCode::MissingInputArtifact: return 40;
    case ErrorCode::TurnBudgetExhausted: return 41;
    case ErrorCode::OutputInvalid: return 42;
    case ErrorCode::TaskDirMissing: return 50;
    case ErrorCode::ConfigInvalid: return 51;
    case ErrorCode::StageFailure: return 52;
    case ErrorCode::CorruptRun: return 53;
    case ErrorCode::AppUnreachable: return 60;
    case ErrorCode::RubricInvalid: return 61;
    case ErrorCode::RunClosed: return 70;
    case ErrorCode::InvalidWikiUpdate: return 71;
    case ErrorCode::AlreadyInitialized: return 80;
    case ErrorCode::PathViolation: return 81;
    case ErrorCode::NoEntryPage: return 82;
    case ErrorCode::BindFailure: return 83;
    case ErrorCode::CommandSpawnFailure: return 84;
  }
  return 99;
}

}  // namespace visforge
