#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace visforge {

/// Typed failure codes. Grouped by module; the CLI maps each group onto a
/// distinct exit-code range.
enum class ErrorCode {
  // artifact store (10..)
  UnknownKind,
  DuplicateArtifact,
  IoFailure,
  UnknownRun,
  // llm gateway (20..)
  BackendUnavailable,
  BudgetExceeded,
  TranscriptMiss,
  CorruptTranscript,
  DigestCollision,
  // mcp connector (30..)
  SpawnFailure,
  HandshakeTimeout,
  ProtocolError,
  UnknownTool,
  SchemaViolation,
  Timeout,
  TransportClosed,
  NavigationFailure,
  // agent roles (40..)
  MissingInputArtifact,
  TurnBudgetExhausted,
  OutputInvalid,
  // orchestrator (50..)
  TaskDirMissing,
  ConfigInvalid,
  StageFailure,
  CorruptRun,
  // evaluator (60..)
  AppUnreachable,
  RubricInvalid,
  // memory wiki (70..)
  RunClosed,
  InvalidWikiUpdate,
  // workspace (80..)
  AlreadyInitialized,
  PathViolation,
  NoEntryPage,
  BindFailure,
  CommandSpawnFailure,
};

std::string_view to_string(ErrorCode code);

/// Process exit code for a failure, used by the CLI. Each module owns a
/// ten-wide range so scripts can tell failure domains apart.
int exit_code_for(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(std::move(message)) {}

  ErrorCode code() const { return code_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

[[noreturn]] inline void raise(ErrorCode code, std::string message) {
  throw Error(code, std::move(message));
}

}  // namespace visforge
