#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "visforge/types.hpp"

namespace visforge::artifact {

struct Violation {
  std::string field;
  std::string message;
};

/// Violations are values, never exceptions: an invalid body is a normal
/// outcome the caller reports back to the emitting role.
struct ValidationResult {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

/// Cross-artifact facts a caller may supply. Without them, only
/// self-contained invariants are checked (a body alone cannot know the
/// variable catalog of the run's EDA report).
struct ValidationContext {
  std::optional<std::vector<std::string>> known_variables;
};

/// Checks every invariant of `kind` that the body can violate on its own,
/// plus referential checks against the context when present.
ValidationResult validate_artifact(ArtifactKind kind, std::string_view body,
                                   const ValidationContext& ctx = {});

/// Kinds written once per design-loop iteration per role.
bool is_per_iteration_kind(ArtifactKind kind);

/// Kinds written at most once per run (their stages are never re-entered).
bool is_singleton_kind(ArtifactKind kind);

}  // namespace visforge::artifact
