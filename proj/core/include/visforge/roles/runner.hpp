#pragma once

#include <optional>
#include <string>
#include <vector>

#include "visforge/artifact/schemas.hpp"
#include "visforge/artifact/store.hpp"
#include "visforge/gateway/gateway.hpp"
#include "visforge/roles/catalog.hpp"
#include "visforge/roles/tool_registry.hpp"

namespace visforge::roles {

/// The fence that separates a role's final artifact from its reasoning.
/// Everything outside the block stays in the transcript only.
inline constexpr const char* kArtifactFence = "```visforge-artifact";

/// First sentinel-fenced block in the text, or nullopt.
std::optional<std::string> extract_artifact_block(const std::string& text);

/// Every sentinel-fenced block, in order. The memory maintainer may emit
/// several page updates in one final message.
std::vector<std::string> extract_all_artifact_blocks(const std::string& text);

/// Everything assemble_context may draw from. `store` supplies input
/// artifact bodies; `extra_sections` carries stage-specific material such
/// as the task file listing for EDA or the scratchbook for the maintainer.
struct ContextSources {
  const artifact::ArtifactStore* store = nullptr;
  std::string instruction;
  int iteration = 0;
  std::vector<std::pair<std::string, std::string>> extra_sections;
};

/// Renders the role's system prompt (template + attached skills, catalog
/// order), embeds the instruction and the most recent body of every input
/// kind into the user message, and restricts tool schemas to the role's
/// allowlist. Throws MissingInputArtifact.
gateway::ChatRequest assemble_context(const RoleSpec& role,
                                      const Catalog& catalog,
                                      const ContextSources& sources,
                                      const ToolRegistry& registry);

enum class TurnStatus { Emitted, BudgetExhausted, ParseFailed };

std::string_view to_string(TurnStatus s);

struct ToolInvocationRecord {
  std::string tool_name;
  nlohmann::json arguments;
  nlohmann::json result;
  bool denied = false;
};

struct TurnRecord {
  std::string request_digest;
  std::string response_summary;
  std::vector<ToolInvocationRecord> tool_invocations;
};

struct TurnTranscript {
  RoleName role = RoleName::Orchestrator;
  std::vector<TurnRecord> turns;
  TurnStatus status = TurnStatus::BudgetExhausted;

  nlohmann::json to_json() const;
};

struct RoleRunResult {
  std::string body;        ///< validated artifact body; empty unless Emitted
  std::string final_text;  ///< the emitting turn's full assistant text
  TurnTranscript transcript;

  bool emitted() const {
    return transcript.status == TurnStatus::Emitted;
  }
};

/// Drives the turn loop: complete -> execute tool calls -> feed results
/// back, until the model emits a sentinel-fenced artifact or the budget
/// runs out. An emitted body is schema-validated; one retry with the
/// violation list appended, then ParseFailed. Requests for tools outside
/// the allowlist are refused and recorded, never executed.
RoleRunResult run_role(const RoleSpec& role, const Catalog& catalog,
                       gateway::Gateway& gateway, ToolRegistry& registry,
                       const ContextSources& sources, Stage stage,
                       const artifact::ValidationContext& vctx = {});

}  // namespace visforge::roles
