#include "visforge/roles/runner.hpp"

#include "visforge/error.hpp"
#include "visforge/support/text.hpp"

namespace visforge::roles {

using gateway::ChatMessage;
using gateway::ChatRequest;
using gateway::ChatResponse;
using gateway::FinishReason;

std::vector<std::string> extract_all_artifact_blocks(const std::string& text) {
  std::vector<std::string> blocks;
  const std::string body = support::normalize_newlines(text);
  const std::string open = std::string(kArtifactFence) + "\n";
  size_t pos = 0;
  while (true) {
    size_t start = body.find(open, pos);
    if (start == std::string::npos) break;
    if (start > 0 && body[start - 1] != '\n') {  // fence must start a line
      pos = start + open.size();
      continue;
    }
    size_t content_start = start + open.size();
    size_t end = body.find("\n```", content_start);
    if (end == std::string::npos) break;
    blocks.push_back(body.substr(content_start, end - content_start) + "\n");
    pos = end + 4;
  }
  return blocks;
}

std::optional<std::string> extract_artifact_block(const std::string& text) {
  auto blocks = extract_all_artifact_blocks(text);
  if (blocks.empty()) return std::nullopt;
  return blocks.front();
}

std::string_view to_string(TurnStatus s) {
  switch (s) {
    case TurnStatus::Emitted: return "emitted";
    case TurnStatus::BudgetExhausted: return "budget_exhausted";
    case TurnStatus::ParseFailed: return "parse_failed";
  }
  return "?";
}

nlohmann::json TurnTranscript::to_json() const {
  nlohmann::json jturns = nlohmann::json::array();
  for (const auto& t : turns) {
    nlohmann::json invocations = nlohmann::json::array();
    for (const auto& inv : t.tool_invocations)
      invocations.push_back({{"tool_name", inv.tool_name},
                             {"arguments", inv.arguments},
                             {"result", inv.result},
                             {"denied", inv.denied}});
    jturns.push_back({{"request_digest", t.request_digest},
                      {"response_summary", t.response_summary},
                      {"tool_invocations", invocations}});
  }
  return nlohmann::json{{"role", to_string(role)},
                        {"turns", jturns},
                        {"status", to_string(status)}};
}

ChatRequest assemble_context(const RoleSpec& role, const Catalog& catalog,
                             const ContextSources& sources,
                             const ToolRegistry& registry) {
  ChatRequest request;

  std::string system = support::render_template(
      role.system_prompt_template,
      {{"role_name", std::string(to_string(role.name))},
       {"output_kind", std::string(to_string(role.output_kind))},
       {"artifact_fence", kArtifactFence}});
  for (const SkillPack* skill : catalog.skills_for(role.name)) {
    system += "\n\n";
    system += skill->body;
  }
  request.messages.push_back({"system", system, ""});

  std::string user = "Task instruction:\n" + sources.instruction + "\n";
  for (ArtifactKind kind : role.input_kinds) {
    if (!sources.store)
      raise(ErrorCode::MissingInputArtifact,
            std::string(to_string(kind)) + " (no store attached)");
    auto envelope = sources.store->latest(kind);
    if (!envelope) {
      // The first Implement pass legitimately has no Feedback yet; the
      // kind is an input only once the loop has produced one.
      if (kind == ArtifactKind::Feedback && sources.iteration <= 1)
        continue;
      raise(ErrorCode::MissingInputArtifact, std::string(to_string(kind)));
    }
    user += "\n## Input artifact: " + std::string(to_string(kind)) + " (" +
            envelope->artifact_id + ")\n\n";
    user += sources.store->read_body(*envelope);
  }
  for (const auto& [heading, content] : sources.extra_sections) {
    user += "\n## " + heading + "\n\n" + content + "\n";
  }
  request.messages.push_back({"user", user, ""});

  request.tool_schemas = registry.schemas_for(role.allowed_tools);
  return request;
}

RoleRunResult run_role(const RoleSpec& role, const Catalog& catalog,
                       gateway::Gateway& gateway, ToolRegistry& registry,
                       const ContextSources& sources, Stage stage,
                       const artifact::ValidationContext& vctx) {
  RoleRunResult result;
  result.transcript.role = role.name;

  ChatRequest request = assemble_context(role, catalog, sources, registry);
  bool retried_invalid = false;
  int tool_seq = 0;

  for (int turn = 0; turn < role.max_turns; ++turn) {
    ChatResponse response = gateway.complete(request, role.name, stage);

    TurnRecord record;
    record.request_digest = gateway::request_digest(request);
    record.response_summary = response.text.substr(0, 200);

    if (!response.tool_calls.empty()) {
      request.messages.push_back({"assistant", response.text, ""});
      for (const auto& call : response.tool_calls) {
        ToolInvocationRecord inv;
        inv.tool_name = call.tool_name;
        inv.arguments = call.arguments;
        const std::string ref =
            call.tool_name + "#" + std::to_string(tool_seq++);
        if (!role.tool_allowed(call.tool_name)) {
          inv.denied = true;
          inv.result = {{"error", "ToolDenied"},
                        {"detail", "tool '" + call.tool_name +
                                       "' is not permitted for this role"}};
        } else if (!registry.has(call.tool_name)) {
          inv.result = {{"error", "ToolUnavailable"},
                        {"detail", "tool '" + call.tool_name +
                                       "' is not wired in this stage"}};
        } else {
          inv.result = registry.invoke(call.tool_name, call.arguments);
        }
        request.messages.push_back({"tool", inv.result.dump(), ref});
        record.tool_invocations.push_back(std::move(inv));
      }
      result.transcript.turns.push_back(std::move(record));
      continue;
    }

    result.transcript.turns.push_back(record);

    auto block = extract_artifact_block(response.text);
    if (!block) {
      request.messages.push_back({"assistant", response.text, ""});
      request.messages.push_back(
          {"user",
           std::string("No artifact block found. Emit the final ") +
               std::string(to_string(role.output_kind)) + " inside a " +
               kArtifactFence + " fenced block.",
           ""});
      continue;
    }

    artifact::ValidationResult validation =
        artifact::validate_artifact(role.output_kind, *block, vctx);
    if (validation.ok()) {
      result.body = *block;
      result.final_text = response.text;
      result.transcript.status = TurnStatus::Emitted;
      return result;
    }
    if (retried_invalid) {
      result.transcript.status = TurnStatus::ParseFailed;
      return result;
    }
    retried_invalid = true;
    request.messages.push_back({"assistant", response.text, ""});
    request.messages.push_back(
        {"user",
         "The emitted artifact failed validation: " + validation.summary() +
             ". Emit a corrected artifact block.",
         ""});
  }

  result.transcript.status = TurnStatus::BudgetExhausted;
  return result;
}

}  // namespace visforge::roles
