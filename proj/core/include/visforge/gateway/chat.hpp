#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace visforge::gateway {

struct ChatMessage {
  std::string role;     ///< system | user | assistant | tool
  std::string content;
  std::string tool_call_ref;  ///< links a tool message to the call it answers
};

struct ToolSchema {
  std::string name;
  std::string description;
  nlohmann::json parameters;  ///< JSON-schema-shaped argument description
};

struct Sampling {
  double temperature = 0.0;
  int max_output_tokens = 4096;
};

struct ChatRequest {
  std::string session_id;
  std::vector<ChatMessage> messages;
  std::vector<ToolSchema> tool_schemas;
  Sampling sampling;

  /// messages non-empty; first message system or user; sampling sane.
  bool valid(std::string* why = nullptr) const;
};

struct ToolCall {
  std::string tool_name;
  nlohmann::json arguments;
};

struct TokenUsage {
  std::int64_t input_tokens = 0;
  std::int64_t cached_tokens = 0;
  std::int64_t output_tokens = 0;
  std::int64_t reasoning_tokens = 0;

  TokenUsage& operator+=(const TokenUsage& o) {
    input_tokens += o.input_tokens;
    cached_tokens += o.cached_tokens;
    output_tokens += o.output_tokens;
    reasoning_tokens += o.reasoning_tokens;
    return *this;
  }
  friend TokenUsage operator+(TokenUsage a, const TokenUsage& b) {
    a += b;
    return a;
  }
  bool operator==(const TokenUsage&) const = default;

  bool sane() const {
    return input_tokens >= 0 && cached_tokens >= 0 && output_tokens >= 0 &&
           reasoning_tokens >= 0 && reasoning_tokens <= output_tokens;
  }

  nlohmann::json to_json() const;
  static TokenUsage from_json(const nlohmann::json& j);
};

enum class FinishReason { Stop, ToolCall, Length, Error };

std::string_view to_string(FinishReason r);

struct ChatResponse {
  std::string text;
  std::vector<ToolCall> tool_calls;
  TokenUsage usage;
  FinishReason finish_reason = FinishReason::Stop;

  nlohmann::json to_json() const;
  static ChatResponse from_json(const nlohmann::json& j);
};

/// Canonical JSON for a request. Excludes session_id so replays survive
/// run-id churn; key order is stable (objects serialize sorted).
nlohmann::json request_canonical_json(const ChatRequest& req);

/// sha256 over the canonical form; the transcript key.
std::string request_digest(const ChatRequest& req);

}  // namespace visforge::gateway
