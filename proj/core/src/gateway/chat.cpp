#include "visforge/gateway/chat.hpp"

#include "visforge/support/digest.hpp"

namespace visforge::gateway {

using nlohmann::json;

bool ChatRequest::valid(std::string* why) const {
  auto fail = [&](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  if (messages.empty()) return fail("messages empty");
  const std::string& first = messages.front().role;
  if (first != "system" && first != "user")
    return fail("first message must be system or user");
  for (const auto& m : messages) {
    if (m.role != "system" && m.role != "user" && m.role != "assistant" &&
        m.role != "tool")
      return fail("unknown message role");
  }
  if (sampling.temperature < 0.0) return fail("negative temperature");
  if (sampling.max_output_tokens <= 0) return fail("max_output_tokens <= 0");
  return true;
}

std::string_view to_string(FinishReason r) {
  switch (r) {
    case FinishReason::Stop: return "stop";
    case FinishReason::ToolCall: return "tool_call";
    case FinishReason::Length: return "length";
    case FinishReason::Error: return "error";
  }
  return "?";
}

json TokenUsage::to_json() const {
  return json{{"input_tokens", input_tokens},
              {"cached_tokens", cached_tokens},
              {"output_tokens", output_tokens},
              {"reasoning_tokens", reasoning_tokens}};
}

TokenUsage TokenUsage::from_json(const json& j) {
  TokenUsage u;
  u.input_tokens = j.value("input_tokens", std::int64_t{0});
  u.cached_tokens = j.value("cached_tokens", std::int64_t{0});
  u.output_tokens = j.value("output_tokens", std::int64_t{0});
  u.reasoning_tokens = j.value("reasoning_tokens", std::int64_t{0});
  return u;
}

json ChatResponse::to_json() const {
  json calls = json::array();
  for (const auto& c : tool_calls)
    calls.push_back({{"tool_name", c.tool_name}, {"arguments", c.arguments}});
  return json{{"text", text},
              {"tool_calls", calls},
              {"usage", usage.to_json()},
              {"finish_reason", to_string(finish_reason)}};
}

ChatResponse ChatResponse::from_json(const json& j) {
  ChatResponse r;
  r.text = j.value("text", "");
  if (j.contains("tool_calls")) {
    for (const auto& c : j["tool_calls"]) {
      ToolCall call;
      call.tool_name = c.value("tool_name", "");
      call.arguments = c.value("arguments", json::object());
      r.tool_calls.push_back(std::move(call));
    }
  }
  if (j.contains("usage")) r.usage = TokenUsage::from_json(j["usage"]);
  std::string fr = j.value("finish_reason", "stop");
  if (fr == "tool_call")
    r.finish_reason = FinishReason::ToolCall;
  else if (fr == "length")
    r.finish_reason = FinishReason::Length;
  else if (fr == "error")
    r.finish_reason = FinishReason::Error;
  else
    r.finish_reason = FinishReason::Stop;
  return r;
}

json request_canonical_json(const ChatRequest& req) {
  json msgs = json::array();
  for (const auto& m : req.messages) {
    json jm = {{"role", m.role}, {"content", m.content}};
    if (!m.tool_call_ref.empty()) jm["tool_call_ref"] = m.tool_call_ref;
    msgs.push_back(std::move(jm));
  }
  json tools = json::array();
  for (const auto& t : req.tool_schemas)
    tools.push_back({{"name", t.name},
                     {"description", t.description},
                     {"parameters", t.parameters}});
  return json{{"messages", msgs},
              {"tool_schemas", tools},
              {"sampling",
               {{"temperature", req.sampling.temperature},
                {"max_output_tokens", req.sampling.max_output_tokens}}}};
}

std::string request_digest(const ChatRequest& req) {
  return support::sha256_hex(request_canonical_json(req).dump());
}

}  // namespace visforge::gateway
