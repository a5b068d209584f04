#include "visforge/gateway/backends.hpp"

#include <fstream>

#include <httplib.h>

#include "visforge/error.hpp"
#include "visforge/support/text.hpp"

namespace visforge::gateway {

using nlohmann::json;

ChatResponse complete(Backend& backend, const ChatRequest& request) {
  std::string why;
  if (!request.valid(&why))
    raise(ErrorCode::BackendUnavailable, "invalid request: " + why);
  ChatResponse response = backend.complete(request);
  if (!response.usage.sane())
    raise(ErrorCode::BackendUnavailable,
          "backend '" + backend.name() + "' returned insane usage counters");
  if (response.finish_reason == FinishReason::ToolCall &&
      response.tool_calls.empty())
    raise(ErrorCode::BackendUnavailable,
          "finish_reason tool_call with no tool calls");
  return response;
}

// --- scripted ---------------------------------------------------------------

ScriptedBackend::ScriptedBackend(json script) {
  if (!script.is_object() || !script.contains("rules") ||
      !script["rules"].is_array())
    raise(ErrorCode::ConfigInvalid, "script needs a 'rules' array");
  for (const auto& r : script["rules"]) {
    Rule rule;
    rule.match = r.value("match", json::object());
    rule.once = r.value("once", false);
    rule.response = r.value("response", json::object());
    rules_.push_back(std::move(rule));
  }
}

std::unique_ptr<ScriptedBackend> ScriptedBackend::from_file(
    const fs::path& path) {
  json script = json::parse(support::read_text_file(path), nullptr, false);
  if (script.is_discarded())
    raise(ErrorCode::ConfigInvalid, "unparseable script " + path.string());
  return std::make_unique<ScriptedBackend>(std::move(script));
}

ChatResponse ScriptedBackend::complete(const ChatRequest& request) {
  std::lock_guard lock(mu_);

  auto matches = [&](const json& m) {
    if (m.contains("system_contains")) {
      const std::string needle = m["system_contains"].get<std::string>();
      bool found = false;
      for (const auto& msg : request.messages)
        if (msg.role == "system" &&
            msg.content.find(needle) != std::string::npos)
          found = true;
      if (!found) return false;
    }
    if (m.contains("last_contains")) {
      const std::string needle = m["last_contains"].get<std::string>();
      if (request.messages.back().content.find(needle) == std::string::npos)
        return false;
    }
    if (m.contains("any_contains")) {
      const std::string needle = m["any_contains"].get<std::string>();
      bool found = false;
      for (const auto& msg : request.messages)
        if (msg.content.find(needle) != std::string::npos) found = true;
      if (!found) return false;
    }
    return true;
  };

  for (auto& rule : rules_) {
    if (rule.once && rule.used) continue;
    if (!matches(rule.match)) continue;
    rule.used = true;
    return ChatResponse::from_json(rule.response);
  }
  raise(ErrorCode::TranscriptMiss,
        "no scripted rule matches request (last message: " +
            request.messages.back().content.substr(0, 120) + ")");
}

// --- replay -----------------------------------------------------------------

std::unique_ptr<ReplayBackend> ReplayBackend::open(const fs::path& path) {
  auto backend = std::unique_ptr<ReplayBackend>(new ReplayBackend());
  std::ifstream in(path);
  if (!in)
    raise(ErrorCode::CorruptTranscript, "cannot open " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (support::trim(line).empty()) continue;
    json entry = json::parse(line, nullptr, false);
    if (entry.is_discarded() || !entry.is_object() ||
        !entry.contains("digest") || !entry.contains("response"))
      raise(ErrorCode::CorruptTranscript,
            path.string() + ":" + std::to_string(lineno) +
                ": expected {digest, request, response}");
    const std::string digest = entry["digest"].get<std::string>();
    auto [it, inserted] =
        backend->entries_.emplace(digest, entry["response"]);
    if (!inserted && it->second.dump() != entry["response"].dump())
      raise(ErrorCode::DigestCollision,
            "transcript has two different bodies for digest " + digest);
  }
  return backend;
}

ChatResponse ReplayBackend::complete(const ChatRequest& request) {
  const std::string digest = request_digest(request);
  auto it = entries_.find(digest);
  if (it == entries_.end())
    raise(ErrorCode::TranscriptMiss,
          "no transcript entry for digest " + digest);
  return ChatResponse::from_json(it->second);
}

// --- recording --------------------------------------------------------------

RecordingBackend::RecordingBackend(std::shared_ptr<Backend> inner,
                                   fs::path transcript_path)
    : inner_(std::move(inner)), path_(std::move(transcript_path)) {}

ChatResponse RecordingBackend::complete(const ChatRequest& request) {
  ChatResponse response = inner_->complete(request);
  const std::string digest = request_digest(request);
  const std::string body = response.to_json().dump();

  std::lock_guard lock(mu_);
  auto it = seen_.find(digest);
  if (it != seen_.end()) {
    if (it->second != body)
      raise(ErrorCode::DigestCollision,
            "inner backend answered digest " + digest + " two ways");
    return response;  // already on disk
  }
  seen_[digest] = body;
  json entry = {{"digest", digest},
                {"request", request_canonical_json(request)},
                {"response", response.to_json()}};
  support::append_text_file(path_, entry.dump() + "\n");
  return response;
}

// --- live -------------------------------------------------------------------

LiveBackend::Config LiveBackend::config_from_env() {
  Config cfg;
  if (const char* v = getenv("VISFORGE_LLM_ENDPOINT")) cfg.endpoint = v;
  if (const char* v = getenv("VISFORGE_LLM_API_KEY")) cfg.api_key = v;
  if (const char* v = getenv("VISFORGE_LLM_MODEL")) cfg.model = v;
  return cfg;
}

LiveBackend::LiveBackend(Config config) : config_(std::move(config)) {
  if (config_.endpoint.empty() || config_.model.empty())
    raise(ErrorCode::BackendUnavailable,
          "live backend needs VISFORGE_LLM_ENDPOINT and VISFORGE_LLM_MODEL");
}

json live_request_payload(const ChatRequest& request,
                          const std::string& model) {
  json messages = json::array();
  for (const auto& m : request.messages) {
    json jm = {{"role", m.role}, {"content", m.content}};
    if (m.role == "tool" && !m.tool_call_ref.empty())
      jm["tool_call_id"] = m.tool_call_ref;
    messages.push_back(std::move(jm));
  }
  json payload = {{"model", model},
                  {"messages", messages},
                  {"temperature", request.sampling.temperature},
                  {"max_tokens", request.sampling.max_output_tokens}};
  if (!request.tool_schemas.empty()) {
    json tools = json::array();
    for (const auto& t : request.tool_schemas)
      tools.push_back({{"type", "function"},
                       {"function",
                        {{"name", t.name},
                         {"description", t.description},
                         {"parameters", t.parameters}}}});
    payload["tools"] = tools;
  }
  return payload;
}

ChatResponse parse_live_response(const json& body) {
  ChatResponse out;
  if (!body.contains("choices") || body["choices"].empty())
    raise(ErrorCode::BackendUnavailable, "response has no choices");
  const json& choice = body["choices"][0];
  const json& message = choice.value("message", json::object());
  if (message.contains("content") && message["content"].is_string())
    out.text = message["content"].get<std::string>();
  if (message.contains("tool_calls")) {
    for (const auto& tc : message["tool_calls"]) {
      ToolCall call;
      call.tool_name = tc["function"].value("name", "");
      json args = json::parse(
          tc["function"].value("arguments", std::string("{}")), nullptr,
          false);
      call.arguments = args.is_discarded() ? json::object() : args;
      out.tool_calls.push_back(std::move(call));
    }
  }
  const std::string reason = choice.value("finish_reason", "stop");
  if (reason == "tool_calls" || !out.tool_calls.empty())
    out.finish_reason = FinishReason::ToolCall;
  else if (reason == "length")
    out.finish_reason = FinishReason::Length;
  else
    out.finish_reason = FinishReason::Stop;

  const json& usage = body.value("usage", json::object());
  out.usage.input_tokens = usage.value("prompt_tokens", std::int64_t{0});
  out.usage.output_tokens = usage.value("completion_tokens", std::int64_t{0});
  if (usage.contains("prompt_tokens_details"))
    out.usage.cached_tokens =
        usage["prompt_tokens_details"].value("cached_tokens",
                                             std::int64_t{0});
  if (usage.contains("completion_tokens_details"))
    out.usage.reasoning_tokens =
        usage["completion_tokens_details"].value("reasoning_tokens",
                                                 std::int64_t{0});
  return out;
}

ChatResponse LiveBackend::complete(const ChatRequest& request) {
  // Split endpoint into host part and path prefix.
  std::string url = config_.endpoint;
  std::string prefix;
  size_t scheme = url.find("://");
  size_t path_pos =
      scheme == std::string::npos ? url.find('/') : url.find('/', scheme + 3);
  if (path_pos != std::string::npos) {
    prefix = url.substr(path_pos);
    url = url.substr(0, path_pos);
  }
  if (!prefix.empty() && prefix.back() == '/') prefix.pop_back();

  httplib::Client client(url);
  client.set_read_timeout(120, 0);
  httplib::Headers headers;
  if (!config_.api_key.empty())
    headers.emplace("Authorization", "Bearer " + config_.api_key);

  auto res = client.Post(prefix + "/chat/completions", headers,
                         live_request_payload(request, config_.model).dump(),
                         "application/json");
  if (!res)
    raise(ErrorCode::BackendUnavailable,
          "no response from " + config_.endpoint);
  if (res->status != 200)
    raise(ErrorCode::BackendUnavailable,
          "HTTP " + std::to_string(res->status) + ": " +
              res->body.substr(0, 200));
  json body = json::parse(res->body, nullptr, false);
  if (body.is_discarded())
    raise(ErrorCode::BackendUnavailable, "unparseable completion body");
  return parse_live_response(body);
}

}  // namespace visforge::gateway
