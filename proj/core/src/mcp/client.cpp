#include "visforge/mcp/client.hpp"

#include <csignal>

#include "visforge/error.hpp"

namespace visforge::mcp {

namespace {
constexpr const char* kProtocolVersion = "2024-11-05";
}

std::string_view to_string(EndpointState s) {
  switch (s) {
    case EndpointState::New: return "new";
    case EndpointState::Initialized: return "initialized";
    case EndpointState::Failed: return "failed";
    case EndpointState::Closed: return "closed";
  }
  return "?";
}

McpEndpoint::McpEndpoint(EndpointOptions opts) : opts_(std::move(opts)) {}

McpEndpoint::~McpEndpoint() { close(); }

void McpEndpoint::close() {
  if (state_ == EndpointState::Closed) return;
  if (child_.valid()) {
    child_.close_stdin();
    child_.kill_process(SIGTERM);
    child_.wait();
  }
  state_ = EndpointState::Closed;
}

bool McpEndpoint::has_tool(const std::string& name) const {
  for (const auto& t : tools_)
    if (t.name == name) return true;
  return false;
}

void McpEndpoint::handle_notification(const json& message) {
  ++stats_.notifications_seen;
  (void)message;
}

json McpEndpoint::request(const std::string& method, const json& params,
                          std::chrono::milliseconds timeout) {
  const std::int64_t id = next_id_++;
  json msg = {{"jsonrpc", "2.0"}, {"id", id}, {"method", method},
              {"params", params}};
  ++stats_.requests_sent;
  if (!child_.write_stdin(support::frame_message(msg.dump()))) {
    state_ = EndpointState::Failed;
    raise(ErrorCode::TransportClosed, "server stdin closed during " + method);
  }

  auto deadline = std::chrono::steady_clock::now() + timeout;
  while (true) {
    // Drain complete frames before touching the pipe again.
    while (auto payload = decoder_.next()) {
      json reply = json::parse(*payload, nullptr, false);
      if (reply.is_discarded() || !reply.is_object()) {
        state_ = EndpointState::Failed;
        raise(ErrorCode::ProtocolError,
              "unparseable JSON-RPC payload: " + payload->substr(0, 120));
      }
      if (!reply.contains("id") || reply["id"].is_null()) {
        handle_notification(reply);
        continue;
      }
      std::int64_t reply_id = reply["id"].is_number_integer()
                                  ? reply["id"].get<std::int64_t>()
                                  : -1;
      if (reply_id == id) {
        ++stats_.responses_matched;
        if (reply.contains("error")) {
          raise(ErrorCode::ProtocolError,
                method + " failed: " + reply["error"].dump());
        }
        return reply.value("result", json::object());
      }
      if (abandoned_ids_.erase(reply_id) > 0) continue;  // stale, expected
      ++stats_.orphaned_responses;
    }

    auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      abandoned_ids_.insert(id);
      raise(ErrorCode::Timeout, method + " timed out after " +
                                    std::to_string(timeout.count()) + " ms");
    }
    auto slice = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::min(deadline - now,
                 std::chrono::steady_clock::duration(
                     std::chrono::milliseconds(50))));
    std::string chunk;
    auto status = child_.read_stdout(chunk, 1 << 16, slice);
    if (status == support::ReadStatus::Eof) {
      state_ = EndpointState::Failed;
      raise(ErrorCode::TransportClosed,
            "server exited while awaiting " + method);
    }
    if (status == support::ReadStatus::Data) decoder_.feed(chunk);
  }
}

void McpEndpoint::notify(const std::string& method, const json& params) {
  json msg = {{"jsonrpc", "2.0"}, {"method", method}, {"params", params}};
  child_.write_stdin(support::frame_message(msg.dump()));
}

std::vector<ToolDescriptor> McpEndpoint::initialize() {
  if (state_ != EndpointState::New)
    raise(ErrorCode::ProtocolError,
          "initialize in state " + std::string(to_string(state_)));

  support::SpawnOptions spawn;
  spawn.argv = opts_.command;
  spawn.capture_stderr = false;  // server diagnostics go to our stderr
  child_ = support::ChildProcess::spawn(spawn);

  try {
    json init_result = request(
        "initialize",
        {{"protocolVersion", kProtocolVersion},
         {"capabilities", json::object()},
         {"clientInfo", {{"name", "visforge"}, {"version", "0.1"}}}},
        opts_.handshake_timeout);
    server_capabilities_ = init_result.value("capabilities", json::object());
    notify("notifications/initialized", json::object());

    json tools_result =
        request("tools/list", json::object(), opts_.handshake_timeout);
    tools_.clear();
    std::set<std::string> names;
    for (const auto& t : tools_result.value("tools", json::array())) {
      ToolDescriptor desc;
      desc.name = t.value("name", "");
      desc.description = t.value("description", "");
      desc.parameters = t.value("inputSchema", json::object());
      if (!names.insert(desc.name).second)
        raise(ErrorCode::ProtocolError,
              "server advertised duplicate tool '" + desc.name + "'");
      tools_.push_back(std::move(desc));
    }
  } catch (const Error& e) {
    state_ = EndpointState::Failed;
    if (e.code() == ErrorCode::Timeout)
      raise(ErrorCode::HandshakeTimeout, e.detail());
    throw;
  }

  state_ = EndpointState::Initialized;
  return tools_;
}

std::optional<std::string> check_arguments(const ToolDescriptor& tool,
                                           const json& arguments) {
  if (!arguments.is_object()) return "arguments must be an object";
  const json& schema = tool.parameters;
  if (schema.contains("required")) {
    for (const auto& r : schema["required"]) {
      const std::string name = r.get<std::string>();
      if (!arguments.contains(name))
        return "missing required argument '" + name + "'";
    }
  }
  if (schema.contains("properties")) {
    for (const auto& [name, prop] : schema["properties"].items()) {
      if (!arguments.contains(name) || !prop.contains("type")) continue;
      const std::string type = prop["type"].get<std::string>();
      const json& v = arguments[name];
      bool ok = (type == "string" && v.is_string()) ||
                (type == "number" && v.is_number()) ||
                (type == "integer" && v.is_number_integer()) ||
                (type == "boolean" && v.is_boolean()) ||
                (type == "array" && v.is_array()) ||
                (type == "object" && v.is_object());
      if (!ok)
        return "argument '" + name + "' is not of type " + type;
    }
  }
  return std::nullopt;
}

ToolResult McpEndpoint::invoke(const std::string& tool_name,
                               const json& arguments) {
  if (state_ != EndpointState::Initialized)
    raise(ErrorCode::ProtocolError,
          "invoke in state " + std::string(to_string(state_)));

  const ToolDescriptor* descriptor = nullptr;
  for (const auto& t : tools_)
    if (t.name == tool_name) descriptor = &t;
  if (!descriptor)
    raise(ErrorCode::UnknownTool, "no tool '" + tool_name + "'");
  if (auto violation = check_arguments(*descriptor, arguments))
    raise(ErrorCode::SchemaViolation, tool_name + ": " + *violation);

  json result = request("tools/call",
                        {{"name", tool_name}, {"arguments", arguments}},
                        opts_.request_timeout);

  ToolResult out;
  out.is_error = result.value("isError", false);
  if (result.contains("structuredContent")) {
    out.value = result["structuredContent"];
  } else if (result.contains("content") && result["content"].is_array() &&
             !result["content"].empty() &&
             result["content"][0].value("type", "") == "text") {
    const std::string text = result["content"][0].value("text", "");
    json parsed = json::parse(text, nullptr, false);
    out.value = parsed.is_discarded() ? json{{"text", text}} : parsed;
  } else {
    out.value = result;
  }
  if (out.is_error) {
    out.error_text =
        out.value.is_object() ? out.value.value("text", out.value.dump())
                              : out.value.dump();
  }
  return out;
}

}  // namespace visforge::mcp
