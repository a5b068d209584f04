#pragma once

#include <chrono>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "visforge/support/jsonrpc_framing.hpp"
#include "visforge/support/subprocess.hpp"

namespace visforge::mcp {

using nlohmann::json;

struct ToolDescriptor {
  std::string name;
  std::string description;
  json parameters;  ///< JSON schema with properties + required list
};

enum class EndpointState { New, Initialized, Failed, Closed };

std::string_view to_string(EndpointState s);

/// Counters the conformance tests assert on.
struct EndpointStats {
  int requests_sent = 0;
  int responses_matched = 0;
  int notifications_seen = 0;
  int orphaned_responses = 0;  ///< responses whose id matched nothing
};

struct EndpointOptions {
  std::vector<std::string> command;  ///< server argv
  std::chrono::milliseconds request_timeout{30000};
  std::chrono::milliseconds handshake_timeout{30000};
};

struct ToolResult {
  json value;  ///< structured payload of a successful call
  bool is_error = false;
  std::string error_text;  ///< tool-reported error, when is_error
};

/// Model Context Protocol client over a child process's standard streams.
/// JSON-RPC 2.0, Content-Length framed. One endpoint serves one consumer:
/// a single request is in flight at any instant; server notifications may
/// arrive at any time, including between a request and its response.
class McpEndpoint {
 public:
  explicit McpEndpoint(EndpointOptions opts);
  ~McpEndpoint();
  McpEndpoint(const McpEndpoint&) = delete;
  McpEndpoint& operator=(const McpEndpoint&) = delete;

  /// Spawns the server, performs the initialize handshake, and caches the
  /// advertised tools. Throws SpawnFailure, HandshakeTimeout or
  /// ProtocolError; the endpoint ends up Initialized or Failed.
  std::vector<ToolDescriptor> initialize();

  /// tools/call with pre-dispatch argument checking against the cached
  /// descriptor. Throws UnknownTool, SchemaViolation, Timeout,
  /// TransportClosed.
  ToolResult invoke(const std::string& tool_name, const json& arguments);

  EndpointState state() const { return state_; }
  const std::vector<ToolDescriptor>& tools() const { return tools_; }
  const json& server_capabilities() const { return server_capabilities_; }
  const EndpointStats& stats() const { return stats_; }
  bool has_tool(const std::string& name) const;

  void close();

 private:
  /// Sends one request and blocks for its response, tolerating interleaved
  /// notifications and discarding stale responses to abandoned requests.
  json request(const std::string& method, const json& params,
               std::chrono::milliseconds timeout);
  void notify(const std::string& method, const json& params);
  void handle_notification(const json& message);

  EndpointOptions opts_;
  support::ChildProcess child_;
  support::FrameDecoder decoder_;
  EndpointState state_ = EndpointState::New;
  std::vector<ToolDescriptor> tools_;
  json server_capabilities_ = json::object();
  EndpointStats stats_;
  std::int64_t next_id_ = 1;
  std::set<std::int64_t> abandoned_ids_;
};

/// Pre-dispatch argument check: required fields present, basic types match.
/// Returns a violation description, or nullopt when the arguments conform.
std::optional<std::string> check_arguments(const ToolDescriptor& tool,
                                           const json& arguments);

}  // namespace visforge::mcp
