#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "visforge/gateway/chat.hpp"

namespace visforge::ws {
class Workspace;
}
namespace visforge::mcp {
class McpEndpoint;
}

namespace visforge::roles {

using nlohmann::json;

using ToolHandler = std::function<json(const json& arguments)>;

/// Name -> handler map shared by all roles of a run. Role-level
/// confinement happens in the runner; the registry only executes.
class ToolRegistry {
 public:
  void add(gateway::ToolSchema schema, ToolHandler handler);

  bool has(const std::string& name) const;
  /// Executes the tool. Handler exceptions become {"error": ...} results
  /// so the calling role can read and react to them.
  json invoke(const std::string& name, const json& arguments);

  std::vector<std::string> names() const;
  std::vector<gateway::ToolSchema> schemas() const;
  std::vector<gateway::ToolSchema> schemas_for(
      const std::vector<std::string>& allowed) const;

 private:
  struct Entry {
    gateway::ToolSchema schema;
    ToolHandler handler;
  };
  std::vector<Entry> entries_;
};

/// work/-scoped file tools + run_command: write_file, read_file,
/// list_files, run_command.
void register_workspace_tools(ToolRegistry& registry, ws::Workspace& ws);

/// Read-only task-directory tools: read_task_file, list_task_files.
void register_task_tools(ToolRegistry& registry, ws::Workspace& ws);

/// Pass-through to the browser server's own tools (navigate, click, ...).
void register_browser_tools(ToolRegistry& registry,
                            mcp::McpEndpoint& endpoint);

}  // namespace visforge::roles
