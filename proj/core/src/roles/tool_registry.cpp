#include "visforge/roles/tool_registry.hpp"

#include "visforge/error.hpp"
#include "visforge/mcp/client.hpp"
#include "visforge/workspace/workspace.hpp"

namespace visforge::roles {

namespace {

json schema_object(std::initializer_list<std::pair<std::string, std::string>>
                       properties,
                   std::initializer_list<std::string> required) {
  json props = json::object();
  for (const auto& [name, type] : properties)
    props[name] = {{"type", type}};
  return json{{"type", "object"},
              {"properties", props},
              {"required", json(std::vector<std::string>(required))}};
}

}  // namespace

void ToolRegistry::add(gateway::ToolSchema schema, ToolHandler handler) {
  if (has(schema.name))
    raise(ErrorCode::ConfigInvalid,
          "tool '" + schema.name + "' registered twice");
  entries_.push_back({std::move(schema), std::move(handler)});
}

bool ToolRegistry::has(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.schema.name == name) return true;
  return false;
}

json ToolRegistry::invoke(const std::string& name, const json& arguments) {
  for (auto& e : entries_) {
    if (e.schema.name != name) continue;
    try {
      return e.handler(arguments);
    } catch (const Error& err) {
      return json{{"error", std::string(to_string(err.code()))},
                  {"detail", err.detail()}};
    } catch (const std::exception& ex) {
      return json{{"error", "ToolFailure"}, {"detail", ex.what()}};
    }
  }
  raise(ErrorCode::UnknownTool, "no tool '" + name + "'");
}

std::vector<std::string> ToolRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) out.push_back(e.schema.name);
  return out;
}

std::vector<gateway::ToolSchema> ToolRegistry::schemas() const {
  std::vector<gateway::ToolSchema> out;
  for (const auto& e : entries_) out.push_back(e.schema);
  return out;
}

std::vector<gateway::ToolSchema> ToolRegistry::schemas_for(
    const std::vector<std::string>& allowed) const {
  std::vector<gateway::ToolSchema> out;
  for (const auto& e : entries_) {
    if (std::find(allowed.begin(), allowed.end(), e.schema.name) !=
        allowed.end())
      out.push_back(e.schema);
  }
  return out;
}

void register_workspace_tools(ToolRegistry& registry, ws::Workspace& ws) {
  registry.add(
      {"write_file", "Write a text file under the app workspace (work/).",
       schema_object({{"path", "string"}, {"content", "string"}},
                     {"path", "content"})},
      [&ws](const json& args) {
        ws.write_file(args.at("path").get<std::string>(),
                      args.at("content").get<std::string>());
        return json{{"ok", true}, {"path", args.at("path")}};
      });
  registry.add(
      {"read_file", "Read a file from the app workspace.",
       schema_object({{"path", "string"}}, {"path"})},
      [&ws](const json& args) {
        return json{
            {"content", ws.read_file(args.at("path").get<std::string>())}};
      });
  registry.add({"list_files", "List files in the app workspace.",
                schema_object({}, {})},
               [&ws](const json&) {
                 return json{{"files", ws.list_files()}};
               });
  registry.add(
      {"run_command",
       "Run a command inside the workspace with a timeout. argv is an array "
       "of strings.",
       schema_object({{"argv", "array"}, {"timeout_ms", "integer"}},
                     {"argv"})},
      [&ws](const json& args) {
        ws::CommandSpec spec;
        for (const auto& a : args.at("argv"))
          spec.argv.push_back(a.get<std::string>());
        if (args.contains("timeout_ms"))
          spec.timeout =
              std::chrono::milliseconds(args["timeout_ms"].get<int>());
        if (args.contains("cwd"))
          spec.cwd = args["cwd"].get<std::string>();
        ws::CommandResult r = ws.execute(spec);
        // No duration here: tool results feed back into the conversation,
        // and replay digests must not depend on wall-clock time.
        return json{{"exit_code", r.exit_code},
                    {"stdout", r.stdout_excerpt},
                    {"stderr", r.stderr_excerpt},
                    {"timed_out", r.timed_out}};
      });
}

void register_task_tools(ToolRegistry& registry, ws::Workspace& ws) {
  registry.add(
      {"read_task_file", "Read a file from the task directory (read-only).",
       schema_object({{"path", "string"}}, {"path"})},
      [&ws](const json& args) {
        return json{{"content",
                     ws.read_task_file(args.at("path").get<std::string>())}};
      });
  registry.add({"list_task_files",
                "List the files of the task directory (read-only).",
                schema_object({}, {})},
               [&ws](const json&) {
                 return json{{"files", ws.list_task_files()}};
               });
}

void register_browser_tools(ToolRegistry& registry,
                            mcp::McpEndpoint& endpoint) {
  for (const auto& tool : endpoint.tools()) {
    gateway::ToolSchema schema{tool.name, tool.description, tool.parameters};
    const std::string name = tool.name;
    registry.add(std::move(schema), [&endpoint, name](const json& args) {
      mcp::ToolResult r = endpoint.invoke(name, args);
      if (r.is_error) return json{{"error", "ToolError"},
                                  {"detail", r.error_text}};
      return r.value;
    });
  }
}

}  // namespace visforge::roles
