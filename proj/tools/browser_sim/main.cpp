// Deterministic stand-in for a browser-automation MCP server. Speaks
// JSON-RPC 2.0 over stdio with Content-Length framing, loads pages over
// HTTP, and interprets the fixture annotation dialect (see page_model.hpp).

#include <unistd.h>

#include <iostream>
#include <optional>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "page_model.hpp"
#include "render.hpp"
#include "visforge/support/jsonrpc_framing.hpp"

namespace {

using browser_sim::PageModel;
using nlohmann::json;
namespace support = visforge::support;

std::string base64_encode(const std::string& in) {
  static const char* chars =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  int val = 0, bits = -6;
  for (unsigned char c : in) {
    val = (val << 8) + c;
    bits += 8;
    while (bits >= 0) {
      out.push_back(chars[(val >> bits) & 0x3F]);
      bits -= 6;
    }
  }
  if (bits > -6) out.push_back(chars[((val << 8) >> (bits + 8)) & 0x3F]);
  while (out.size() % 4) out.push_back('=');
  return out;
}

struct Simulator {
  std::optional<PageModel> page;

  json tool_descriptors() const {
    auto schema = [](std::initializer_list<
                         std::pair<std::string, std::string>> props,
                     std::initializer_list<std::string> required) {
      json properties = json::object();
      for (const auto& [name, type] : props)
        properties[name] = {{"type", type}};
      return json{{"type", "object"},
                  {"properties", properties},
                  {"required", json(std::vector<std::string>(required))}};
    };
    return json::array({
        {{"name", "navigate"},
         {"description", "Load a page by URL and reset interaction state."},
         {"inputSchema", schema({{"url", "string"}}, {"url"})}},
        {{"name", "click"},
         {"description", "Click the element matching a #id/.class selector."},
         {"inputSchema", schema({{"selector", "string"}}, {"selector"})}},
        {{"name", "set_value"},
         {"description", "Set a control's value."},
         {"inputSchema", schema({{"selector", "string"}, {"value", "string"}},
                                {"selector", "value"})}},
        {{"name", "wait_for_selector"},
         {"description", "Check that a selector resolves on the page."},
         {"inputSchema", schema({{"selector", "string"}}, {"selector"})}},
        {{"name", "screenshot"},
         {"description", "Capture the page as a lossless PPM image."},
         {"inputSchema", schema({}, {})}},
        {{"name", "console_messages"},
         {"description", "Console output captured since navigation."},
         {"inputSchema", schema({}, {})}},
        {{"name", "dom_summary"},
         {"description",
          "Element counts, layout boxes and subtree hashes for the given "
          "selectors (all .panel elements when empty)."},
         {"inputSchema", schema({{"selectors", "array"}}, {})}},
    });
  }

  json navigate(const std::string& url) {
    page.reset();
    size_t scheme = url.find("://");
    if (scheme == std::string::npos)
      return {{"ok", false}, {"detail", "unsupported url"}};
    size_t path_pos = url.find('/', scheme + 3);
    std::string host = url.substr(0, path_pos);
    std::string path =
        path_pos == std::string::npos ? "/" : url.substr(path_pos);

    httplib::Client client(host);
    client.set_connection_timeout(5, 0);
    auto res = client.Get(path);
    if (!res)
      return {{"ok", false}, {"detail", "connection failed to " + host}};
    if (res->status != 200)
      return {{"ok", false},
              {"detail", "HTTP " + std::to_string(res->status)}};
    page = PageModel::parse(res->body);
    if (!page) return {{"ok", false}, {"detail", "page failed to parse"}};
    return {{"ok", true}, {"status", res->status}};
  }

  json call(const std::string& name, const json& args) {
    if (name == "navigate")
      return navigate(args.value("url", ""));
    if (!page)
      return {{"ok", false}, {"detail", "no page loaded"}};

    if (name == "click") {
      auto updated = page->click(args.value("selector", ""));
      if (!updated)
        return {{"ok", false},
                {"detail", "selector not found: " + args.value("selector",
                                                               "")}};
      return {{"ok", true}, {"updates", *updated}};
    }
    if (name == "set_value") {
      auto updated =
          page->set_value(args.value("selector", ""), args.value("value", ""));
      if (!updated)
        return {{"ok", false},
                {"detail", "selector not found: " + args.value("selector",
                                                               "")}};
      return {{"ok", true}, {"updates", *updated}};
    }
    if (name == "wait_for_selector") {
      bool found = page->find(args.value("selector", "")) != nullptr;
      json out = {{"ok", found}};
      if (!found)
        out["detail"] = "selector not found: " + args.value("selector", "");
      return out;
    }
    if (name == "screenshot") {
      return {{"format", "ppm"},
              {"data_base64", base64_encode(browser_sim::render_ppm(*page))}};
    }
    if (name == "console_messages") {
      json messages = json::array();
      for (const auto& m : page->console())
        messages.push_back({{"level", m.level}, {"text", m.text}});
      return {{"messages", messages}};
    }
    if (name == "dom_summary") {
      std::vector<std::string> selectors;
      for (const auto& s : args.value("selectors", json::array()))
        selectors.push_back(s.get<std::string>());
      return page->dom_summary(selectors);
    }
    return {{"ok", false}, {"detail", "unknown tool " + name}};
  }
};

void write_frame(const json& message) {
  std::string framed = support::frame_message(message.dump());
  ssize_t n = ::write(STDOUT_FILENO, framed.data(), framed.size());
  (void)n;
}

}  // namespace

int main() {
  Simulator sim;
  support::FrameDecoder decoder;
  std::string buffer(1 << 16, '\0');

  while (true) {
    ssize_t n = ::read(STDIN_FILENO, buffer.data(), buffer.size());
    if (n <= 0) break;
    decoder.feed(std::string_view(buffer.data(), static_cast<size_t>(n)));

    while (true) {
      std::optional<std::string> payload;
      try {
        payload = decoder.next();
      } catch (const std::exception&) {
        return 1;  // client sent garbage framing; give up
      }
      if (!payload) break;

      json msg = json::parse(*payload, nullptr, false);
      if (msg.is_discarded() || !msg.contains("method")) continue;
      const std::string method = msg["method"].get<std::string>();
      if (!msg.contains("id")) continue;  // notification

      json result;
      if (method == "initialize") {
        result = {{"protocolVersion", "2024-11-05"},
                  {"capabilities", {{"tools", json::object()}}},
                  {"serverInfo",
                   {{"name", "visforge-browser-sim"}, {"version", "0.1"}}}};
      } else if (method == "tools/list") {
        result = {{"tools", sim.tool_descriptors()}};
      } else if (method == "tools/call") {
        const json& params = msg.value("params", json::object());
        json value = sim.call(params.value("name", ""),
                              params.value("arguments", json::object()));
        result = {{"content",
                   json::array({{{"type", "text"}, {"text", value.dump()}}})},
                  {"structuredContent", value},
                  {"isError", false}};
      } else {
        write_frame({{"jsonrpc", "2.0"},
                     {"id", msg["id"]},
                     {"error",
                      {{"code", -32601}, {"message", "unknown method"}}}});
        continue;
      }
      write_frame({{"jsonrpc", "2.0"}, {"id", msg["id"]}, {"result", result}});
    }
  }
  return 0;
}
