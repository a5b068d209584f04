#include "visforge/mcp/probe.hpp"

#include "visforge/error.hpp"
#include "visforge/support/text.hpp"

namespace visforge::mcp {

namespace {

// Minimal base64 decode; the browser server ships screenshots this way.
std::string base64_decode(const std::string& in) {
  static const std::string chars =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  int val = 0, bits = -8;
  for (char c : in) {
    if (c == '=' || c == '\n' || c == '\r') continue;
    size_t pos = chars.find(c);
    if (pos == std::string::npos) continue;
    val = (val << 6) + static_cast<int>(pos);
    bits += 6;
    if (bits >= 0) {
      out.push_back(static_cast<char>((val >> bits) & 0xFF));
      bits -= 8;
    }
  }
  return out;
}

}  // namespace

json ProbeStep::to_json() const {
  json j = {{"op", op}};
  if (!selector.empty()) j["selector"] = selector;
  if (!value.empty()) j["value"] = value;
  return j;
}

std::optional<ProbeStep> ProbeStep::from_json(const json& j) {
  if (!j.is_object() || !j.contains("op")) return std::nullopt;
  ProbeStep s;
  s.op = j["op"].get<std::string>();
  s.selector = j.value("selector", "");
  s.value = j.value("value", "");
  if (s.op != "click" && s.op != "set-value" && s.op != "wait-for-selector" &&
      s.op != "capture")
    return std::nullopt;
  return s;
}

const ElementSummary* DomSummary::find(const std::string& selector) const {
  for (const auto& e : elements)
    if (e.selector == selector) return &e;
  return nullptr;
}

json DomSummary::to_json() const {
  json els = json::array();
  for (const auto& e : elements) {
    els.push_back({{"selector", e.selector},
                   {"element_count", e.element_count},
                   {"bbox", {e.bbox.x, e.bbox.y, e.bbox.w, e.bbox.h}},
                   {"subtree_hash", e.subtree_hash},
                   {"overflow_x", e.overflow_x},
                   {"overflow_y", e.overflow_y},
                   {"found", e.found}});
  }
  return json{{"viewport", {viewport_w, viewport_h}}, {"elements", els}};
}

DomSummary DomSummary::from_json(const json& j) {
  DomSummary out;
  if (j.contains("viewport") && j["viewport"].is_array() &&
      j["viewport"].size() == 2) {
    out.viewport_w = j["viewport"][0].get<int>();
    out.viewport_h = j["viewport"][1].get<int>();
  }
  for (const auto& e : j.value("elements", json::array())) {
    ElementSummary el;
    el.selector = e.value("selector", "");
    el.element_count = e.value("element_count", 0);
    if (e.contains("bbox") && e["bbox"].is_array() && e["bbox"].size() == 4) {
      el.bbox = {e["bbox"][0].get<int>(), e["bbox"][1].get<int>(),
                 e["bbox"][2].get<int>(), e["bbox"][3].get<int>()};
    }
    el.subtree_hash = e.value("subtree_hash", "");
    el.overflow_x = e.value("overflow_x", false);
    el.overflow_y = e.value("overflow_y", false);
    el.found = e.value("found", true);
    out.elements.push_back(std::move(el));
  }
  return out;
}

bool PageProbe::any_step_failed() const {
  for (const auto& a : action_log)
    if (!a.ok) return true;
  return false;
}

json PageProbe::to_json() const {
  json console = json::array();
  for (const auto& m : console_messages)
    console.push_back({{"level", m.level}, {"text", m.text}});
  json actions = json::array();
  for (const auto& a : action_log) {
    json ja = {{"step", a.step.to_json()}, {"ok", a.ok}};
    if (!a.detail.empty()) ja["detail"] = a.detail;
    if (a.snapshot) ja["snapshot"] = a.snapshot->to_json();
    actions.push_back(std::move(ja));
  }
  return json{{"url", url},
              {"screenshot_ref", screenshot_ref},
              {"console_messages", console},
              {"dom_summary", dom_summary.to_json()},
              {"action_log", actions}};
}

std::string normalize_probe_url(const std::string& url) {
  size_t scheme = url.find("://");
  if (scheme == std::string::npos) return url;
  size_t path = url.find('/', scheme + 3);
  if (path == std::string::npos) return "/";
  return url.substr(path);
}

PageProbe probe_page(McpEndpoint& endpoint, const std::string& url,
                     const std::vector<ProbeStep>& steps,
                     const std::vector<std::string>& selectors,
                     const fs::path& probes_dir, const std::string& probe_id) {
  ToolResult nav = endpoint.invoke("navigate", {{"url", url}});
  if (nav.is_error || !nav.value.value("ok", false))
    raise(ErrorCode::NavigationFailure,
          "cannot load " + url + ": " +
              (nav.error_text.empty() ? nav.value.dump() : nav.error_text));

  PageProbe probe;
  probe.url = normalize_probe_url(url);

  json selector_list = json::array();
  for (const auto& s : selectors) selector_list.push_back(s);
  auto summarize = [&]() {
    ToolResult r =
        endpoint.invoke("dom_summary", {{"selectors", selector_list}});
    return DomSummary::from_json(r.value);
  };

  bool aborted = false;
  for (const auto& step : steps) {
    ActionEntry entry;
    entry.step = step;
    if (aborted) {
      entry.ok = false;
      entry.detail = "skipped: earlier step failed";
      probe.action_log.push_back(std::move(entry));
      continue;
    }
    if (step.op == "capture") {
      entry.snapshot = summarize();
    } else {
      ToolResult r;
      if (step.op == "click") {
        r = endpoint.invoke("click", {{"selector", step.selector}});
      } else if (step.op == "set-value") {
        r = endpoint.invoke(
            "set_value", {{"selector", step.selector}, {"value", step.value}});
      } else if (step.op == "wait-for-selector") {
        r = endpoint.invoke("wait_for_selector",
                            {{"selector", step.selector}});
      } else {
        entry.ok = false;
        entry.detail = "unknown step op '" + step.op + "'";
      }
      if (entry.ok && (r.is_error || !r.value.value("ok", false))) {
        entry.ok = false;
        entry.detail = r.is_error ? r.error_text
                                  : r.value.value("detail", r.value.dump());
        aborted = true;
      }
    }
    probe.action_log.push_back(std::move(entry));
  }

  // Captures happen even after failed steps: the evaluator grades partial
  // evidence.
  ToolResult shot = endpoint.invoke("screenshot", json::object());
  const std::string image_b64 = shot.value.value("data_base64", "");
  const std::string image = base64_decode(image_b64);
  fs::create_directories(probes_dir);
  const std::string image_name = probe_id + ".ppm";
  support::write_text_file(probes_dir / image_name, image);
  probe.screenshot_ref = image_name;

  ToolResult console = endpoint.invoke("console_messages", json::object());
  for (const auto& m : console.value.value("messages", json::array())) {
    probe.console_messages.push_back(
        {m.value("level", "log"), m.value("text", "")});
  }

  probe.dom_summary = summarize();

  support::write_text_file(probes_dir / (probe_id + ".json"),
                           probe.to_json().dump(2) + "\n");
  return probe;
}

}  // namespace visforge::mcp
