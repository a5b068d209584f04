#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "visforge/mcp/client.hpp"

namespace visforge::mcp {

namespace fs = std::filesystem;

/// The fixed interaction vocabulary of browser probes.
struct ProbeStep {
  std::string op;  ///< click | set-value | wait-for-selector | capture
  std::string selector;
  std::string value;  ///< set-value only

  json to_json() const;
  static std::optional<ProbeStep> from_json(const json& j);
};

struct ConsoleMessage {
  std::string level;  ///< log | warn | error
  std::string text;
};

struct BBox {
  int x = 0, y = 0, w = 0, h = 0;
};

struct ElementSummary {
  std::string selector;
  int element_count = 0;  ///< descendant elements, excluding self
  BBox bbox;
  std::string subtree_hash;
  bool overflow_x = false;
  bool overflow_y = false;
  bool found = true;
};

struct DomSummary {
  int viewport_w = 0;
  int viewport_h = 0;
  std::vector<ElementSummary> elements;

  const ElementSummary* find(const std::string& selector) const;
  json to_json() const;
  static DomSummary from_json(const json& j);
};

struct ActionEntry {
  ProbeStep step;
  bool ok = true;
  std::string detail;
  /// Captured by 'capture' steps: the page state at that instant.
  std::optional<DomSummary> snapshot;
};

/// Everything one page visit yields. Always carries a screenshot reference
/// and a console list, even when steps failed along the way.
struct PageProbe {
  std::string url;  ///< normalized to the path component
  std::string screenshot_ref;
  std::vector<ConsoleMessage> console_messages;
  DomSummary dom_summary;
  std::vector<ActionEntry> action_log;

  bool any_step_failed() const;
  json to_json() const;
};

/// Navigates, runs the steps in order (a failing step is annotated and
/// ends the script, never thrown), then captures screenshot + console +
/// dom summary and persists both probe JSON and image under `probes_dir`.
///
/// Throws Error(NavigationFailure) when the page itself cannot be loaded.
PageProbe probe_page(McpEndpoint& endpoint, const std::string& url,
                     const std::vector<ProbeStep>& steps,
                     const std::vector<std::string>& selectors,
                     const fs::path& probes_dir, const std::string& probe_id);

/// Strips scheme, host and port so stored probes do not embed ephemeral
/// port numbers.
std::string normalize_probe_url(const std::string& url);

}  // namespace visforge::mcp
