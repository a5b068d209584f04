#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace browser_sim {

using nlohmann::json;

/// One element of the scanned document tree. Only the attributes the
/// simulator acts on are kept.
struct Element {
  std::string tag;
  std::string id;
  std::vector<std::string> classes;
  std::map<std::string, std::string> attrs;
  std::vector<std::unique_ptr<Element>> children;

  int descendant_count() const;
  bool has_class(const std::string& name) const;
};

/// A loaded page plus its interaction state. Panels respond to clicks and
/// value changes through declarative data attributes:
///   data-bbox="x,y,w,h"            layout rectangle
///   data-render="solid|points"     how the region paints
///   data-fill="#rrggbb"            base color
///   data-click-updates="#a,#b"     clicking bumps the targets' state
///   data-set-updates="#a"          set-value bumps the targets' state
/// Console output is recovered from literal console.log/warn/error calls
/// in script text.
class PageModel {
 public:
  static std::optional<PageModel> parse(const std::string& html);

  int viewport_w() const { return viewport_w_; }
  int viewport_h() const { return viewport_h_; }

  const Element* find(const std::string& selector) const;
  std::vector<const Element*> panels() const;

  /// Click/set-value semantics; returns the updated target selectors, or
  /// nullopt when the selector does not exist.
  std::optional<std::vector<std::string>> click(const std::string& selector);
  std::optional<std::vector<std::string>> set_value(
      const std::string& selector, const std::string& value);

  int generation(const std::string& selector) const;

  /// element_count after interactions: static descendants + generation.
  int element_count(const Element& el) const;
  std::string subtree_hash(const Element& el) const;

  struct ConsoleLine {
    std::string level;
    std::string text;
  };
  const std::vector<ConsoleLine>& console() const { return console_; }

  json dom_summary(const std::vector<std::string>& selectors) const;

 private:
  std::vector<std::string> bump_targets(const Element& el,
                                        const std::string& attr);

  std::unique_ptr<Element> root_;
  int viewport_w_ = 640;
  int viewport_h_ = 400;
  std::vector<ConsoleLine> console_;
  std::map<std::string, int> generations_;  ///< selector -> bump count
};

/// Parses "x,y,w,h"; zero rect when absent or malformed.
std::array<int, 4> parse_bbox(const std::string& value);

}  // namespace browser_sim
