#include "page_model.hpp"

#include <array>
#include <cctype>
#include <functional>

#include "visforge/support/digest.hpp"
#include "visforge/support/text.hpp"

namespace browser_sim {

namespace support = visforge::support;

int Element::descendant_count() const {
  int count = 0;
  for (const auto& child : children) count += 1 + child->descendant_count();
  return count;
}

bool Element::has_class(const std::string& name) const {
  for (const auto& c : classes)
    if (c == name) return true;
  return false;
}

std::array<int, 4> parse_bbox(const std::string& value) {
  auto parts = support::split(value, ',');
  if (parts.size() != 4) return {0, 0, 0, 0};
  try {
    return {std::stoi(parts[0]), std::stoi(parts[1]), std::stoi(parts[2]),
            std::stoi(parts[3])};
  } catch (const std::exception&) {
    return {0, 0, 0, 0};
  }
}

namespace {

const std::array<const char*, 10> kVoidTags = {
    "br", "img", "hr", "input", "meta", "link", "circle", "rect", "line",
    "path"};

bool is_void_tag(const std::string& tag) {
  for (const char* v : kVoidTags)
    if (tag == v) return true;
  return false;
}

struct Scanner {
  const std::string& html;
  size_t pos = 0;

  void skip_until_tag() {
    while (pos < html.size() && html[pos] != '<') ++pos;
  }

  // Parses one tag at pos (which must be '<'). Returns {tag, attrs,
  // closing, self_closing}; advances past '>'.
  struct Tag {
    std::string name;
    std::map<std::string, std::string> attrs;
    bool closing = false;
    bool self_closing = false;
    bool ok = false;
  };

  Tag next_tag() {
    Tag tag;
    if (pos >= html.size() || html[pos] != '<') return tag;
    ++pos;
    if (pos < html.size() && html[pos] == '!') {  // comment / doctype
      while (pos < html.size() && html[pos] != '>') ++pos;
      if (pos < html.size()) ++pos;
      tag.name = "!";
      tag.ok = true;
      return tag;
    }
    if (pos < html.size() && html[pos] == '/') {
      tag.closing = true;
      ++pos;
    }
    while (pos < html.size() &&
           (std::isalnum(static_cast<unsigned char>(html[pos])) ||
            html[pos] == '-'))
      tag.name.push_back(static_cast<char>(
          std::tolower(static_cast<unsigned char>(html[pos++]))));
    // attributes
    while (pos < html.size() && html[pos] != '>') {
      if (html[pos] == '/' && pos + 1 < html.size() && html[pos + 1] == '>') {
        tag.self_closing = true;
        pos += 2;
        tag.ok = !tag.name.empty();
        return tag;
      }
      if (std::isspace(static_cast<unsigned char>(html[pos]))) {
        ++pos;
        continue;
      }
      std::string name;
      while (pos < html.size() && html[pos] != '=' && html[pos] != '>' &&
             html[pos] != '/' &&
             !std::isspace(static_cast<unsigned char>(html[pos])))
        name.push_back(static_cast<char>(
            std::tolower(static_cast<unsigned char>(html[pos++]))));
      std::string value;
      if (pos < html.size() && html[pos] == '=') {
        ++pos;
        if (pos < html.size() && (html[pos] == '"' || html[pos] == '\'')) {
          char quote = html[pos++];
          while (pos < html.size() && html[pos] != quote)
            value.push_back(html[pos++]);
          if (pos < html.size()) ++pos;
        } else {
          while (pos < html.size() && html[pos] != '>' &&
                 !std::isspace(static_cast<unsigned char>(html[pos])))
            value.push_back(html[pos++]);
        }
      }
      if (!name.empty()) tag.attrs[name] = value;
    }
    if (pos < html.size()) ++pos;  // '>'
    tag.ok = !tag.name.empty();
    return tag;
  }

  // Raw text until the closing tag (script/style).
  std::string raw_until_close(const std::string& tag_name) {
    std::string close = "</" + tag_name;
    size_t end = html.find(close, pos);
    if (end == std::string::npos) end = html.size();
    std::string text = html.substr(pos, end - pos);
    pos = end;
    skip_until_tag();
    Tag t = next_tag();
    (void)t;
    return text;
  }
};

void scan_console_calls(const std::string& script,
                        std::vector<PageModel::ConsoleLine>& out) {
  for (const char* level : {"log", "warn", "error"}) {
    const std::string needle = std::string("console.") + level + "(";
    size_t pos = 0;
    while ((pos = script.find(needle, pos)) != std::string::npos) {
      size_t q = script.find_first_of("\"'", pos);
      if (q == std::string::npos) break;
      char quote = script[q];
      size_t end = script.find(quote, q + 1);
      if (end == std::string::npos) break;
      out.push_back({level, script.substr(q + 1, end - q - 1)});
      pos = end;
    }
  }
}

}  // namespace

std::optional<PageModel> PageModel::parse(const std::string& html) {
  PageModel model;
  model.root_ = std::make_unique<Element>();
  model.root_->tag = "#root";

  Scanner scanner{html};
  std::vector<Element*> stack = {model.root_.get()};

  while (true) {
    scanner.skip_until_tag();
    if (scanner.pos >= html.size()) break;
    Scanner::Tag tag = scanner.next_tag();
    if (!tag.ok || tag.name == "!") continue;

    if (tag.name == "script" || tag.name == "style") {
      if (!tag.closing && !tag.self_closing) {
        std::string text = scanner.raw_until_close(tag.name);
        if (tag.name == "script") scan_console_calls(text, model.console_);
      }
      continue;
    }

    if (tag.closing) {
      if (stack.size() > 1) stack.pop_back();
      continue;
    }

    auto element = std::make_unique<Element>();
    element->tag = tag.name;
    auto it = tag.attrs.find("id");
    if (it != tag.attrs.end()) element->id = it->second;
    it = tag.attrs.find("class");
    if (it != tag.attrs.end()) {
      for (const auto& c : support::split(it->second, ' '))
        if (!c.empty()) element->classes.push_back(c);
    }
    element->attrs = tag.attrs;

    if (tag.name == "body") {
      auto vp = tag.attrs.find("data-viewport");
      if (vp != tag.attrs.end()) {
        auto parts = support::split(vp->second, 'x');
        if (parts.size() == 2) {
          try {
            model.viewport_w_ = std::stoi(parts[0]);
            model.viewport_h_ = std::stoi(parts[1]);
          } catch (const std::exception&) {
          }
        }
      }
    }

    Element* raw = element.get();
    stack.back()->children.push_back(std::move(element));
    if (!tag.self_closing && !is_void_tag(tag.name)) stack.push_back(raw);
  }

  return model;
}

namespace {

const Element* find_in(const Element& el, const std::string& selector) {
  // Supported selectors: #id and .class (first match, depth first).
  bool by_id = !selector.empty() && selector[0] == '#';
  bool by_class = !selector.empty() && selector[0] == '.';
  std::string name = selector.substr(1);
  std::function<const Element*(const Element&)> walk =
      [&](const Element& node) -> const Element* {
    if (by_id && node.id == name) return &node;
    if (by_class && node.has_class(name)) return &node;
    for (const auto& child : node.children)
      if (const Element* hit = walk(*child)) return hit;
    return nullptr;
  };
  if (!by_id && !by_class) return nullptr;
  return walk(el);
}

void collect_panels(const Element& el, std::vector<const Element*>& out) {
  if (el.has_class("panel")) out.push_back(&el);
  for (const auto& child : el.children) collect_panels(*child, out);
}

}  // namespace

const Element* PageModel::find(const std::string& selector) const {
  return find_in(*root_, selector);
}

std::vector<const Element*> PageModel::panels() const {
  std::vector<const Element*> out;
  collect_panels(*root_, out);
  return out;
}

std::vector<std::string> PageModel::bump_targets(const Element& el,
                                                 const std::string& attr) {
  std::vector<std::string> updated;
  auto it = el.attrs.find(attr);
  if (it == el.attrs.end()) return updated;
  for (const auto& target : support::split(it->second, ',')) {
    std::string sel = support::trim(target);
    if (sel.empty()) continue;
    generations_[sel] += 1;
    updated.push_back(sel);
  }
  return updated;
}

std::optional<std::vector<std::string>> PageModel::click(
    const std::string& selector) {
  const Element* el = find(selector);
  if (!el) return std::nullopt;
  return bump_targets(*el, "data-click-updates");
}

std::optional<std::vector<std::string>> PageModel::set_value(
    const std::string& selector, const std::string& value) {
  (void)value;
  const Element* el = find(selector);
  if (!el) return std::nullopt;
  return bump_targets(*el, "data-set-updates");
}

int PageModel::generation(const std::string& selector) const {
  auto it = generations_.find(selector);
  return it == generations_.end() ? 0 : it->second;
}

int PageModel::element_count(const Element& el) const {
  std::string selector = "#" + el.id;
  return el.descendant_count() + generation(selector);
}

std::string PageModel::subtree_hash(const Element& el) const {
  std::string seed = el.tag + "#" + el.id;
  auto render = el.attrs.find("data-render");
  if (render != el.attrs.end()) seed += ":" + render->second;
  auto fill = el.attrs.find("data-fill");
  if (fill != el.attrs.end()) seed += ":" + fill->second;
  seed += ":" + std::to_string(el.descendant_count());
  seed += ":g" + std::to_string(generation("#" + el.id));
  return support::short_digest(seed);
}

json PageModel::dom_summary(const std::vector<std::string>& selectors) const {
  std::vector<std::string> effective = selectors;
  if (effective.empty()) {
    for (const Element* p : panels())
      if (!p->id.empty()) effective.push_back("#" + p->id);
  }

  json elements = json::array();
  for (const auto& selector : effective) {
    const Element* el = find(selector);
    if (!el) {
      elements.push_back({{"selector", selector}, {"found", false}});
      continue;
    }
    std::array<int, 4> bbox{0, 0, 0, 0};
    auto it = el->attrs.find("data-bbox");
    if (it != el->attrs.end()) bbox = parse_bbox(it->second);
    bool overflow_x = bbox[0] < 0 || bbox[0] + bbox[2] > viewport_w_;
    bool overflow_y = bbox[1] < 0 || bbox[1] + bbox[3] > viewport_h_;
    elements.push_back({{"selector", selector},
                        {"found", true},
                        {"element_count", element_count(*el)},
                        {"bbox", {bbox[0], bbox[1], bbox[2], bbox[3]}},
                        {"subtree_hash", subtree_hash(*el)},
                        {"overflow_x", overflow_x},
                        {"overflow_y", overflow_y}});
  }
  return json{{"viewport", {viewport_w_, viewport_h_}},
              {"elements", elements}};
}

}  // namespace browser_sim
