#include "visforge/artifact/body.hpp"

#include "visforge/support/text.hpp"

namespace visforge::artifact {

std::optional<Document> parse_document(std::string_view body) {
  std::string text = support::normalize_newlines(body);
  if (text.rfind("---\n", 0) != 0) return std::nullopt;
  size_t close = text.find("\n---\n", 3);
  size_t meta_end, prose_start;
  if (close == std::string::npos) {
    // Front matter may close at end-of-file.
    if (text.size() >= 8 && text.compare(text.size() - 4, 4, "\n---") == 0) {
      meta_end = text.size() - 4;
      prose_start = text.size();
    } else {
      return std::nullopt;
    }
  } else {
    meta_end = close;
    prose_start = close + 5;
  }
  std::string raw = text.substr(4, meta_end - 4);
  nlohmann::json meta = nlohmann::json::parse(raw, nullptr, false);
  if (meta.is_discarded() || !meta.is_object()) return std::nullopt;

  Document doc;
  doc.meta = std::move(meta);
  std::string prose = text.substr(std::min(prose_start, text.size()));
  while (!prose.empty() && prose.front() == '\n') prose.erase(0, 1);
  doc.prose = std::move(prose);
  return doc;
}

std::string serialize_document(const nlohmann::json& meta,
                               std::string_view prose) {
  std::string out = "---\n";
  out += meta.dump(2);
  out += "\n---\n";
  if (!prose.empty()) {
    out += "\n";
    out += support::normalize_newlines(prose);
    if (out.back() != '\n') out += "\n";
  }
  return out;
}

}  // namespace visforge::artifact
