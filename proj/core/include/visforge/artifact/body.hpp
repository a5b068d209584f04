#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace visforge::artifact {

/// An artifact body: a machine-readable front-matter object between `---`
/// fences, followed by free markdown prose. The front matter holds every
/// field the schemas check; the prose is for humans.
struct Document {
  nlohmann::json meta;
  std::string prose;
};

/// Returns nullopt when there is no parseable front-matter block.
std::optional<Document> parse_document(std::string_view body);

/// Serializes with a stable field order (nlohmann sorts keys), two-space
/// indent, LF endings. The inverse of parse_document modulo whitespace.
std::string serialize_document(const nlohmann::json& meta,
                               std::string_view prose);

}  // namespace visforge::artifact
