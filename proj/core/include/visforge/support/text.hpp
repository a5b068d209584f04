#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace visforge::support {

namespace fs = std::filesystem;

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

/// CRLF and lone CR become LF. Canonical form for artifact bodies.
std::string normalize_newlines(std::string_view s);

/// Lowercased alphanumeric terms ([a-z0-9_]+ runs), for lexical retrieval.
std::vector<std::string> tokenize_terms(std::string_view s);

/// Replace every "{{name}}" placeholder; unknown placeholders are left as-is.
std::string render_template(
    std::string_view tmpl,
    const std::vector<std::pair<std::string, std::string>>& values);

std::string read_text_file(const fs::path& path);
void write_text_file(const fs::path& path, std::string_view content);
void append_text_file(const fs::path& path, std::string_view content);
bool file_exists(const fs::path& path);

/// True if `p`, after normalization, stays within `root`.
bool path_within(const fs::path& root, const fs::path& p);

}  // namespace visforge::support
