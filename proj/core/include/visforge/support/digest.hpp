#pragma once

#include <string>
#include <string_view>

namespace visforge::support {

/// SHA-256 of the given bytes, lowercase hex.
std::string sha256_hex(std::string_view bytes);

/// SHA-256 of a file's raw bytes. Throws Error(IoFailure) if unreadable.
std::string sha256_file(const std::string& path);

/// Short (16 hex chars) digest used for transcript keys and ids.
std::string short_digest(std::string_view bytes);

}  // namespace visforge::support
