#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace visforge::support {

/// Content-Length framing for JSON-RPC over byte streams:
///   Content-Length: <n>\r\n\r\n<n payload bytes>

std::string frame_message(std::string_view payload);

/// Incremental decoder. Feed raw bytes, pop complete payloads.
class FrameDecoder {
 public:
  void feed(std::string_view bytes) { buf_ += bytes; }

  /// Next complete payload, or nullopt when more bytes are needed.
  /// Throws Error(ProtocolError) on a malformed header, carrying an
  /// excerpt of the offending bytes.
  std::optional<std::string> next();

  bool empty() const { return buf_.empty(); }

 private:
  std::string buf_;
};

}  // namespace visforge::support
