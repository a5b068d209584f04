#include "visforge/support/jsonrpc_framing.hpp"

#include <cctype>

#include "visforge/error.hpp"
#include "visforge/support/text.hpp"

namespace visforge::support {

std::string frame_message(std::string_view payload) {
  return "Content-Length: " + std::to_string(payload.size()) + "\r\n\r\n" +
         std::string(payload);
}

std::optional<std::string> FrameDecoder::next() {
  if (buf_.empty()) return std::nullopt;

  size_t hdr_end = buf_.find("\r\n\r\n");
  if (hdr_end == std::string::npos) {
    // An over-long prefix with no header terminator cannot become valid.
    if (buf_.size() > 8192)
      raise(ErrorCode::ProtocolError,
            "no frame header in: " + buf_.substr(0, 80));
    return std::nullopt;
  }

  size_t content_length = std::string::npos;
  for (const std::string& line : split(buf_.substr(0, hdr_end), '\n')) {
    std::string l = trim(line);
    const std::string key = "content-length:";
    if (to_lower(l).rfind(key, 0) == 0) {
      std::string value = trim(l.substr(key.size()));
      if (value.empty() ||
          value.find_first_not_of("0123456789") != std::string::npos)
        raise(ErrorCode::ProtocolError, "bad Content-Length: " + l);
      content_length = std::stoul(value);
    }
  }
  if (content_length == std::string::npos)
    raise(ErrorCode::ProtocolError,
          "frame header lacks Content-Length: " + buf_.substr(0, 80));

  size_t body_start = hdr_end + 4;
  if (buf_.size() < body_start + content_length) return std::nullopt;

  std::string payload = buf_.substr(body_start, content_length);
  buf_.erase(0, body_start + content_length);
  return payload;
}

}  // namespace visforge::support
