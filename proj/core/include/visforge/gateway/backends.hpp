#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "visforge/gateway/chat.hpp"

namespace visforge::gateway {

namespace fs = std::filesystem;

class Backend {
 public:
  virtual ~Backend() = default;
  virtual ChatResponse complete(const ChatRequest& request) = 0;
  virtual std::string name() const = 0;
};

/// Validates the request, dispatches to the backend, and asserts usage
/// sanity on the response.
ChatResponse complete(Backend& backend, const ChatRequest& request);

// ---------------------------------------------------------------------------
// Scripted backend: rule-driven canned responses, for tests and for
// recording deterministic demo transcripts.
//
// Script JSON: {"rules": [{"match": {...}, "once": bool, "response": {...}}]}
// Match fields (all optional, all must hold): system_contains,
// last_contains, any_contains. The first available matching rule wins.
// ---------------------------------------------------------------------------
class ScriptedBackend : public Backend {
 public:
  explicit ScriptedBackend(nlohmann::json script);
  static std::unique_ptr<ScriptedBackend> from_file(const fs::path& path);

  ChatResponse complete(const ChatRequest& request) override;
  std::string name() const override { return "scripted"; }

 private:
  struct Rule {
    nlohmann::json match;
    bool once = false;
    bool used = false;
    nlohmann::json response;
  };
  std::vector<Rule> rules_;
  std::mutex mu_;
};

// ---------------------------------------------------------------------------
// Replay backend: answers from a recorded transcript, keyed by the
// canonical request digest; order-independent by construction.
// ---------------------------------------------------------------------------
class ReplayBackend : public Backend {
 public:
  /// Parses the transcript eagerly. Throws CorruptTranscript on unparseable
  /// lines and DigestCollision when one key maps to two different bodies.
  static std::unique_ptr<ReplayBackend> open(const fs::path& path);

  ChatResponse complete(const ChatRequest& request) override;
  std::string name() const override { return "replay"; }

  size_t entry_count() const { return entries_.size(); }

 private:
  std::map<std::string, nlohmann::json> entries_;
};

// ---------------------------------------------------------------------------
// Recording decorator: tees every (request, response) pair into an
// append-only transcript file, one JSON object per line.
// ---------------------------------------------------------------------------
class RecordingBackend : public Backend {
 public:
  RecordingBackend(std::shared_ptr<Backend> inner, fs::path transcript_path);

  ChatResponse complete(const ChatRequest& request) override;
  std::string name() const override { return inner_->name() + "+record"; }

 private:
  std::shared_ptr<Backend> inner_;
  fs::path path_;
  std::map<std::string, std::string> seen_;  // digest -> response dump
  std::mutex mu_;
};

// ---------------------------------------------------------------------------
// Live HTTP backend (OpenAI-style chat completions). Configured from the
// environment: VISFORGE_LLM_ENDPOINT, VISFORGE_LLM_API_KEY,
// VISFORGE_LLM_MODEL.
// ---------------------------------------------------------------------------
class LiveBackend : public Backend {
 public:
  struct Config {
    std::string endpoint;
    std::string api_key;
    std::string model;
  };

  static Config config_from_env();
  explicit LiveBackend(Config config);

  ChatResponse complete(const ChatRequest& request) override;
  std::string name() const override { return "live"; }

 private:
  Config config_;
};

/// Wire-format helpers, separated so the mapping is testable offline.
nlohmann::json live_request_payload(const ChatRequest& request,
                                    const std::string& model);
ChatResponse parse_live_response(const nlohmann::json& body);

}  // namespace visforge::gateway
