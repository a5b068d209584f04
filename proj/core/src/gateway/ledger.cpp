#include "visforge/gateway/ledger.hpp"

#include "visforge/error.hpp"

namespace visforge::gateway {

void UsageLedger::record(RoleName role, Stage stage, const TokenUsage& usage) {
  if (usage.input_tokens < 0 || usage.cached_tokens < 0 ||
      usage.output_tokens < 0 || usage.reasoning_tokens < 0)
    raise(ErrorCode::BackendUnavailable, "negative token counts recorded");
  std::lock_guard lock(mu_);
  cells_[{std::string(to_string(role)), std::string(to_string(stage))}] +=
      usage;
  total_ += usage;
}

TokenUsage UsageLedger::total() const {
  std::lock_guard lock(mu_);
  return total_;
}

TokenUsage UsageLedger::for_role(RoleName role) const {
  std::lock_guard lock(mu_);
  TokenUsage out;
  for (const auto& [key, usage] : cells_)
    if (key.first == to_string(role)) out += usage;
  return out;
}

TokenUsage UsageLedger::for_stage(Stage stage) const {
  std::lock_guard lock(mu_);
  TokenUsage out;
  for (const auto& [key, usage] : cells_)
    if (key.second == to_string(stage)) out += usage;
  return out;
}

TokenUsage UsageLedger::recompute_total() const {
  std::lock_guard lock(mu_);
  TokenUsage out;
  for (const auto& [key, usage] : cells_) out += usage;
  return out;
}

nlohmann::json UsageLedger::to_json() const {
  std::lock_guard lock(mu_);
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& [key, usage] : cells_)
    cells.push_back({{"role", key.first},
                     {"stage", key.second},
                     {"usage", usage.to_json()}});
  return nlohmann::json{{"cells", cells}, {"total", total_.to_json()}};
}

}  // namespace visforge::gateway
