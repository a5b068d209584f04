#pragma once

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "visforge/gateway/chat.hpp"
#include "visforge/types.hpp"

namespace visforge::gateway {

/// Per-role and per-stage token accumulators plus run totals. Accepts
/// concurrent record calls; totals always equal the component-wise sum of
/// everything recorded, independent of insertion order.
class UsageLedger {
 public:
  void record(RoleName role, Stage stage, const TokenUsage& usage);

  TokenUsage total() const;
  TokenUsage for_role(RoleName role) const;
  TokenUsage for_stage(Stage stage) const;

  /// Recomputes the total from the per-(role,stage) cells; equal to
  /// total() by construction, exposed so tests can assert it.
  TokenUsage recompute_total() const;

  nlohmann::json to_json() const;

 private:
  mutable std::mutex mu_;
  std::map<std::pair<std::string, std::string>, TokenUsage> cells_;
  TokenUsage total_;
};

/// Spec-shaped convenience: accumulate one usage sample into the ledger.
inline void record_usage(UsageLedger& ledger, RoleName role, Stage stage,
                         const TokenUsage& usage) {
  ledger.record(role, stage, usage);
}

}  // namespace visforge::gateway
