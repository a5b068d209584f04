#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "visforge/gateway/backends.hpp"
#include "visforge/gateway/ledger.hpp"
#include "visforge/types.hpp"

namespace visforge::gateway {

/// Output-token budget caps, enforced before dispatch. The gateway is the
/// single choke point; roles never see budget logic.
struct BudgetCaps {
  std::optional<std::int64_t> max_output_tokens_per_run;
  std::map<RoleName, std::int64_t> max_output_tokens_per_role;
};

/// The harness-facing handle: one backend + one ledger + the caps.
/// Calls are serialized; the ledger accepts concurrent reads.
class Gateway {
 public:
  explicit Gateway(std::shared_ptr<Backend> backend, BudgetCaps caps = {});

  /// Checks budgets, dispatches, records usage under (role, stage).
  ChatResponse complete(const ChatRequest& request, RoleName role,
                        Stage stage);

  UsageLedger& ledger() { return ledger_; }
  const UsageLedger& ledger() const { return ledger_; }
  Backend& backend() { return *backend_; }

 private:
  std::shared_ptr<Backend> backend_;
  BudgetCaps caps_;
  UsageLedger ledger_;
  std::mutex mu_;
};

}  // namespace visforge::gateway
