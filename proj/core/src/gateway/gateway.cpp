#include "visforge/gateway/gateway.hpp"

#include "visforge/error.hpp"

namespace visforge::gateway {

Gateway::Gateway(std::shared_ptr<Backend> backend, BudgetCaps caps)
    : backend_(std::move(backend)), caps_(std::move(caps)) {
  if (!backend_) raise(ErrorCode::BackendUnavailable, "null backend");
}

ChatResponse Gateway::complete(const ChatRequest& request, RoleName role,
                               Stage stage) {
  std::lock_guard lock(mu_);

  if (caps_.max_output_tokens_per_run &&
      ledger_.total().output_tokens >= *caps_.max_output_tokens_per_run)
    raise(ErrorCode::BudgetExceeded,
          "run output-token budget of " +
              std::to_string(*caps_.max_output_tokens_per_run) + " reached");
  auto role_cap = caps_.max_output_tokens_per_role.find(role);
  if (role_cap != caps_.max_output_tokens_per_role.end() &&
      ledger_.for_role(role).output_tokens >= role_cap->second)
    raise(ErrorCode::BudgetExceeded,
          std::string(to_string(role)) + " output-token budget of " +
              std::to_string(role_cap->second) + " reached");

  ChatResponse response = gateway::complete(*backend_, request);
  ledger_.record(role, stage, response.usage);
  return response;
}

}  // namespace visforge::gateway
