#pragma once

#include <chrono>
#include <condition_variable>
#include <functional>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>

#include <fmt/format.h>

#include "speechjudge/core/errors.h"
#include "speechjudge/judge/clients.h"

namespace speechjudge::judge {

struct RetryPolicy {
  /// Retries after the first attempt.
  int retry_budget = 3;
  std::chrono::milliseconds backoff_base{200};
  /// Injected in tests to avoid real waiting.
  std::function<void(std::chrono::milliseconds)> sleep = [](std::chrono::milliseconds d) {
    std::this_thread::sleep_for(d);
  };
};

/// Runs `call`, retrying on TransportError with exponential backoff
/// (base, 2*base, 4*base, ...). Other exceptions propagate at once. After the
/// budget is spent the last TransportError is rethrown with `what` prefixed.
template <class F>
auto with_retry(const RetryPolicy& policy, std::string_view what, F&& call) -> decltype(call()) {
  for (int attempt = 0;; ++attempt) {
    try {
      return call();
    } catch (const TransportError& e) {
      if (attempt >= policy.retry_budget) {
        throw TransportError(
            fmt::format("{}: gave up after {} attempts: {}", what, attempt + 1, e.what()));
      }
      policy.sleep(policy.backoff_base * (1 << attempt));
    }
  }
}

/// Counting gate bounding concurrent calls into one service.
class InFlightLimiter {
 public:
  explicit InFlightLimiter(int max_in_flight);

  class Permit {
   public:
    explicit Permit(InFlightLimiter& owner) : owner_(&owner) {}
    Permit(const Permit&) = delete;
    Permit& operator=(const Permit&) = delete;
    ~Permit() { owner_->release(); }

   private:
    InFlightLimiter* owner_;
  };

  [[nodiscard]] Permit acquire();
  int max_in_flight() const { return max_; }

 private:
  void release();

  const int max_;
  int in_use_ = 0;
  std::mutex mu_;
  std::condition_variable cv_;
};

/// Wraps every client so that each call holds a limiter permit and is retried
/// per `policy`. Null handles stay null.
ModelClients guard_clients(const ModelClients& clients, int max_in_flight,
                           RetryPolicy policy = {});

}  // namespace speechjudge::judge
