// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#pragma once

#include <chrono>
#include <mutex>

namespace patchsieve::scorer {

// Token bucket: `per_second` refill rate with up to `burst` stored tokens.
// A non-positive rate disables limiting. Thread-safe; acquire() blocks the
// calling thread until a token is available.
class RateLimiter {
  public:
    explicit RateLimiter(double per_second, double burst = 1.0);

    void acquire();

  private:
    double per_second_;
    double burst_;
    double tokens_;
    std::chrono::steady_clock::time_point last_refill_;
    std::mutex mu_;
};

}  // namespace patchsieve::scorer
