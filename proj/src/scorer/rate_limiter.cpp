// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#include "patchsieve/scorer/rate_limiter.hpp"

#include <algorithm>
#include <thread>

namespace patchsieve::scorer {

RateLimiter::RateLimiter(double per_second, double burst)
    : per_second_(per_second),
      burst_(std::max(burst, 1.0)),
      tokens_(std::max(burst, 1.0)),
      last_refill_(std::chrono::steady_clock::now()) {}

void RateLimiter::acquire() {
    if (per_second_ <= 0) return;
    while (true) {
        std::chrono::duration<double> wait{0};
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto now = std::chrono::steady_clock::now();
            std::chrono::duration<double> elapsed = now - last_refill_;
            tokens_ = std::min(burst_, tokens_ + elapsed.count() * per_second_);
            last_refill_ = now;
            if (tokens_ >= 1.0) {
                tokens_ -= 1.0;
                return;
            }
            wait = std::chrono::duration<double>((1.0 - tokens_) / per_second_);
        }
        std::this_thread::sleep_for(wait);
    }
}

}  // namespace patchsieve::scorer
