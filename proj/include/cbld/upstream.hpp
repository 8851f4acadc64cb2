#pragma once

#include <chrono>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "cbld/envelope.hpp"
#include "cbld/error.hpp"

namespace cbld {

// An opaque upstream credential. The secret never appears in logs or error
// messages; it is only ever rendered into the user_key URI parameter.
class ApiKey {
public:
    explicit ApiKey(std::string secret) : secret_(std::move(secret)) {
        if (secret_.empty()) throw Error(ErrorKind::invalid_key, "empty API key");
    }

    const std::string& secret() const noexcept { return secret_; }

private:
    std::string secret_;
};

struct RateLimitConfig {
    std::chrono::milliseconds min_interval{1000};
};

// Process-wide request pacing: acquire() hands out start slots at least
// min_interval apart across all concurrent callers and blocks until the
// caller's slot arrives.
class RateGate {
public:
    explicit RateGate(RateLimitConfig config);

    std::chrono::steady_clock::time_point acquire();

    std::chrono::milliseconds min_interval() const noexcept { return interval_; }

private:
    std::chrono::milliseconds interval_;
    std::mutex mutex_;
    std::chrono::steady_clock::time_point next_slot_{};
};

struct FetchResult {
    std::string body;  // raw upstream bytes, for pass-through
    UpstreamEnvelope envelope;
};

// GET client for the upstream JSON API. The key travels as the user_key
// URI parameter; every request start is paced through the shared gate.
class UpstreamClient {
public:
    UpstreamClient(std::string base_url, std::shared_ptr<RateGate> gate);

    // `path` is relative ("organizations/facebook", optionally with a
    // query). 429 responses are retried with exponential backoff before
    // giving up as rate-exceeded.
    FetchResult fetch(const std::string& path, const ApiKey& key) const;

    // Follows next_page_url links until exhausted; refuses to leave the
    // configured host. Errors carry the 1-based page index.
    std::vector<FetchResult> fetch_all_pages(const std::string& path, const ApiKey& key) const;

    const std::string& base_url() const noexcept { return base_url_; }
    std::shared_ptr<RateGate> gate() const noexcept { return gate_; }

    // Turns an absolute next_page_url into a relative path for fetch();
    // throws foreign-redirect when it points off-host.
    std::string relativize(const std::string& absolute_url) const;

private:
    std::string base_url_;
    std::shared_ptr<RateGate> gate_;
    int max_attempts_ = 5;
};

}  // namespace cbld
