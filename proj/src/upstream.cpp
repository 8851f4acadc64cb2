#include "cbld/upstream.hpp"

#include <httplib.h>

#include <algorithm>
#include <thread>

#include "cbld/url.hpp"

namespace cbld {

RateGate::RateGate(RateLimitConfig config) : interval_(config.min_interval) {
    if (interval_ <= std::chrono::milliseconds::zero()) {
        throw Error(ErrorKind::parse_error, "rate interval must be positive");
    }
}

std::chrono::steady_clock::time_point RateGate::acquire() {
    std::chrono::steady_clock::time_point slot;
    {
        std::lock_guard lock(mutex_);
        auto now = std::chrono::steady_clock::now();
        slot = std::max(now, next_slot_);
        next_slot_ = slot + interval_;
    }
    std::this_thread::sleep_until(slot);
    return slot;
}

UpstreamClient::UpstreamClient(std::string base_url, std::shared_ptr<RateGate> gate)
    : base_url_(std::move(base_url)), gate_(std::move(gate)) {
    while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
    if (!try_parse_url(base_url_)) {
        throw Error(ErrorKind::unparseable_url, "bad upstream base URL");
    }
}

FetchResult UpstreamClient::fetch(const std::string& path, const ApiKey& key) const {
    std::string target = "/" + path;
    target += (path.find('?') == std::string::npos) ? "?user_key=" : "&user_key=";
    target += key.secret();

    for (int attempt = 1;; ++attempt) {
        gate_->acquire();
        httplib::Client client(base_url_);
        client.set_connection_timeout(10);
        client.set_read_timeout(30);
        httplib::Result res = client.Get(target);

        if (!res) {
            throw Error(ErrorKind::upstream_error, "no response from upstream for " + path);
        }
        switch (res->status) {
            case 200: {
                FetchResult result;
                result.body = res->body;
                try {
                    result.envelope = parse_envelope(result.body);
                } catch (const Error& e) {
                    throw e.with_context("while fetching " + path);
                }
                return result;
            }
            case 401:
                throw Error(ErrorKind::invalid_key, "upstream rejected the API key for " + path);
            case 404:
                throw Error(ErrorKind::unknown_entity, "no upstream entity at " + path);
            case 429: {
                if (attempt >= max_attempts_) {
                    throw Error(ErrorKind::rate_exceeded,
                                "upstream kept returning 429 for " + path);
                }
                auto backoff = gate_->min_interval() * (1 << (attempt - 1));
                std::this_thread::sleep_for(backoff);
                break;
            }
            default:
                throw Error(ErrorKind::upstream_error,
                            "upstream returned " + std::to_string(res->status) + " for " + path);
        }
    }
}

std::string UpstreamClient::relativize(const std::string& absolute_url) const {
    auto link = try_parse_url(absolute_url);
    if (!link) {
        throw Error(ErrorKind::unparseable_url, "bad next_page_url \"" + absolute_url + "\"");
    }
    auto base = try_parse_url(base_url_);
    if (origin_of(*link) != origin_of(*base)) {
        throw Error(ErrorKind::foreign_redirect,
                    "next_page_url leaves the upstream host: \"" + absolute_url + "\"");
    }
    std::string rel = link->path;
    if (!rel.empty() && rel.front() == '/') rel.erase(0, 1);
    if (!link->query.empty()) rel += "?" + link->query;
    return rel;
}

std::vector<FetchResult> UpstreamClient::fetch_all_pages(const std::string& path,
                                                         const ApiKey& key) const {
    std::vector<FetchResult> pages;
    std::string current = path;
    for (std::size_t page_index = 1;; ++page_index) {
        try {
            pages.push_back(fetch(current, key));
        } catch (const Error& e) {
            throw e.with_context("page " + std::to_string(page_index));
        }
        const UpstreamEnvelope& env = pages.back().envelope;
        if (!env.has_summary() || !env.summary().next_page_url) break;
        current = relativize(*env.summary().next_page_url);
    }
    return pages;
}

}  // namespace cbld
