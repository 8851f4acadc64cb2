#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "cbld/envelope.hpp"

namespace httplib {
class Server;
}

namespace cbld {

// One fixture entity; relationship items are api_paths in fixture order.
struct FixtureEntity {
    std::string entity_type;
    std::string permalink;
    std::string uuid;
    nlohmann::json properties = nlohmann::json::object();
    std::vector<std::pair<std::string, std::vector<std::string>>> relationships;

    std::string api_path() const { return entity_type + "/" + permalink; }
};

class FixtureCorpus {
public:
    void add(FixtureEntity entity);

    // Marks a relationship target that deliberately resolves nowhere.
    void allow_dangling(std::string api_path);

    // Loads `<dir>/<entity_type>/<permalink>.json` files.
    static FixtureCorpus load_dir(const std::filesystem::path& dir);

    // Every relationship item must resolve to a fixture or be explicitly
    // marked dangling.
    void validate() const;

    const FixtureEntity* find(std::string_view entity_type, std::string_view permalink) const;
    std::vector<const FixtureEntity*> of_type(std::string_view entity_type) const;
    std::vector<std::string> entity_types() const;  // sorted, distinct
    const std::vector<FixtureEntity>& all() const { return entities_; }
    std::size_t size() const { return entities_.size(); }

private:
    std::vector<FixtureEntity> entities_;
    std::map<std::string, std::size_t> by_path_;
    std::set<std::string> dangling_;
};

struct MockConfig {
    std::size_t page_size = 8;
    // Accepted user_key values; when empty, any non-empty key passes.
    std::set<std::string> valid_keys;
    bool enforce_rate = false;
    std::chrono::milliseconds rate_interval{1000};
};

struct RequestRecord {
    std::string path;
    std::string query;
    std::chrono::steady_clock::time_point time;
};

// Fixture-driven stand-in for the upstream JSON API. Serves index, detail
// and relation pages with computed paging blocks, checks keys, optionally
// simulates the 1-req/s limit, and records every request it sees.
class MockUpstream {
public:
    MockUpstream(FixtureCorpus corpus, MockConfig config);
    ~MockUpstream();

    MockUpstream(const MockUpstream&) = delete;
    MockUpstream& operator=(const MockUpstream&) = delete;

    // Binds 127.0.0.1 on an ephemeral port (or `port` when nonzero) and
    // serves on a background thread.
    void start(const std::string& host = "127.0.0.1", int port = 0);
    void stop();

    int port() const noexcept { return port_; }
    std::string base_url() const;

    std::vector<RequestRecord> request_log() const;
    std::size_t request_count() const;
    void clear_request_log();

    // Test hook: the next `times` requests whose path starts with `prefix`
    // get `status` instead of being served (-1 = forever).
    void force_status(std::string path_prefix, int status, int times = -1);

    const FixtureCorpus& corpus() const noexcept { return corpus_; }
    const MockConfig& config() const noexcept { return config_; }

private:
    struct ForcedStatus {
        std::string prefix;
        int status;
        int remaining;
    };

    void configure_routes();
    nlohmann::json metadata_block() const;
    nlohmann::json paging_block(std::int64_t total, std::int64_t page,
                                const std::string& next_url_base) const;

    FixtureCorpus corpus_;
    MockConfig config_;
    std::unique_ptr<httplib::Server> server_;
    std::thread serve_thread_;
    std::string host_ = "127.0.0.1";
    int port_ = 0;

    mutable std::mutex mutex_;
    std::vector<RequestRecord> log_;
    std::vector<ForcedStatus> forced_;
    std::optional<std::chrono::steady_clock::time_point> last_request_;
};

}  // namespace cbld
