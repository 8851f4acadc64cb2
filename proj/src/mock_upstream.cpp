#include "cbld/mock_upstream.hpp"

#include <httplib.h>

#include <algorithm>
#include <fstream>

#include "cbld/rdf.hpp"

namespace cbld {

namespace {

using nlohmann::json;

ItemStub stub_from_path(const std::string& api_path) {
    auto slash = api_path.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 >= api_path.size()) {
        throw Error(ErrorKind::parse_error, "bad api_path \"" + api_path + "\"");
    }
    ItemStub stub;
    stub.entity_type = api_path.substr(0, slash);
    stub.permalink = api_path.substr(slash + 1);
    stub.api_path = api_path;
    return stub;
}

void reply_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
    reply_json(res, status, json{{"error", message}});
}

}  // namespace

void FixtureCorpus::add(FixtureEntity entity) {
    std::string path = entity.api_path();
    if (by_path_.count(path)) {
        throw Error(ErrorKind::parse_error, "duplicate fixture " + path);
    }
    by_path_[path] = entities_.size();
    entities_.push_back(std::move(entity));
}

void FixtureCorpus::allow_dangling(std::string api_path) {
    dangling_.insert(std::move(api_path));
}

FixtureCorpus FixtureCorpus::load_dir(const std::filesystem::path& dir) {
    FixtureCorpus corpus;
    if (!std::filesystem::is_directory(dir)) {
        throw Error(ErrorKind::io_error, "fixture directory not found: " + dir.string());
    }
    std::vector<std::filesystem::path> files;
    for (const auto& type_dir : std::filesystem::directory_iterator(dir)) {
        if (!type_dir.is_directory()) continue;
        for (const auto& file : std::filesystem::directory_iterator(type_dir.path())) {
            if (file.path().extension() == ".json") files.push_back(file.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        std::ifstream in(file);
        json doc = json::parse(in, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) {
            throw Error(ErrorKind::parse_error, "bad fixture JSON: " + file.string());
        }
        FixtureEntity entity;
        entity.entity_type = file.parent_path().filename().string();
        entity.permalink = file.stem().string();
        entity.uuid = doc.value("uuid", "");
        if (doc.contains("properties")) entity.properties = doc["properties"];
        if (doc.contains("relationships")) {
            for (auto it = doc["relationships"].begin(); it != doc["relationships"].end(); ++it) {
                entity.relationships.emplace_back(it.key(),
                                                  it.value().get<std::vector<std::string>>());
            }
        }
        if (doc.contains("dangling_ok")) {
            for (const auto& p : doc["dangling_ok"]) corpus.allow_dangling(p.get<std::string>());
        }
        corpus.add(std::move(entity));
    }
    return corpus;
}

void FixtureCorpus::validate() const {
    for (const FixtureEntity& entity : entities_) {
        for (const auto& [relation, paths] : entity.relationships) {
            for (const std::string& path : paths) {
                if (!by_path_.count(path) && !dangling_.count(path)) {
                    throw Error(ErrorKind::parse_error,
                                "fixture " + entity.api_path() + " relation \"" + relation +
                                    "\" points at missing " + path);
                }
            }
        }
    }
}

const FixtureEntity* FixtureCorpus::find(std::string_view entity_type,
                                         std::string_view permalink) const {
    auto it = by_path_.find(std::string(entity_type) + "/" + std::string(permalink));
    return it == by_path_.end() ? nullptr : &entities_[it->second];
}

std::vector<const FixtureEntity*> FixtureCorpus::of_type(std::string_view entity_type) const {
    std::vector<const FixtureEntity*> result;
    for (const FixtureEntity& e : entities_) {
        if (e.entity_type == entity_type) result.push_back(&e);
    }
    return result;
}

std::vector<std::string> FixtureCorpus::entity_types() const {
    std::set<std::string> types;
    for (const FixtureEntity& e : entities_) types.insert(e.entity_type);
    return {types.begin(), types.end()};
}

MockUpstream::MockUpstream(FixtureCorpus corpus, MockConfig config)
    : corpus_(std::move(corpus)), config_(std::move(config)) {
    corpus_.validate();
    server_ = std::make_unique<httplib::Server>();
    configure_routes();
}

MockUpstream::~MockUpstream() { stop(); }

void MockUpstream::start(const std::string& host, int port) {
    host_ = host;
    if (port == 0) {
        port_ = server_->bind_to_any_port(host);
        if (port_ <= 0) throw Error(ErrorKind::io_error, "cannot bind mock upstream");
    } else {
        if (!server_->bind_to_port(host, port)) {
            throw Error(ErrorKind::io_error, "cannot bind mock upstream to port " +
                                                 std::to_string(port));
        }
        port_ = port;
    }
    serve_thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
}

void MockUpstream::stop() {
    if (server_ && server_->is_running()) server_->stop();
    if (serve_thread_.joinable()) serve_thread_.join();
}

std::string MockUpstream::base_url() const {
    return "http://" + host_ + ":" + std::to_string(port_);
}

std::vector<RequestRecord> MockUpstream::request_log() const {
    std::lock_guard lock(mutex_);
    return log_;
}

std::size_t MockUpstream::request_count() const {
    std::lock_guard lock(mutex_);
    return log_.size();
}

void MockUpstream::clear_request_log() {
    std::lock_guard lock(mutex_);
    log_.clear();
}

void MockUpstream::force_status(std::string path_prefix, int status, int times) {
    std::lock_guard lock(mutex_);
    forced_.push_back({std::move(path_prefix), status, times});
}

json MockUpstream::metadata_block() const {
    return {{"version", 31},
            {"www_path_prefix", "https://www.example.org/"},
            {"api_path_prefix", base_url()}};
}

json MockUpstream::paging_block(std::int64_t total, std::int64_t page,
                                const std::string& next_url_base) const {
    json paging = {{"total_items", total},
                   {"current_page", page},
                   {"items_per_page", static_cast<std::int64_t>(config_.page_size)}};
    if (page * static_cast<std::int64_t>(config_.page_size) < total) {
        std::string sep = next_url_base.find('?') == std::string::npos ? "?" : "&";
        paging["next_page_url"] = next_url_base + sep + "page=" + std::to_string(page + 1);
    }
    return paging;
}

void MockUpstream::configure_routes() {
    server_->Get("/__log", [this](const httplib::Request&, httplib::Response& res) {
        json entries = json::array();
        std::lock_guard lock(mutex_);
        for (const RequestRecord& r : log_) {
            entries.push_back({{"path", r.path}, {"query", r.query}});
        }
        reply_json(res, 200, entries);
    });

    // Everything else funnels through one handler so logging, forced
    // statuses, rate simulation and key checking happen uniformly.
    server_->Get(R"(/.*)", [this](const httplib::Request& req, httplib::Response& res) {
        {
            std::lock_guard lock(mutex_);
            std::string query;
            for (const auto& [k, v] : req.params) {
                if (!query.empty()) query += "&";
                query += k + "=" + v;
            }
            log_.push_back({req.path, query, std::chrono::steady_clock::now()});

            std::string target = req.path.substr(1);
            if (!query.empty()) target += "?" + query;
            for (auto it = forced_.begin(); it != forced_.end(); ++it) {
                if (target.rfind(it->prefix, 0) == 0 && it->remaining != 0) {
                    int status = it->status;
                    if (it->remaining > 0 && --it->remaining == 0) forced_.erase(it);
                    reply_error(res, status, "forced status");
                    return;
                }
            }

            if (config_.enforce_rate) {
                auto now = std::chrono::steady_clock::now();
                if (last_request_ && now - *last_request_ < config_.rate_interval) {
                    reply_error(res, 429, "rate limit exceeded");
                    return;
                }
                last_request_ = now;
            }
        }

        std::string key = req.get_param_value("user_key");
        if (key.empty() || (!config_.valid_keys.empty() && !config_.valid_keys.count(key))) {
            reply_error(res, 401, "invalid or missing user_key");
            return;
        }

        std::int64_t page = 1;
        if (req.has_param("page")) {
            try {
                page = std::stoll(req.get_param_value("page"));
            } catch (...) {
                page = 0;
            }
            if (page < 1) {
                reply_error(res, 400, "bad page parameter");
                return;
            }
        }

        std::vector<std::string> segments;
        std::string segment;
        for (char c : req.path.substr(1)) {
            if (c == '/') {
                segments.push_back(segment);
                segment.clear();
            } else {
                segment.push_back(c);
            }
        }
        segments.push_back(segment);

        auto page_size = static_cast<std::int64_t>(config_.page_size);

        if (segments.size() == 1) {
            const std::string& type = segments[0];
            auto entities = corpus_.of_type(type);
            if (entities.empty() && !is_entity_type(type)) {
                reply_error(res, 404, "unknown entity type");
                return;
            }
            json items = json::array();
            auto total = static_cast<std::int64_t>(entities.size());
            for (std::int64_t i = (page - 1) * page_size;
                 i < std::min(page * page_size, total); ++i) {
                items.push_back(item_stub_to_json(stub_from_path(entities[i]->api_path())));
            }
            json data = {{"paging", paging_block(total, page, base_url() + "/" + type)},
                         {"items", items}};
            reply_json(res, 200, json{{"metadata", metadata_block()}, {"data", data}});
            return;
        }

        const FixtureEntity* entity = corpus_.find(segments[0], segments[1]);
        if (!entity) {
            reply_error(res, 404, "unknown entity");
            return;
        }

        if (segments.size() == 2) {
            json relationships = json::object();
            for (const auto& [relation, paths] : entity->relationships) {
                json items = json::array();
                auto total = static_cast<std::int64_t>(paths.size());
                for (std::int64_t i = 0; i < std::min(page_size, total); ++i) {
                    items.push_back(item_stub_to_json(stub_from_path(paths[i])));
                }
                std::string rel_url = base_url() + "/" + entity->api_path() + "/" + relation;
                relationships[relation] = {{"paging", paging_block(total, 1, rel_url)},
                                           {"items", items}};
            }
            json data = {{"uuid", entity->uuid},
                         {"entity_type", entity->entity_type},
                         {"permalink", entity->permalink},
                         {"properties", entity->properties},
                         {"relationships", relationships}};
            reply_json(res, 200, json{{"metadata", metadata_block()}, {"data", data}});
            return;
        }

        if (segments.size() == 3) {
            const std::string& relation = segments[2];
            const std::vector<std::string>* paths = nullptr;
            for (const auto& [name, items] : entity->relationships) {
                if (name == relation) paths = &items;
            }
            if (!paths) {
                reply_error(res, 404, "unknown relation");
                return;
            }
            json items = json::array();
            auto total = static_cast<std::int64_t>(paths->size());
            for (std::int64_t i = (page - 1) * page_size;
                 i < std::min(page * page_size, total); ++i) {
                items.push_back(item_stub_to_json(stub_from_path((*paths)[i])));
            }
            std::string rel_url = base_url() + "/" + entity->api_path() + "/" + relation;
            json data = {{"paging", paging_block(total, page, rel_url)}, {"items", items}};
            reply_json(res, 200, json{{"metadata", metadata_block()}, {"data", data}});
            return;
        }

        reply_error(res, 404, "no such route");
    });
}

}  // namespace cbld
