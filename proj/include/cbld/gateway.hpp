#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "cbld/rdf.hpp"
#include "cbld/sameas_store.hpp"
#include "cbld/upstream.hpp"

namespace httplib {
class Server;
}

namespace cbld {

// The three representations the API can serve. text/turtle labels the
// N-Triples serialization (a Turtle subset).
enum class NegotiatedFormat { json, jsonld, turtle };

std::string_view media_type(NegotiatedFormat format);

// Picks the best supported type from an Accept header. Absent header and
// */* default to text/turtle; ties break turtle > ld+json > json. Throws
// not-acceptable when nothing supported has q > 0.
NegotiatedFormat negotiate(const std::string& accept_header);

// Extracts the API key from a `Basic` Authorization header whose
// credentials are `{key}:` (empty password). Absent header means
// anonymous access, not an error.
std::optional<ApiKey> decode_auth_header(const std::optional<std::string>& header);

// The anonymous representation of an entity: exactly the stored owl:sameAs
// triples, possibly none. Never touches upstream.
TripleSet keyless_response(const Iri& entity_iri, const SameAsStore& store);

struct HttpRequest {
    std::string method = "GET";
    std::string path;
    std::string query;  // without '?', e.g. "page=2"
    std::string accept;
    std::optional<std::string> authorization;
};

struct HttpResponse {
    int status = 200;
    std::string content_type;
    std::string body;
    std::map<std::string, std::string> headers;
};

struct GatewayConfig {
    std::string upstream_base;
    Iri base_iri{std::string("http://linked-crunchbase.org")};
    std::optional<std::filesystem::path> sameas_path;
};

// The Linked Data API: routes the URI templates, negotiates formats,
// forwards keys to upstream, and serves sameAs-only bodies to anonymous
// callers.
class Gateway {
public:
    Gateway(GatewayConfig config, std::shared_ptr<RateGate> gate);
    Gateway(GatewayConfig config, std::shared_ptr<RateGate> gate, SameAsStore store);
    ~Gateway();

    Gateway(const Gateway&) = delete;
    Gateway& operator=(const Gateway&) = delete;

    // Pure request handling; the HTTP listener below delegates here.
    HttpResponse handle(const HttpRequest& request) const;

    void start(const std::string& host = "127.0.0.1", int port = 0);
    void stop();
    int port() const noexcept { return port_; }
    std::string base_url() const;

    const SameAsStore& sameas() const noexcept { return sameas_; }
    const GatewayConfig& config() const noexcept { return config_; }

private:
    HttpResponse serve_entity(NegotiatedFormat format, const std::optional<ApiKey>& key,
                              const std::string& entity_type,
                              const std::string& permalink) const;
    HttpResponse serve_collection(const HttpRequest& request, NegotiatedFormat format,
                                  const std::optional<ApiKey>& key,
                                  const std::string& upstream_path,
                                  const std::optional<std::string>& relation_subject_type,
                                  const std::string& relation) const;
    HttpResponse render_triples(const TripleSet& g, NegotiatedFormat format) const;
    Iri page_iri(const std::string& path, const std::string& query) const;
    std::optional<Iri> rewrite_next_page(const std::optional<std::string>& upstream_url) const;

    GatewayConfig config_;
    SameAsStore sameas_;
    UpstreamClient upstream_;
    std::unique_ptr<httplib::Server> server_;
    std::thread serve_thread_;
    std::string host_ = "127.0.0.1";
    int port_ = 0;
};

}  // namespace cbld
