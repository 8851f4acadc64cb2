#include "cbld/gateway.hpp"

#include <httplib.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>
#include <vector>

#include "cbld/transform.hpp"
#include "cbld/url.hpp"
#include "cbld/vocab.hpp"

namespace cbld {

namespace {

constexpr std::string_view kChallenge = "Basic realm=\"linked-data-api\"";

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return "";
    auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

struct AcceptRange {
    std::string type;
    std::string subtype;
    double q = 1.0;
};

std::vector<AcceptRange> parse_accept(const std::string& header) {
    std::vector<AcceptRange> ranges;
    std::stringstream ss(header);
    std::string part;
    while (std::getline(ss, part, ',')) {
        std::stringstream ps(part);
        std::string token;
        AcceptRange range;
        bool first = true;
        while (std::getline(ps, token, ';')) {
            token = trim(token);
            if (first) {
                auto slash = token.find('/');
                if (slash == std::string::npos) {
                    range.type.clear();  // unparseable range, ignore below
                } else {
                    range.type = to_lower(token.substr(0, slash));
                    range.subtype = to_lower(token.substr(slash + 1));
                }
                first = false;
                continue;
            }
            if (token.rfind("q=", 0) == 0) {
                try {
                    range.q = std::stod(token.substr(2));
                } catch (...) {
                    range.q = 0.0;
                }
            }
        }
        if (!range.type.empty() && !range.subtype.empty()) ranges.push_back(range);
    }
    return ranges;
}

// Match quality: 3 exact, 2 type wildcard, 1 full wildcard, 0 none.
int specificity(const AcceptRange& range, std::string_view type, std::string_view subtype) {
    if (range.type == type && range.subtype == subtype) return 3;
    if (range.type == type && range.subtype == "*") return 2;
    if (range.type == "*" && range.subtype == "*") return 1;
    return 0;
}

std::optional<std::string> base64_decode(std::string_view in) {
    auto value_of = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        return -1;
    };
    std::string out;
    int buffer = 0;
    int bits = 0;
    std::size_t pad = 0;
    for (char c : in) {
        if (c == '=') {
            ++pad;
            continue;
        }
        if (pad > 0) return std::nullopt;  // data after padding
        int v = value_of(c);
        if (v < 0) return std::nullopt;
        buffer = (buffer << 6) | v;
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<char>((buffer >> bits) & 0xFF));
        }
    }
    if (pad > 2 || (in.size() % 4) != 0) return std::nullopt;
    return out;
}

HttpResponse text_response(int status, std::string body) {
    HttpResponse res;
    res.status = status;
    res.content_type = "text/plain";
    res.body = std::move(body);
    return res;
}

HttpResponse unauthorized(const std::string& message) {
    HttpResponse res = text_response(401, message + "\n");
    res.headers["WWW-Authenticate"] = std::string(kChallenge);
    return res;
}

const std::string kIndexPage =
    "Linked Data API\n"
    "\n"
    "Routes:\n"
    "  /                                           this page\n"
    "  /ontology.owl                               the vocabulary\n"
    "  /api/{entity-type}                          all instances of the entity type\n"
    "  /api/{entity-type}/{permalink}              one entity\n"
    "  /api/{entity-type}/{permalink}/{relation}   one relation of an entity\n"
    "\n"
    "Representations (Accept header): application/json, application/ld+json,\n"
    "text/turtle (N-Triples; the default).\n"
    "\n"
    "Pass your upstream API key with `Authorization: Basic {base64(key + \":\")}`.\n"
    "Without a key, responses carry only owl:sameAs links.\n";

}  // namespace

std::string_view media_type(NegotiatedFormat format) {
    switch (format) {
        case NegotiatedFormat::json: return "application/json";
        case NegotiatedFormat::jsonld: return "application/ld+json";
        case NegotiatedFormat::turtle: return "text/turtle";
    }
    return "";
}

NegotiatedFormat negotiate(const std::string& accept_header) {
    if (trim(accept_header).empty()) return NegotiatedFormat::turtle;

    auto ranges = parse_accept(accept_header);
    if (ranges.empty()) return NegotiatedFormat::turtle;

    // Tie-break order: earlier wins at equal q.
    constexpr std::array<NegotiatedFormat, 3> preference = {
        NegotiatedFormat::turtle, NegotiatedFormat::jsonld, NegotiatedFormat::json};

    NegotiatedFormat best{};
    double best_q = -1.0;
    for (NegotiatedFormat fmt : preference) {
        std::string_view media = media_type(fmt);
        auto slash = media.find('/');
        std::string_view type = media.substr(0, slash);
        std::string_view subtype = media.substr(slash + 1);

        int best_spec = 0;
        double q = 0.0;
        for (const AcceptRange& range : ranges) {
            int spec = specificity(range, type, subtype);
            if (spec > best_spec) {
                best_spec = spec;
                q = range.q;
            }
        }
        if (best_spec > 0 && q > best_q) {
            best_q = q;
            best = fmt;
        }
    }
    if (best_q <= 0.0) {
        throw Error(ErrorKind::not_acceptable, "no supported media type in \"" + accept_header + "\"");
    }
    return best;
}

std::optional<ApiKey> decode_auth_header(const std::optional<std::string>& header) {
    if (!header || trim(*header).empty()) return std::nullopt;

    std::string value = trim(*header);
    auto space = value.find(' ');
    std::string scheme = to_lower(value.substr(0, space));
    if (scheme != "basic") {
        throw Error(ErrorKind::unsupported_scheme, "unsupported authorization scheme");
    }
    if (space == std::string::npos) {
        throw Error(ErrorKind::malformed_credentials, "missing credentials");
    }
    auto decoded = base64_decode(trim(value.substr(space + 1)));
    if (!decoded) {
        throw Error(ErrorKind::malformed_credentials, "credentials are not valid base64");
    }
    auto colon = decoded->find(':');
    if (colon == std::string::npos) {
        throw Error(ErrorKind::malformed_credentials, "credentials lack the user:password form");
    }
    if (colon + 1 != decoded->size()) {
        throw Error(ErrorKind::malformed_credentials, "password field must be empty");
    }
    std::string key = decoded->substr(0, colon);
    if (key.empty()) {
        throw Error(ErrorKind::malformed_credentials, "empty key");
    }
    return ApiKey(std::move(key));
}

TripleSet keyless_response(const Iri& entity_iri, const SameAsStore& store) {
    TripleSet g;
    for (const Iri& external : store.find(entity_iri)) {
        g.insert({entity_iri, wk::owl_same_as(), external});
    }
    return g;
}

Gateway::Gateway(GatewayConfig config, std::shared_ptr<RateGate> gate)
    : Gateway(std::move(config), std::move(gate), SameAsStore{}) {
    if (config_.sameas_path) {
        sameas_ = SameAsStore::from_file(*config_.sameas_path);
    }
}

Gateway::Gateway(GatewayConfig config, std::shared_ptr<RateGate> gate, SameAsStore store)
    : config_(std::move(config)),
      sameas_(std::move(store)),
      upstream_(config_.upstream_base, std::move(gate)) {
    server_ = std::make_unique<httplib::Server>();

    auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
        HttpRequest request;
        request.method = req.method;
        request.path = req.path;
        if (req.has_param("page")) request.query = "page=" + req.get_param_value("page");
        request.accept = req.get_header_value("Accept");
        if (req.has_header("Authorization")) {
            request.authorization = req.get_header_value("Authorization");
        }
        HttpResponse out = handle(request);
        res.status = out.status;
        for (const auto& [k, v] : out.headers) res.set_header(k, v);
        res.set_content(out.body, out.content_type);
    };
    server_->Get(".*", dispatch);
    server_->Post(".*", dispatch);
    server_->Put(".*", dispatch);
    server_->Delete(".*", dispatch);
    server_->Patch(".*", dispatch);
}

Gateway::~Gateway() { stop(); }

void Gateway::start(const std::string& host, int port) {
    host_ = host;
    if (port == 0) {
        port_ = server_->bind_to_any_port(host);
        if (port_ <= 0) throw Error(ErrorKind::io_error, "cannot bind gateway");
    } else {
        if (!server_->bind_to_port(host, port)) {
            throw Error(ErrorKind::io_error, "cannot bind gateway to port " + std::to_string(port));
        }
        port_ = port;
    }
    serve_thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
}

void Gateway::stop() {
    if (server_ && server_->is_running()) server_->stop();
    if (serve_thread_.joinable()) serve_thread_.join();
}

std::string Gateway::base_url() const {
    return "http://" + host_ + ":" + std::to_string(port_);
}

HttpResponse Gateway::render_triples(const TripleSet& g, NegotiatedFormat format) const {
    HttpResponse res;
    res.content_type = std::string(media_type(format));
    if (format == NegotiatedFormat::turtle) {
        res.body = serialize_ntriples(g);
    } else {
        res.body = triples_to_jsonld(g).dump(2) + "\n";
    }
    return res;
}

Iri Gateway::page_iri(const std::string& path, const std::string& query) const {
    std::string base = config_.base_iri.value();
    while (!base.empty() && base.back() == '/') base.pop_back();
    std::string value = base + path;
    if (!query.empty()) value += "?" + query;
    return Iri(std::move(value));
}

std::optional<Iri> Gateway::rewrite_next_page(
    const std::optional<std::string>& upstream_url) const {
    if (!upstream_url) return std::nullopt;
    std::string rel = upstream_.relativize(*upstream_url);
    std::string base = config_.base_iri.value();
    while (!base.empty() && base.back() == '/') base.pop_back();
    return Iri(base + "/api/" + rel);
}

HttpResponse Gateway::handle(const HttpRequest& request) const {
    if (request.method != "GET") {
        HttpResponse res = text_response(405, "method not allowed\n");
        res.headers["Allow"] = "GET";
        return res;
    }

    if (request.path == "/" || request.path == "/api" || request.path == "/api/") {
        return text_response(200, kIndexPage);
    }

    NegotiatedFormat format;
    try {
        format = negotiate(request.accept);
    } catch (const Error&) {
        return text_response(406, "not acceptable\n");
    }

    if (request.path == "/ontology.owl") {
        return render_triples(emit_ontology(), format);
    }

    std::optional<ApiKey> key;
    try {
        key = decode_auth_header(request.authorization);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::unsupported_scheme) return unauthorized(e.message());
        return text_response(400, e.message() + "\n");
    }

    // Split "/api/{type}[/{permalink}[/{relation}]]".
    if (request.path.rfind("/api/", 0) != 0) {
        return text_response(404, "no such route\n");
    }
    std::vector<std::string> segments;
    std::string segment;
    for (char c : request.path.substr(5)) {
        if (c == '/') {
            segments.push_back(segment);
            segment.clear();
        } else {
            segment.push_back(c);
        }
    }
    segments.push_back(segment);
    if (segments.empty() || segments.size() > 3 ||
        std::any_of(segments.begin(), segments.end(),
                    [](const std::string& s) { return s.empty(); })) {
        return text_response(404, "no such route\n");
    }

    const std::string& entity_type = segments[0];
    if (!is_entity_type(entity_type)) {
        return text_response(404, "unknown entity type\n");
    }

    if (segments.size() == 1) {
        return serve_collection(request, format, key, entity_type, std::nullopt, "");
    }

    const std::string& permalink = segments[1];
    if (!is_valid_permalink(permalink)) {
        return text_response(404, "no such route\n");
    }

    if (segments.size() == 2) {
        return serve_entity(format, key, entity_type, permalink);
    }

    const std::string& relation = segments[2];
    try {
        property_iri(relation);
    } catch (const Error&) {
        return text_response(404, "no such route\n");
    }
    std::string upstream_path = entity_type + "/" + permalink + "/" + relation;
    return serve_collection(request, format, key, upstream_path, entity_type, relation);
}

HttpResponse Gateway::serve_entity(NegotiatedFormat format, const std::optional<ApiKey>& key,
                                   const std::string& entity_type,
                                   const std::string& permalink) const {
    Iri subject = mint_entity_iri(config_.base_iri, entity_type, permalink);

    if (!key) {
        return render_triples(keyless_response(subject, sameas_), format);
    }

    FetchResult result;
    try {
        result = upstream_.fetch(entity_type + "/" + permalink, *key);
    } catch (const Error& e) {
        switch (e.kind()) {
            case ErrorKind::invalid_key: return unauthorized(e.message());
            case ErrorKind::unknown_entity: return text_response(404, e.message() + "\n");
            case ErrorKind::rate_exceeded: return text_response(503, e.message() + "\n");
            default: return text_response(502, e.message() + "\n");
        }
    }

    if (format == NegotiatedFormat::json) {
        HttpResponse res;
        res.content_type = "application/json";
        res.body = result.body;  // upstream bytes, unmodified
        return res;
    }

    EntityDetail detail;
    try {
        detail = strip_metadata(result.envelope);
    } catch (const Error& e) {
        return text_response(502, e.message() + "\n");
    }

    if (format == NegotiatedFormat::turtle) {
        return render_triples(entity_to_triples(detail, sameas_, config_.base_iri), format);
    }
    HttpResponse res;
    res.content_type = std::string(media_type(NegotiatedFormat::jsonld));
    res.body = to_jsonld(detail, config_.base_iri, sameas_.find(subject)).dump(2) + "\n";
    return res;
}

HttpResponse Gateway::serve_collection(const HttpRequest& request, NegotiatedFormat format,
                                       const std::optional<ApiKey>& key,
                                       const std::string& upstream_path,
                                       const std::optional<std::string>& relation_subject_type,
                                       const std::string& relation) const {
    Iri page = page_iri(request.path, request.query);

    if (!key) {
        return render_triples(keyless_response(page, sameas_), format);
    }

    std::string path = upstream_path;
    if (!request.query.empty()) path += "?" + request.query;

    FetchResult result;
    try {
        result = upstream_.fetch(path, *key);
    } catch (const Error& e) {
        switch (e.kind()) {
            case ErrorKind::invalid_key: return unauthorized(e.message());
            case ErrorKind::unknown_entity: return text_response(404, e.message() + "\n");
            case ErrorKind::rate_exceeded: return text_response(503, e.message() + "\n");
            default: return text_response(502, e.message() + "\n");
        }
    }

    if (format == NegotiatedFormat::json) {
        HttpResponse res;
        res.content_type = "application/json";
        res.body = result.body;
        return res;
    }

    if (!result.envelope.has_summary()) {
        return text_response(502, "upstream payload is not a collection page\n");
    }
    const SummaryPage& summary = result.envelope.summary();

    std::optional<Iri> next;
    try {
        next = rewrite_next_page(summary.next_page_url);
    } catch (const Error& e) {
        return text_response(502, e.message() + "\n");
    }

    TripleSet g;
    if (relation_subject_type) {
        // `upstream_path` is "{type}/{permalink}/{relation}".
        auto first = upstream_path.find('/');
        auto second = upstream_path.find('/', first + 1);
        std::string permalink = upstream_path.substr(first + 1, second - first - 1);
        Iri subject = mint_entity_iri(config_.base_iri, *relation_subject_type, permalink);
        g = relation_page_to_triples(summary, subject, relation, page, config_.base_iri, next);
    } else {
        g = summary_page_to_triples(summary, page, config_.base_iri, next);
    }
    return render_triples(g, format);
}

}  // namespace cbld
