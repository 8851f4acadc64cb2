#include "cbld/url.hpp"

#include <cctype>

namespace cbld {

std::optional<UrlParts> try_parse_url(std::string_view url) {
    auto sep = url.find("://");
    if (sep == std::string_view::npos || sep == 0) return std::nullopt;

    UrlParts parts;
    parts.scheme = std::string(url.substr(0, sep));
    for (char c : parts.scheme) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') {
            return std::nullopt;
        }
    }

    std::string_view rest = url.substr(sep + 3);
    auto path_start = rest.find_first_of("/?#");
    std::string_view authority = rest.substr(0, path_start);

    if (path_start != std::string_view::npos) {
        std::string_view tail = rest.substr(path_start);
        auto frag = tail.find('#');
        if (frag != std::string_view::npos) tail = tail.substr(0, frag);
        auto q = tail.find('?');
        if (q != std::string_view::npos) {
            parts.query = std::string(tail.substr(q + 1));
            tail = tail.substr(0, q);
        }
        parts.path = std::string(tail);
    }

    // Drop any userinfo.
    auto at = authority.rfind('@');
    if (at != std::string_view::npos) authority = authority.substr(at + 1);

    auto colon = authority.rfind(':');
    if (colon != std::string_view::npos) {
        std::string_view port_str = authority.substr(colon + 1);
        if (port_str.empty()) return std::nullopt;
        int port = 0;
        for (char c : port_str) {
            if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
            port = port * 10 + (c - '0');
            if (port > 65535) return std::nullopt;
        }
        parts.port = port;
        authority = authority.substr(0, colon);
    }

    if (authority.empty()) return std::nullopt;
    for (char c : authority) {
        unsigned char u = static_cast<unsigned char>(c);
        if (u <= 0x20 || c == '/' || c == '@' || c == '[' || c == ']') return std::nullopt;
    }
    parts.host = std::string(authority);
    return parts;
}

std::string origin_of(const UrlParts& parts) {
    std::string origin = parts.scheme + "://" + parts.host;
    if (parts.port) origin += ":" + std::to_string(*parts.port);
    return origin;
}

}  // namespace cbld
