#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace cbld {

struct UrlParts {
    std::string scheme;
    std::string host;
    std::optional<int> port;
    std::string path;   // leading '/' kept; empty when absent
    std::string query;  // without the '?'
};

// Splits an absolute URL into parts. Returns nothing when there is no
// scheme or no parseable host.
std::optional<UrlParts> try_parse_url(std::string_view url);

// Scheme + authority, e.g. "http://example.org:8080".
std::string origin_of(const UrlParts& parts);

}  // namespace cbld
