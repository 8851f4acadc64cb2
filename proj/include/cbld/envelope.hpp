#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "cbld/error.hpp"

namespace cbld {

// Reference to another entity inside a paged list.
struct ItemStub {
    std::string entity_type;
    std::string permalink;
    std::string api_path;  // always "{entity_type}/{permalink}"

    bool operator==(const ItemStub&) const = default;
};

// The paged view of one relationship as it appears inside an entity detail.
struct RelationshipPage {
    std::int64_t total_items = 0;
    std::vector<ItemStub> first_page_items;
    std::optional<std::string> next_page_url;

    bool operator==(const RelationshipPage&) const = default;
};

struct EntityDetail {
    std::string entity_type;
    std::string permalink;
    std::string uuid;
    nlohmann::json properties = nlohmann::json::object();
    std::map<std::string, RelationshipPage> relationships;

    bool operator==(const EntityDetail&) const = default;
};

// One page of a paged collection (entity-type index or relation page).
struct SummaryPage {
    std::int64_t total_items = 0;
    std::int64_t current_page = 1;
    std::vector<ItemStub> items;
    std::optional<std::string> next_page_url;

    bool operator==(const SummaryPage&) const = default;
};

struct UpstreamEnvelope {
    nlohmann::json metadata = nlohmann::json::object();
    std::variant<std::monostate, EntityDetail, SummaryPage> data;

    bool has_detail() const { return std::holds_alternative<EntityDetail>(data); }
    bool has_summary() const { return std::holds_alternative<SummaryPage>(data); }
    const EntityDetail& detail() const { return std::get<EntityDetail>(data); }
    const SummaryPage& summary() const { return std::get<SummaryPage>(data); }
};

// Parses an upstream JSON body. A detail payload carries "properties", a
// summary payload "items"; anything else is a parse error. Property values
// must be scalars or null.
UpstreamEnvelope parse_envelope(const std::string& body);

nlohmann::json item_stub_to_json(const ItemStub& stub);
ItemStub parse_item_stub(const nlohmann::json& j);

}  // namespace cbld
