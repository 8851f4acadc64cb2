#include "cbld/envelope.hpp"

namespace cbld {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) {
    throw Error(ErrorKind::parse_error, what);
}

std::string require_string(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) bad(std::string("missing string field \"") + key + "\"");
    return it->get<std::string>();
}

std::int64_t require_count(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number_integer()) {
        bad(std::string("missing count field \"") + key + "\"");
    }
    std::int64_t n = it->get<std::int64_t>();
    if (n < 0) bad(std::string("negative count in \"") + key + "\"");
    return n;
}

std::optional<std::string> optional_string(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) bad(std::string("field \"") + key + "\" is not a string");
    return it->get<std::string>();
}

std::vector<ItemStub> parse_items(const json& j) {
    auto it = j.find("items");
    if (it == j.end() || !it->is_array()) bad("missing \"items\" array");
    std::vector<ItemStub> items;
    items.reserve(it->size());
    for (const json& entry : *it) items.push_back(parse_item_stub(entry));
    return items;
}

RelationshipPage parse_relationship(const json& j) {
    if (!j.is_object()) bad("relationship is not an object");
    auto paging = j.find("paging");
    if (paging == j.end() || !paging->is_object()) bad("relationship missing \"paging\"");
    RelationshipPage page;
    page.total_items = require_count(*paging, "total_items");
    page.next_page_url = optional_string(*paging, "next_page_url");
    page.first_page_items = parse_items(j);
    if (static_cast<std::int64_t>(page.first_page_items.size()) > page.total_items) {
        bad("relationship lists more items than total_items");
    }
    bool more = static_cast<std::int64_t>(page.first_page_items.size()) < page.total_items;
    if (more != page.next_page_url.has_value()) {
        bad("relationship next_page_url inconsistent with total_items");
    }
    return page;
}

EntityDetail parse_detail(const json& data) {
    EntityDetail d;
    d.entity_type = require_string(data, "entity_type");
    d.permalink = require_string(data, "permalink");
    d.uuid = optional_string(data, "uuid").value_or("");
    if (d.permalink.empty()) bad("empty permalink");

    auto props = data.find("properties");
    if (props != data.end()) {
        if (!props->is_object()) bad("\"properties\" is not an object");
        for (auto it = props->begin(); it != props->end(); ++it) {
            if (it.value().is_object() || it.value().is_array()) {
                bad("property \"" + it.key() + "\" is not a scalar");
            }
        }
        d.properties = *props;
    }

    auto rels = data.find("relationships");
    if (rels != data.end()) {
        if (!rels->is_object()) bad("\"relationships\" is not an object");
        for (auto it = rels->begin(); it != rels->end(); ++it) {
            d.relationships.emplace(it.key(), parse_relationship(it.value()));
        }
    }
    return d;
}

SummaryPage parse_summary(const json& data) {
    SummaryPage page;
    auto paging = data.find("paging");
    if (paging == data.end() || !paging->is_object()) bad("summary missing \"paging\"");
    page.total_items = require_count(*paging, "total_items");
    auto cur = paging->find("current_page");
    page.current_page = (cur != paging->end() && cur->is_number_integer()) ? cur->get<std::int64_t>() : 1;
    page.next_page_url = optional_string(*paging, "next_page_url");
    page.items = parse_items(data);
    return page;
}

}  // namespace

nlohmann::json item_stub_to_json(const ItemStub& stub) {
    return {{"entity_type", stub.entity_type},
            {"permalink", stub.permalink},
            {"api_path", stub.api_path}};
}

ItemStub parse_item_stub(const nlohmann::json& j) {
    if (!j.is_object()) bad("item stub is not an object");
    ItemStub stub;
    stub.entity_type = require_string(j, "entity_type");
    stub.permalink = require_string(j, "permalink");
    stub.api_path = require_string(j, "api_path");
    if (stub.api_path != stub.entity_type + "/" + stub.permalink) {
        bad("item api_path \"" + stub.api_path + "\" does not match entity_type/permalink");
    }
    return stub;
}

UpstreamEnvelope parse_envelope(const std::string& body) {
    json doc = json::parse(body, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) bad("body is not a JSON object");

    UpstreamEnvelope env;
    auto meta = doc.find("metadata");
    if (meta != doc.end()) {
        if (!meta->is_object()) bad("\"metadata\" is not an object");
        env.metadata = *meta;
    }

    auto data = doc.find("data");
    if (data == doc.end() || data->is_null()) return env;
    if (!data->is_object()) bad("\"data\" is not an object");

    if (data->contains("properties") || data->contains("entity_type")) {
        env.data = parse_detail(*data);
    } else if (data->contains("items")) {
        env.data = parse_summary(*data);
    } else {
        bad("unrecognized payload shape");
    }
    return env;
}

}  // namespace cbld
