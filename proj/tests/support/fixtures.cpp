#include "support/fixtures.hpp"

#include <charconv>
#include <map>
#include <stdexcept>

namespace testfix {

namespace {

using nlohmann::json;

cbld::FixtureEntity entity(std::string type, std::string permalink, json properties,
                           std::vector<std::pair<std::string, std::vector<std::string>>> rels = {}) {
    cbld::FixtureEntity e;
    e.entity_type = std::move(type);
    e.permalink = std::move(permalink);
    e.uuid = "uuid-" + e.entity_type + "-" + e.permalink;
    e.properties = std::move(properties);
    e.relationships = std::move(rels);
    return e;
}

}  // namespace

cbld::FixtureCorpus small_corpus() {
    cbld::FixtureCorpus corpus;

    std::vector<std::string> funding_round_paths;
    for (int i = 0; i < 10; ++i) {
        std::string permalink = "fr-" + std::to_string(i);
        funding_round_paths.push_back("funding_rounds/" + permalink);
        corpus.add(entity("funding_rounds", permalink,
                          json{{"funding_type", "venture"},
                               {"money_raised_usd", 1000000 + i},
                               {"announced_on", "2014-0" + std::to_string(1 + i % 9) + "-15"},
                               {"announced_on_trust_code", 7}}));
    }
    for (int i = 0; i < 5; ++i) {
        std::string permalink = "acq-" + std::to_string(i);
        corpus.add(entity("acquisitions", permalink,
                          json{{"price_usd", 50000000.5},
                               {"announced_on", "2013-06-0" + std::to_string(i + 1)},
                               {"announced_on_trust_code", 4}}));
    }

    corpus.add(entity(
        "organizations", "facebook",
        json{{"name", "Facebook"},
             {"description", "Say \"hi\"\nto the blue app."},
             {"role_investor", true},
             {"founded_on", "2004-02-04"},
             {"founded_on_trust_code", 7},
             {"homepage_url", "https://www.facebook.com/"},
             {"num_employees_min", 35000},
             {"total_funding_usd", 2335700000.25},
             {"stock_symbol", nullptr},
             {"short_description", ""}},
        {{"acquisitions", {"acquisitions/acq-0", "acquisitions/acq-1", "acquisitions/acq-2"}},
         {"funding_rounds",
          {"funding_rounds/fr-0", "funding_rounds/fr-1", "funding_rounds/fr-2",
           "funding_rounds/fr-3", "funding_rounds/fr-4", "funding_rounds/fr-5",
           "funding_rounds/fr-6", "funding_rounds/fr-7", "funding_rounds/fr-8",
           "funding_rounds/fr-9"}}}));
    corpus.add(entity("organizations", "blue-harbor",
                      json{{"name", "Blue Harbor"},
                           {"founded_on", "2010-07"},
                           {"founded_on_trust_code", 5},
                           {"homepage_url", "http://blue-harbor.example"},
                           {"role_investor", false}},
                      {{"acquisitions", {"acquisitions/acq-3"}}}));
    corpus.add(entity("organizations", "verdant", json{{"name", "Verdant 東京"}}));

    corpus.add(entity("people", "brian-ray",
                      json{{"name", "Brian Ray"},
                           {"first_name", "Brian"},
                           {"last_name", "Ray"},
                           {"born_on", "1970-01-02"},
                           {"born_on_trust_code", 7},
                           {"role_investor", true}}));
    corpus.add(entity("people", "ada",
                      json{{"name", "Ada Müller"},
                           {"born_on", "1985-03-11"},
                           {"born_on_trust_code", 3},
                           {"gender", "Female"}}));
    return corpus;
}

cbld::FixtureCorpus generated_corpus(std::size_t entity_count) {
    cbld::FixtureCorpus corpus;
    std::size_t added = 0;

    auto want = [&] { return added < entity_count; };

    for (int i = 0; i < 5 && want(); ++i, ++added) {
        json props = json::object();
        if (i != 4) props["name"] = "Category " + std::to_string(i);
        corpus.add(entity("categories", "cat-" + std::to_string(i), props));
    }
    for (int i = 0; i < 10 && want(); ++i, ++added) {
        corpus.add(entity("funding_rounds", "round-" + std::to_string(i),
                          json{{"funding_type", i % 2 ? "seed" : "venture"},
                               {"money_raised_usd", 250000.5 + i},
                               {"announced_on", "2016-11-2" + std::to_string(i % 10)},
                               {"announced_on_trust_code", i % 8}}));
    }
    for (int i = 0; i < 15 && want(); ++i, ++added) {
        json props{{"name", i % 5 == 0 ? "José García " + std::to_string(i)
                                       : "Person " + std::to_string(i)},
                   {"first_name", "First" + std::to_string(i)},
                   {"last_name", "Last" + std::to_string(i)},
                   {"born_on", "197" + std::to_string(i % 10) + "-05-2" + std::to_string(i % 10)},
                   {"born_on_trust_code", i % 8},
                   {"role_investor", i % 3 == 0},
                   {"bio", ""},
                   {"email", nullptr}};
        std::vector<std::pair<std::string, std::vector<std::string>>> rels;
        if (i % 4 == 0) {
            rels.push_back({"organizations", {"organizations/org-" + std::to_string(i % 5)}});
        }
        corpus.add(entity("people", "person-" + std::to_string(i), std::move(props), std::move(rels)));
    }
    for (int i = 0; added < entity_count; ++i, ++added) {
        json props{{"name", i % 4 == 0 ? "Büro " + std::to_string(i) : "Org " + std::to_string(i)},
                   {"description", "Line one\tand \"two\"\nof org " + std::to_string(i)},
                   {"founded_on", "200" + std::to_string(i % 10) + "-08-19"},
                   {"founded_on_trust_code", i % 8},
                   {"role_investor", i % 2 == 0},
                   {"num_employees_min", 10 * (i + 1)},
                   {"total_funding_usd", 1000.25 * (i + 1)},
                   {"homepage_url", "https://www.org-" + std::to_string(i) + ".example/"}};
        std::vector<std::pair<std::string, std::vector<std::string>>> rels;
        std::vector<std::string> cats;
        for (int c = 0; c <= i % 3; ++c) cats.push_back("categories/cat-" + std::to_string(c));
        rels.push_back({"categories", std::move(cats)});
        if (i == 0) {
            std::vector<std::string> rounds;
            for (int r = 0; r < 10; ++r) rounds.push_back("funding_rounds/round-" + std::to_string(r));
            rels.push_back({"funding_rounds", std::move(rounds)});
        }
        corpus.add(entity("organizations", "org-" + std::to_string(i), std::move(props),
                          std::move(rels)));
    }
    return corpus;
}

std::vector<cbld::SeedRow> seeds_for(const cbld::FixtureCorpus& corpus) {
    std::vector<cbld::SeedRow> seeds;
    for (const cbld::FixtureEntity& e : corpus.all()) {
        seeds.push_back({e.entity_type, e.permalink});
    }
    return seeds;
}

namespace {

// Independent re-statements of the conversion rules, for the oracle.
const std::map<std::string, std::string>& class_locals() {
    static const std::map<std::string, std::string> table = {
        {"acquisitions", "Acquisition"}, {"addresses", "Address"},
        {"categories", "Category"},      {"degrees", "Degree"},
        {"funding_rounds", "FundingRound"}, {"funds", "Fund"},
        {"images", "Image"},             {"investments", "Investment"},
        {"ipos", "Ipo"},                 {"jobs", "Job"},
        {"locations", "Location"},       {"news", "News"},
        {"organizations", "Organization"}, {"people", "Person"},
        {"videos", "Video"},             {"websites", "Website"},
    };
    return table;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

constexpr const char* kXsd = "http://www.w3.org/2001/XMLSchema#";
constexpr const char* kCbw = "http://ontologycentral.com/2010/05/cb/vocab#";

std::string typed(const std::string& lexical, const std::string& xsd_local) {
    return "\"" + escape(lexical) + "\"^^<" + kXsd + xsd_local + ">";
}

std::string fixed_decimal(double v) {
    char buf[512];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
    if (ec != std::errc()) throw std::runtime_error("decimal format");
    return std::string(buf, end);
}

// The trust-code ladder, restated: 7 full date, 5-6 year-month, 1-4 year,
// 0 plain; out-of-range codes or too-short lexicals produce nothing.
std::string trust_literal(const std::string& lexical, int code) {
    if (code < 0 || code > 7) return "";
    if (code == 0) return "\"" + escape(lexical) + "\"";
    std::size_t want = code == 7 ? 10 : code >= 5 ? 7 : 4;
    if (lexical.size() < want) return "";
    for (std::size_t i = 0; i < want; ++i) {
        bool dash = i == 4 || i == 7;
        if (dash ? lexical[i] != '-' : !isdigit(static_cast<unsigned char>(lexical[i]))) return "";
    }
    std::string cut = lexical.substr(0, want);
    return typed(cut, code == 7 ? "date" : code >= 5 ? "gYearMonth" : "gYear");
}

}  // namespace

std::set<std::string> flatten_expected_lines(const cbld::FixtureCorpus& corpus,
                                             const std::string& base) {
    std::set<std::string> lines;
    auto iri = [&](const std::string& api_path) { return base + "/api/" + api_path; };

    for (const cbld::FixtureEntity& e : corpus.all()) {
        std::string subject = "<" + iri(e.api_path()) + ">";
        lines.insert(subject + " <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <" +
                     kCbw + class_locals().at(e.entity_type) + "> .");

        for (auto it = e.properties.begin(); it != e.properties.end(); ++it) {
            const std::string& key = it.key();
            const json& value = it.value();
            if (key.size() > 11 && key.substr(key.size() - 11) == "_trust_code") continue;
            if (value.is_null()) continue;

            std::string object;
            auto trust = e.properties.find(key + "_trust_code");
            if (trust != e.properties.end() && !trust->is_null()) {
                if (!value.is_string()) continue;
                object = trust_literal(value.get<std::string>(), trust->get<int>());
                if (object.empty()) continue;
            } else if (value.is_boolean()) {
                object = typed(value.get<bool>() ? "true" : "false", "boolean");
            } else if (value.is_number_integer() || value.is_number_unsigned()) {
                object = typed(value.dump(), "integer");
            } else if (value.is_number_float()) {
                object = typed(fixed_decimal(value.get<double>()), "decimal");
            } else if (value.is_string()) {
                if (value.get<std::string>().empty()) continue;
                object = "\"" + escape(value.get<std::string>()) + "\"";
            } else {
                continue;
            }
            lines.insert(subject + " <" + kCbw + key + "> " + object + " .");
        }

        for (const auto& [relation, paths] : e.relationships) {
            for (const std::string& path : paths) {
                lines.insert(subject + " <" + kCbw + relation + "> <" + iri(path) + "> .");
            }
        }
    }
    return lines;
}

std::size_t predicted_requests(const cbld::FixtureCorpus& corpus, std::size_t page_size) {
    std::map<std::string, std::size_t> per_type;
    for (const cbld::FixtureEntity& e : corpus.all()) ++per_type[e.entity_type];

    std::size_t requests = 0;
    for (const auto& [type, count] : per_type) {
        requests += (count + page_size - 1) / page_size;  // index pages
        requests += count;                                // details
    }
    for (const cbld::FixtureEntity& e : corpus.all()) {
        for (const auto& [relation, paths] : e.relationships) {
            std::size_t pages = (paths.size() + page_size - 1) / page_size;
            if (pages > 1) requests += pages - 1;  // expansion pages
        }
    }
    return requests;
}

}  // namespace testfix
