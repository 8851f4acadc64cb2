#include "cbld/transform.hpp"

#include <charconv>

#include "cbld/vocab.hpp"

namespace cbld {

namespace {

using nlohmann::json;

constexpr std::string_view kTrustSuffix = "_trust_code";

bool is_trust_companion_key(std::string_view key) {
    return key.size() > kTrustSuffix.size() &&
           key.substr(key.size() - kTrustSuffix.size()) == kTrustSuffix;
}

bool valid_date_prefix(std::string_view s) {
    auto digits = [](std::string_view part) {
        for (char c : part) {
            if (c < '0' || c > '9') return false;
        }
        return !part.empty();
    };
    if (s.size() == 4) return digits(s);
    if (s.size() == 7) return s[4] == '-' && digits(s.substr(0, 4)) && digits(s.substr(5, 2));
    if (s.size() == 10) {
        return s[4] == '-' && s[7] == '-' && digits(s.substr(0, 4)) && digits(s.substr(5, 2)) &&
               digits(s.substr(8, 2));
    }
    return false;
}

// Converts one scalar property value to a literal, or nothing when the
// value carries no information (null, empty string, companion key).
std::optional<Literal> scalar_literal(const std::string& key, const json& value,
                                      const json& all_properties, TransformLog* log) {
    if (is_trust_companion_key(key)) return std::nullopt;
    if (value.is_null()) return std::nullopt;

    auto companion = all_properties.find(key + std::string(kTrustSuffix));
    if (companion != all_properties.end() && !companion->is_null()) {
        if (!companion->is_number_integer() || !value.is_string()) {
            if (log) log->skip("property \"" + key + "\": unusable trust-coded value");
            return std::nullopt;
        }
        try {
            return trust_date_to_literal(
                {value.get<std::string>(), companion->get<int>()});
        } catch (const Error& e) {
            if (log) log->skip("property \"" + key + "\": " + e.what());
            return std::nullopt;
        }
    }

    if (value.is_boolean()) {
        return Literal::typed(value.get<bool>() ? "true" : "false", wk::xsd_boolean());
    }
    if (value.is_number_integer() || value.is_number_unsigned()) {
        return Literal::typed(value.dump(), wk::xsd_integer());
    }
    if (value.is_number_float()) {
        return Literal::typed(decimal_lexical(value.get<double>()), wk::xsd_decimal());
    }
    if (value.is_string()) {
        std::string s = value.get<std::string>();
        if (s.empty()) return std::nullopt;
        return Literal::plain(std::move(s));
    }
    if (log) log->skip("property \"" + key + "\": unsupported value type");
    return std::nullopt;
}

}  // namespace

EntityDetail strip_metadata(const UpstreamEnvelope& env) {
    if (!env.has_detail()) {
        throw Error(ErrorKind::wrong_payload, "envelope does not carry an entity detail");
    }
    return env.detail();
}

Literal trust_date_to_literal(const TrustCodedDate& d) {
    if (d.trust_code < 0 || d.trust_code > 7) {
        throw Error(ErrorKind::invalid_trust,
                    "trust code " + std::to_string(d.trust_code) + " outside 0..7");
    }
    if (d.trust_code == 0) return Literal::plain(d.lexical);

    if (!valid_date_prefix(d.lexical)) {
        throw Error(ErrorKind::invalid_date, "\"" + d.lexical + "\" is not a date prefix");
    }
    std::size_t want = d.trust_code == 7 ? 10 : (d.trust_code >= 5 ? 7 : 4);
    if (d.lexical.size() < want) {
        throw Error(ErrorKind::invalid_date, "\"" + d.lexical + "\" is too coarse for trust code " +
                                                 std::to_string(d.trust_code));
    }
    std::string truncated = d.lexical.substr(0, want);
    const Iri& datatype = d.trust_code == 7 ? wk::xsd_date()
                          : d.trust_code >= 5 ? wk::xsd_g_year_month()
                                              : wk::xsd_g_year();
    try {
        return Literal::typed(std::move(truncated), datatype);
    } catch (const Error&) {
        // Shape was right but the value is no date (month 13, day 40, ...).
        throw Error(ErrorKind::invalid_date, "\"" + d.lexical + "\" is not a valid date");
    }
}

TripleSet entity_to_triples(const EntityDetail& d, const SameAsStore& sameas, const Iri& base,
                            TransformLog* log) {
    Iri subject = mint_entity_iri(base, d.entity_type, d.permalink);
    TripleSet g;
    g.insert({subject, wk::rdf_type(), class_iri(d.entity_type)});

    for (auto it = d.properties.begin(); it != d.properties.end(); ++it) {
        std::optional<Literal> lit = scalar_literal(it.key(), it.value(), d.properties, log);
        if (!lit) continue;
        try {
            g.insert({subject, property_iri(it.key()), std::move(*lit)});
        } catch (const Error& e) {
            if (log) log->skip(std::string("property \"") + it.key() + "\": " + e.what());
        }
    }

    for (const auto& [relation, page] : d.relationships) {
        std::optional<Iri> predicate;
        try {
            predicate = property_iri(relation);
        } catch (const Error& e) {
            if (log) log->skip("relation \"" + relation + "\": " + e.what());
            continue;
        }
        for (const ItemStub& item : page.first_page_items) {
            try {
                g.insert({subject, *predicate,
                          mint_entity_iri(base, item.entity_type, item.permalink)});
            } catch (const Error& e) {
                if (log) log->skip("relation \"" + relation + "\" item: " + e.what());
            }
        }
    }

    for (const Iri& ext : sameas.find(subject)) {
        g.insert({subject, wk::owl_same_as(), ext});
    }
    return g;
}

namespace {

json jsonld_value_for(const Literal& lit) {
    if (!lit.datatype()) return lit.lexical();
    const std::string& dt = lit.datatype()->value();
    if (dt == wk::xsd_boolean().value()) return lit.lexical() == "true" || lit.lexical() == "1";
    if (dt == wk::xsd_integer().value()) {
        return json::parse(lit.lexical());  // plain digits, parses as a JSON integer
    }
    // Decimals and dates stay strings so expansion preserves the lexical.
    return lit.lexical();
}

json jsonld_term_definition(const std::string& key, const Literal& lit) {
    if (!lit.datatype()) return "cbw:" + key;
    const std::string& dt = lit.datatype()->value();
    std::string compact = "xsd:" + dt.substr(std::string(wk::xsd_ns).size());
    return json{{"@id", "cbw:" + key}, {"@type", compact}};
}

}  // namespace

json to_jsonld(const EntityDetail& d, const Iri& base, const std::vector<Iri>& same_as,
               TransformLog* log) {
    Iri subject = mint_entity_iri(base, d.entity_type, d.permalink);

    json context = json::object();
    context["cbw"] = std::string(wk::cbw_ns);
    context["xsd"] = std::string(wk::xsd_ns);

    json doc = json::object();
    doc["@id"] = subject.value();
    for (const auto& desc : entity_descriptors()) {
        if (desc.name == d.entity_type) doc["@type"] = "cbw:" + std::string(desc.class_local);
    }

    for (auto it = d.properties.begin(); it != d.properties.end(); ++it) {
        std::optional<Literal> lit = scalar_literal(it.key(), it.value(), d.properties, log);
        if (!lit) continue;
        context[it.key()] = jsonld_term_definition(it.key(), *lit);
        doc[it.key()] = jsonld_value_for(*lit);
    }

    for (const auto& [relation, page] : d.relationships) {
        context[relation] = json{{"@id", "cbw:" + relation}, {"@type", "@id"}};
        json refs = json::array();
        for (const ItemStub& item : page.first_page_items) {
            try {
                refs.push_back(mint_entity_iri(base, item.entity_type, item.permalink).value());
            } catch (const Error& e) {
                if (log) log->skip("relation \"" + relation + "\" item: " + e.what());
            }
        }
        doc[relation] = std::move(refs);
    }

    if (!same_as.empty()) {
        context["owl"] = std::string(wk::owl_ns);
        context["sameAs"] = json{{"@id", "owl:sameAs"}, {"@type", "@id"}};
        json refs = json::array();
        for (const Iri& ext : same_as) refs.push_back(ext.value());
        doc["sameAs"] = std::move(refs);
    }

    doc["@context"] = std::move(context);
    return doc;
}

TripleSet summary_page_to_triples(const SummaryPage& page, const Iri& page_iri, const Iri& base,
                                  const std::optional<Iri>& next_page) {
    TripleSet g;
    for (const ItemStub& item : page.items) {
        g.insert({page_iri, property_iri("item"),
                  mint_entity_iri(base, item.entity_type, item.permalink)});
    }
    g.insert({page_iri, property_iri("total_items"),
              Literal::typed(std::to_string(page.total_items), wk::xsd_integer())});
    if (next_page) g.insert({page_iri, property_iri("next_page_url"), *next_page});
    return g;
}

TripleSet relation_page_to_triples(const SummaryPage& page, const Iri& subject,
                                   std::string_view relation, const Iri& page_iri,
                                   const Iri& base, const std::optional<Iri>& next_page) {
    TripleSet g;
    Iri predicate = property_iri(relation);
    for (const ItemStub& item : page.items) {
        g.insert({subject, predicate, mint_entity_iri(base, item.entity_type, item.permalink)});
    }
    g.insert({page_iri, property_iri("total_items"),
              Literal::typed(std::to_string(page.total_items), wk::xsd_integer())});
    if (next_page) g.insert({page_iri, property_iri("next_page_url"), *next_page});
    return g;
}

json triples_to_jsonld(const TripleSet& g) {
    json nodes = json::array();
    json* current = nullptr;
    std::string current_subject;

    for (const Triple& t : g) {
        if (!current || t.subject.value() != current_subject) {
            nodes.push_back(json{{"@id", t.subject.value()}});
            current = &nodes.back();
            current_subject = t.subject.value();
        }
        if (t.predicate == wk::rdf_type()) {
            if (const Iri* cls = std::get_if<Iri>(&t.object)) {
                (*current)["@type"].push_back(cls->value());
                continue;
            }
        }
        json value;
        if (const Iri* iri = std::get_if<Iri>(&t.object)) {
            value = json{{"@id", iri->value()}};
        } else {
            const Literal& lit = std::get<Literal>(t.object);
            value = json{{"@value", lit.lexical()}};
            if (lit.datatype()) value["@type"] = lit.datatype()->value();
            if (lit.language()) value["@language"] = *lit.language();
        }
        (*current)[t.predicate.value()].push_back(std::move(value));
    }
    return nodes;
}

std::string decimal_lexical(double value) {
    char buf[512];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
    if (ec != std::errc()) {
        throw Error(ErrorKind::invalid_literal, "cannot render number as decimal");
    }
    return std::string(buf, end);
}

}  // namespace cbld
