#include "cbld/vocab.hpp"

#include <algorithm>
#include <cctype>

namespace cbld {

namespace {

Iri cbw(std::string_view local) { return Iri(std::string(wk::cbw_ns) + std::string(local)); }
Iri schema(std::string_view local) { return Iri(std::string(wk::schema_ns) + std::string(local)); }

bool is_snake_case(std::string_view s) {
    if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
    char prev = '\0';
    for (char c : s) {
        bool ok = std::islower(static_cast<unsigned char>(c)) ||
                  std::isdigit(static_cast<unsigned char>(c)) || c == '_';
        if (!ok) return false;
        if (c == '_' && prev == '_') return false;
        prev = c;
    }
    return s.back() != '_';
}

}  // namespace

const std::array<EntityTypeDescriptor, 16>& entity_descriptors() {
    static const std::array<EntityTypeDescriptor, 16> table = {{
        {"acquisitions", "Acquisition", "acquisition"},
        {"addresses", "Address", "address"},
        {"categories", "Category", "category"},
        {"degrees", "Degree", "degree"},
        {"funding_rounds", "FundingRound", "funding round"},
        {"funds", "Fund", "fund"},
        {"images", "Image", "image"},
        {"investments", "Investment", "investment"},
        {"ipos", "Ipo", "IPO"},
        {"jobs", "Job", "job"},
        {"locations", "Location", "location"},
        {"news", "News", "news"},
        {"organizations", "Organization", "organization"},
        {"people", "Person", "person"},
        {"videos", "Video", "video"},
        {"websites", "Website", "website"},
    }};
    return table;
}

Iri class_iri(std::string_view entity_type) {
    for (const auto& d : entity_descriptors()) {
        if (d.name == entity_type) return cbw(d.class_local);
    }
    throw Error(ErrorKind::invalid_type, "unknown entity type \"" + std::string(entity_type) + "\"");
}

std::optional<std::string_view> entity_type_for_class(const Iri& iri) {
    const std::string& v = iri.value();
    if (v.rfind(wk::cbw_ns, 0) != 0) return std::nullopt;
    std::string_view local = std::string_view(v).substr(wk::cbw_ns.size());
    for (const auto& d : entity_descriptors()) {
        if (d.class_local == local) return d.name;
    }
    return std::nullopt;
}

Iri property_iri(std::string_view field_name) {
    if (!is_snake_case(field_name)) {
        throw Error(ErrorKind::invalid_field,
                    "field name is not snake_case: \"" + std::string(field_name) + "\"");
    }
    return cbw(field_name);
}

const std::vector<PropertyDescriptor>& property_descriptors() {
    static const std::vector<PropertyDescriptor> table = {
        // Scalar attributes.
        {"also_known_as", PropertyKind::datatype},
        {"announced_on", PropertyKind::datatype},
        {"author", PropertyKind::datatype},
        {"began_on", PropertyKind::datatype},
        {"bio", PropertyKind::datatype},
        {"born_on", PropertyKind::datatype},
        {"caption", PropertyKind::datatype},
        {"city", PropertyKind::datatype},
        {"closed_on", PropertyKind::datatype},
        {"completed_on", PropertyKind::datatype},
        {"continent", PropertyKind::datatype},
        {"country_code", PropertyKind::datatype},
        {"created_at", PropertyKind::datatype},
        {"degree_type_name", PropertyKind::datatype},
        {"description", PropertyKind::datatype},
        {"died_on", PropertyKind::datatype},
        {"email", PropertyKind::datatype},
        {"ended_on", PropertyKind::datatype},
        {"facebook_url", PropertyKind::datatype},
        {"first_name", PropertyKind::datatype},
        {"founded_on", PropertyKind::datatype},
        {"funding_type", PropertyKind::datatype},
        {"gender", PropertyKind::datatype},
        {"homepage_url", PropertyKind::datatype},
        {"investment_type", PropertyKind::datatype},
        {"is_current", PropertyKind::datatype},
        {"last_name", PropertyKind::datatype},
        {"latitude", PropertyKind::datatype},
        {"linkedin_url", PropertyKind::datatype},
        {"longitude", PropertyKind::datatype},
        {"money_raised_usd", PropertyKind::datatype},
        {"name", PropertyKind::datatype},
        {"num_employees_max", PropertyKind::datatype},
        {"num_employees_min", PropertyKind::datatype},
        {"permalink", PropertyKind::datatype},
        {"phone_number", PropertyKind::datatype},
        {"posted_on", PropertyKind::datatype},
        {"postal_code", PropertyKind::datatype},
        {"price_usd", PropertyKind::datatype},
        {"profile_image_url", PropertyKind::datatype},
        {"region", PropertyKind::datatype},
        {"role_company", PropertyKind::datatype},
        {"role_group", PropertyKind::datatype},
        {"role_investor", PropertyKind::datatype},
        {"short_description", PropertyKind::datatype},
        {"started_on", PropertyKind::datatype},
        {"stock_symbol", PropertyKind::datatype},
        {"street_1", PropertyKind::datatype},
        {"street_2", PropertyKind::datatype},
        {"subject", PropertyKind::datatype},
        {"target_money_raised_usd", PropertyKind::datatype},
        {"title", PropertyKind::datatype},
        {"total_funding_usd", PropertyKind::datatype},
        {"total_items", PropertyKind::datatype},
        {"twitter_url", PropertyKind::datatype},
        {"updated_at", PropertyKind::datatype},
        {"url", PropertyKind::datatype},
        {"went_public_on", PropertyKind::datatype},
        // Relations and paging links.
        {"acquired_by", PropertyKind::object},
        {"acquiree", PropertyKind::object},
        {"acquirer", PropertyKind::object},
        {"acquisitions", PropertyKind::object},
        {"addresses", PropertyKind::object},
        {"board_members_and_advisors", PropertyKind::object},
        {"categories", PropertyKind::object},
        {"current_team", PropertyKind::object},
        {"degrees", PropertyKind::object},
        {"founders", PropertyKind::object},
        {"funded_organization", PropertyKind::object},
        {"funding_rounds", PropertyKind::object},
        {"funds", PropertyKind::object},
        {"images", PropertyKind::object},
        {"investments", PropertyKind::object},
        {"investors", PropertyKind::object},
        {"ipos", PropertyKind::object},
        {"item", PropertyKind::object},
        {"jobs", PropertyKind::object},
        {"locations", PropertyKind::object},
        {"news", PropertyKind::object},
        {"next_page_url", PropertyKind::object},
        {"organization", PropertyKind::object},
        {"organizations", PropertyKind::object},
        {"past_team", PropertyKind::object},
        {"people", PropertyKind::object},
        {"person", PropertyKind::object},
        {"primary_image", PropertyKind::object},
        {"primary_location", PropertyKind::object},
        {"school", PropertyKind::object},
        {"videos", PropertyKind::object},
        {"websites", PropertyKind::object},
    };
    return table;
}

bool is_declared_property(const Iri& predicate) {
    const std::string& v = predicate.value();
    if (v.rfind(wk::cbw_ns, 0) != 0) return false;
    std::string_view local = std::string_view(v).substr(wk::cbw_ns.size());
    const auto& table = property_descriptors();
    return std::any_of(table.begin(), table.end(),
                       [&](const PropertyDescriptor& p) { return p.name == local; });
}

const std::vector<MappingEntry>& schema_org_mappings() {
    static const std::vector<MappingEntry> table = [] {
        std::vector<MappingEntry> t;
        auto eqc = [&](std::string_view l, std::string_view e) {
            t.push_back({cbw(l), schema(e), MappingKind::equivalent_class});
        };
        auto subc = [&](std::string_view l, std::string_view e) {
            t.push_back({cbw(l), schema(e), MappingKind::sub_class_of});
        };
        auto eqp = [&](std::string_view l, std::string_view e) {
            t.push_back({cbw(l), schema(e), MappingKind::equivalent_property});
        };
        auto subp = [&](std::string_view l, std::string_view e) {
            t.push_back({cbw(l), schema(e), MappingKind::sub_property_of});
        };

        // The seven class equivalences.
        eqc("Address", "Place");
        eqc("Image", "ImageObject");
        eqc("News", "NewsArticle");
        eqc("Organization", "Organization");
        eqc("Person", "Person");
        eqc("Video", "VideoObject");
        eqc("Website", "WebSite");

        // Curated class subsumptions for types with no schema.org equivalent.
        subc("Acquisition", "Event");
        subc("FundingRound", "Event");
        subc("Ipo", "Event");
        subc("Job", "Role");
        subc("Degree", "EducationalOccupationalCredential");
        subc("Location", "Place");

        // Curated property alignments.
        eqp("name", "name");
        eqp("description", "description");
        eqp("founded_on", "foundingDate");
        eqp("closed_on", "dissolutionDate");
        eqp("born_on", "birthDate");
        eqp("died_on", "deathDate");
        eqp("first_name", "givenName");
        eqp("last_name", "familyName");
        eqp("gender", "gender");
        eqp("homepage_url", "url");
        eqp("email", "email");
        eqp("phone_number", "telephone");
        eqp("stock_symbol", "tickerSymbol");
        eqp("city", "addressLocality");
        eqp("region", "addressRegion");
        eqp("postal_code", "postalCode");
        eqp("street_1", "streetAddress");
        eqp("country_code", "addressCountry");
        eqp("latitude", "latitude");
        eqp("longitude", "longitude");

        subp("short_description", "description");
        subp("bio", "description");
        subp("permalink", "identifier");
        subp("profile_image_url", "image");
        subp("twitter_url", "sameAs");
        subp("facebook_url", "sameAs");
        subp("linkedin_url", "sameAs");
        subp("investors", "funder");
        subp("founders", "founder");
        subp("title", "jobTitle");

        return t;
    }();
    return table;
}

const Iri& vocabulary_iri() {
    static const Iri iri = [] {
        std::string ns(wk::cbw_ns);
        ns.pop_back();  // drop trailing '#'
        return Iri(ns);
    }();
    return iri;
}

TripleSet emit_ontology() {
    TripleSet g;
    const Iri& vocab = vocabulary_iri();

    g.insert({vocab, wk::rdf_type(), wk::owl_ontology()});
    g.insert({vocab, wk::rdf_type(), wk::voaf_vocabulary()});
    g.insert({vocab, wk::dcterms_title(), Literal::lang("Crunchbase-style vocabulary", "en")});
    g.insert({vocab, wk::vann_preferred_namespace_prefix(), Literal::plain("cbw")});
    g.insert({vocab, wk::vann_preferred_namespace_uri(),
              Literal::plain(std::string(wk::cbw_ns))});

    for (const auto& d : entity_descriptors()) {
        Iri c = class_iri(d.name);
        g.insert({c, wk::rdf_type(), wk::owl_class()});
        g.insert({c, wk::rdfs_label(), Literal::lang(std::string(d.singular_label), "en")});
        g.insert({c, wk::rdfs_is_defined_by(), vocab});
    }

    for (const auto& p : property_descriptors()) {
        Iri prop = property_iri(p.name);
        g.insert({prop, wk::rdf_type(),
                  p.kind == PropertyKind::datatype ? wk::owl_datatype_property()
                                                   : wk::owl_object_property()});
        g.insert({prop, wk::rdfs_is_defined_by(), vocab});
    }

    for (const auto& m : schema_org_mappings()) {
        const Iri* pred = nullptr;
        switch (m.kind) {
            case MappingKind::equivalent_class: pred = &wk::owl_equivalent_class(); break;
            case MappingKind::sub_class_of: pred = &wk::rdfs_sub_class_of(); break;
            case MappingKind::equivalent_property: pred = &wk::owl_equivalent_property(); break;
            case MappingKind::sub_property_of: pred = &wk::rdfs_sub_property_of(); break;
        }
        g.insert({m.local, *pred, m.external});
    }

    return g;
}

}  // namespace cbld
