#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>

#include "cbld/error.hpp"

namespace cbld {

// An absolute IRI. Construction rejects anything that would need escaping in
// an N-Triples IRIREF, so serialization is a plain copy.
class Iri {
public:
    explicit Iri(std::string value);

    const std::string& value() const noexcept { return value_; }

    auto operator<=>(const Iri&) const = default;

private:
    std::string value_;
};

// An RDF literal: either plain, language-tagged, or datatyped. The three
// factories enforce the datatype/language exclusivity; typed literals with a
// known XSD datatype are checked against that type's lexical space.
class Literal {
public:
    static Literal plain(std::string lexical);
    static Literal typed(std::string lexical, Iri datatype);
    static Literal lang(std::string lexical, std::string language_tag);

    const std::string& lexical() const noexcept { return lexical_; }
    const std::optional<Iri>& datatype() const noexcept { return datatype_; }
    const std::optional<std::string>& language() const noexcept { return language_; }

    auto operator<=>(const Literal&) const = default;

private:
    Literal() = default;

    std::string lexical_;
    std::optional<Iri> datatype_;
    std::optional<std::string> language_;
};

using Term = std::variant<Iri, Literal>;

// Subjects and predicates are IRIs by construction; there is no blank-node
// representation anywhere in the model.
struct Triple {
    Iri subject;
    Iri predicate;
    Term object;

    auto operator<=>(const Triple&) const = default;
};

// A set of triples. Inserting a duplicate leaves cardinality unchanged.
class TripleSet {
public:
    using const_iterator = std::set<Triple>::const_iterator;

    void insert(Triple t) { triples_.insert(std::move(t)); }
    void merge(const TripleSet& other);

    bool contains(const Triple& t) const { return triples_.count(t) > 0; }
    std::size_t size() const noexcept { return triples_.size(); }
    bool empty() const noexcept { return triples_.empty(); }

    const_iterator begin() const { return triples_.begin(); }
    const_iterator end() const { return triples_.end(); }

    bool operator==(const TripleSet&) const = default;

private:
    std::set<Triple> triples_;
};

// N-Triples string escaping: backslash, quote, LF, CR and TAB get escape
// sequences, everything else (including non-ASCII) passes through raw.
std::string escape_literal(std::string_view s);
std::string unescape_literal(std::string_view s);

std::string serialize_term(const Term& t);
std::string serialize_triple(const Triple& t);

// Deterministic N-Triples output: one line per triple, lines sorted
// lexicographically, UTF-8 with LF line endings.
std::string serialize_ntriples(const TripleSet& g);

// Line-oriented N-Triples reader. Blank lines and '#' comment lines are
// skipped; blank nodes are rejected (the model cannot represent them).
TripleSet read_ntriples(std::istream& in);
TripleSet read_ntriples(const std::string& text);
Triple parse_ntriples_line(std::string_view line);

// File-level helpers; a path ending ".gz" selects a gzip container.
TripleSet read_ntriples_file(const std::filesystem::path& path);
void write_ntriples_file(const std::filesystem::path& path, const TripleSet& g);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

// The sixteen entity type names the deployment understands, in a fixed order.
const std::array<std::string_view, 16>& entity_type_names();
bool is_entity_type(std::string_view name);

// True when every character is in [a-z0-9._-].
bool is_valid_permalink(std::string_view permalink);

// Mints `{base}/api/{entity_type}/{permalink}`. Idempotent and injective
// over (entity_type, permalink); a trailing slash on base is dropped.
Iri mint_entity_iri(const Iri& base, std::string_view entity_type, std::string_view permalink);

// Well-known IRIs used across modules.
namespace wk {

inline constexpr std::string_view cbw_ns = "http://ontologycentral.com/2010/05/cb/vocab#";
inline constexpr std::string_view rdf_ns = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view rdfs_ns = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view owl_ns = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view xsd_ns = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view schema_ns = "http://schema.org/";
inline constexpr std::string_view void_ns = "http://rdfs.org/ns/void#";
inline constexpr std::string_view voaf_ns = "http://purl.org/vocommons/voaf#";
inline constexpr std::string_view dcterms_ns = "http://purl.org/dc/terms/";
inline constexpr std::string_view vann_ns = "http://purl.org/vocab/vann/";
inline constexpr std::string_view foaf_ns = "http://xmlns.com/foaf/0.1/";

const Iri& rdf_type();
const Iri& rdfs_label();
const Iri& rdfs_sub_class_of();
const Iri& rdfs_sub_property_of();
const Iri& rdfs_is_defined_by();
const Iri& owl_class();
const Iri& owl_ontology();
const Iri& owl_datatype_property();
const Iri& owl_object_property();
const Iri& owl_equivalent_class();
const Iri& owl_equivalent_property();
const Iri& owl_same_as();
const Iri& xsd_boolean();
const Iri& xsd_integer();
const Iri& xsd_decimal();
const Iri& xsd_date();
const Iri& xsd_g_year_month();
const Iri& xsd_g_year();
const Iri& xsd_string();
const Iri& voaf_vocabulary();
const Iri& dcterms_title();
const Iri& vann_preferred_namespace_prefix();
const Iri& vann_preferred_namespace_uri();
const Iri& void_dataset();
const Iri& void_linkset();
const Iri& void_triples();
const Iri& void_entities();
const Iri& void_classes();
const Iri& void_properties();
const Iri& void_class_partition();
const Iri& void_class();
const Iri& void_subset();
const Iri& void_link_predicate();
const Iri& void_subjects_target();
const Iri& foaf_homepage();
const Iri& foaf_name();

}  // namespace wk

}  // namespace cbld
