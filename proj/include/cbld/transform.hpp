#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cbld/envelope.hpp"
#include "cbld/rdf.hpp"
#include "cbld/sameas_store.hpp"

namespace cbld {

// A date string paired with the upstream confidence code (0 = unknown,
// 7 = exact day).
struct TrustCodedDate {
    std::string lexical;
    int trust_code = 0;
};

// Per-conversion counters for values that had to be dropped.
struct TransformLog {
    std::size_t skipped_values = 0;
    std::vector<std::string> messages;

    void skip(std::string message) {
        ++skipped_values;
        messages.push_back(std::move(message));
    }
};

// Unwraps the envelope around a detail payload. The metadata block (api
// version, path prefixes) is discarded; the entity itself is untouched.
EntityDetail strip_metadata(const UpstreamEnvelope& env);

// Maps the trust code to a typed literal:
//   7    -> xsd:date       "YYYY-MM-DD"
//   5..6 -> xsd:gYearMonth "YYYY-MM"
//   1..4 -> xsd:gYear      "YYYY"
//   0    -> plain string, raw lexical
// The lexical is truncated to the target precision; a lexical too short for
// its trust code is an invalid-date error.
Literal trust_date_to_literal(const TrustCodedDate& d);

// Flattens an entity into triples: one rdf:type triple, one triple per
// non-null scalar property, one triple per relationship item on the first
// page (no intermediate node), plus any stored owl:sameAs links for the
// subject. `*_trust_code` companion keys steer date typing and emit no
// triple of their own; unconvertible values are skipped and logged.
TripleSet entity_to_triples(const EntityDetail& d, const SameAsStore& sameas, const Iri& base,
                            TransformLog* log = nullptr);

// JSON-LD rendering of an entity: a @context mapping each field to its
// cbw: predicate (with datatype coercions matching entity_to_triples),
// @id/@type, and relationship lists as flat arrays of {"@id"} references.
// Expanding the document yields entity_to_triples minus sameAs when
// `same_as` is empty, and including them when it is passed.
nlohmann::json to_jsonld(const EntityDetail& d, const Iri& base,
                         const std::vector<Iri>& same_as = {}, TransformLog* log = nullptr);

// Triples for one page of an entity-type index: (page, cbw:item, entity)
// per item plus total_items and the rewritten next-page link.
TripleSet summary_page_to_triples(const SummaryPage& page, const Iri& page_iri, const Iri& base,
                                  const std::optional<Iri>& next_page);

// Triples for one page of a relation: (entity, cbw:{relation}, item) per
// item plus paging bookkeeping on the page IRI.
TripleSet relation_page_to_triples(const SummaryPage& page, const Iri& subject,
                                   std::string_view relation, const Iri& page_iri,
                                   const Iri& base, const std::optional<Iri>& next_page);

// Generic expanded-form JSON-LD for an arbitrary triple set (used for the
// ontology document and keyless responses).
nlohmann::json triples_to_jsonld(const TripleSet& g);

// Fixed-notation lexical for a JSON double, exponent-free, round-tripping.
std::string decimal_lexical(double value);

}  // namespace cbld
