#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "cbld/rdf.hpp"

namespace cbld {

struct EntityTypeDescriptor {
    std::string_view name;            // API path segment, e.g. "organizations"
    std::string_view class_local;     // CamelCase singular, e.g. "Organization"
    std::string_view singular_label;  // human label, e.g. "organization"
};

const std::array<EntityTypeDescriptor, 16>& entity_descriptors();

// `cbw:` class IRI for an entity type ("organizations" -> cbw:Organization).
Iri class_iri(std::string_view entity_type);

// Reverse lookup; empty when the class is not one of ours.
std::optional<std::string_view> entity_type_for_class(const Iri& class_iri);

// `cbw:{field_name}`, spelling unchanged. Rejects names that are not
// snake_case.
Iri property_iri(std::string_view field_name);

enum class PropertyKind { datatype, object };

struct PropertyDescriptor {
    std::string_view name;
    PropertyKind kind;
};

const std::vector<PropertyDescriptor>& property_descriptors();
bool is_declared_property(const Iri& predicate);

enum class MappingKind { equivalent_class, sub_class_of, equivalent_property, sub_property_of };

struct MappingEntry {
    Iri local;
    Iri external;
    MappingKind kind;
};

const std::vector<MappingEntry>& schema_org_mappings();

// The vocabulary document IRI (namespace IRI without the trailing '#').
const Iri& vocabulary_iri();

// The full ontology document: class and property declarations, the
// schema.org mapping table, and VOAF vocabulary-level metadata.
TripleSet emit_ontology();

}  // namespace cbld
