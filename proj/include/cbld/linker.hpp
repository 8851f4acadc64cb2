#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cbld/rdf.hpp"
#include "cbld/transform.hpp"

namespace cbld {

// Host portion of a URL: lowercased, one leading "www." stripped, port,
// path, query and fragment dropped. IDN hosts stay as given.
std::string normalize_fqdn(const std::string& url);

// Name key normalization: casefold, strip diacritics (Latin ranges),
// collapse internal whitespace, trim.
std::string normalize_person_name(std::string_view name);

class HomepageIndex {
public:
    // `url` is a full homepage URL; unparseable ones throw.
    void add_homepage(const std::string& url, const Iri& external);
    void add_fqdn(std::string fqdn, const Iri& external);

    const std::set<Iri>* find(const std::string& fqdn) const;
    std::size_t size() const { return by_fqdn_.size(); }

private:
    std::map<std::string, std::set<Iri>> by_fqdn_;
};

class PersonIndex {
public:
    // `birth_date` must be a full xsd:date lexical; the name is normalized
    // here.
    void add(std::string_view name, const std::string& birth_date, const Iri& external);

    const std::set<Iri>* find(std::string_view name, const std::string& birth_date) const;
    std::size_t size() const { return by_key_.size(); }

private:
    std::map<std::pair<std::string, std::string>, std::set<Iri>> by_key_;
};

enum class LinkMethod { org_fqdn, person_name_dob };

std::string_view to_string(LinkMethod method);

struct SameAsMapping {
    Iri local;
    Iri external;
    LinkMethod method;
    std::string evidence;  // the matched key

    bool operator==(const SameAsMapping&) const = default;
};

struct LinkStats {
    std::size_t considered = 0;
    std::size_t matched = 0;
    std::size_t ambiguous = 0;
    std::size_t unmatched = 0;
    std::size_t skipped = 0;  // unusable input (bad URL, coarse birth date)
    std::vector<std::string> ambiguity_log;
};

struct LocalOrg {
    Iri iri;
    std::string homepage_url;
};

struct LocalPerson {
    Iri iri;
    std::string name;
    TrustCodedDate born_on;
};

// Organizations link on homepage FQDN equality; the key must resolve to
// exactly one external IRI, otherwise nothing is emitted (multi-candidate
// keys are logged as ambiguous).
std::vector<SameAsMapping> link_organizations(std::vector<LocalOrg> orgs,
                                              const HomepageIndex& index, LinkStats& stats);

// People link on (normalized name, exact birth date); only trust code 7
// birth dates participate.
std::vector<SameAsMapping> link_persons(std::vector<LocalPerson> people,
                                        const PersonIndex& index, LinkStats& stats);

TripleSet emit_sameas_dump(const std::vector<SameAsMapping>& mappings);

// Corpus-side predicates; configurable because external corpora disagree
// on where homepages and birth dates live.
struct CorpusPredicates {
    std::vector<Iri> homepage{wk::foaf_homepage()};
    Iri name_pred{wk::foaf_name()};
    Iri birth_date{std::string("http://dbpedia.org/ontology/birthDate")};
};

struct ExternalIndexes {
    HomepageIndex homepages;
    PersonIndex persons;
    std::size_t skipped_values = 0;
};

ExternalIndexes index_external_corpus(const TripleSet& corpus, const CorpusPredicates& preds);

// Local-side extraction from crawler dumps: organizations carry
// cbw:homepage_url, people cbw:name plus cbw:born_on (the date's datatype
// encodes its trust level: xsd:date is exact, anything coarser is not).
std::vector<LocalOrg> extract_local_orgs(const TripleSet& dump);
std::vector<LocalPerson> extract_local_people(const TripleSet& dump);

void write_link_report(std::ostream& out, const LinkStats& org_stats,
                       const LinkStats& person_stats);

}  // namespace cbld
