#include "cbld/linker.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>

#include "cbld/url.hpp"
#include "cbld/vocab.hpp"

namespace cbld {

std::string normalize_fqdn(const std::string& url) {
    auto parts = try_parse_url(url);
    if (!parts) {
        throw Error(ErrorKind::unparseable_url, "no parseable host in \"" + url + "\"");
    }
    std::string host = parts->host;
    std::transform(host.begin(), host.end(), host.begin(), [](unsigned char c) {
        return c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c);
    });
    if (host.rfind("www.", 0) == 0 && host.size() > 4) host.erase(0, 4);
    if (host.empty() || host == "www.") {
        throw Error(ErrorKind::unparseable_url, "no parseable host in \"" + url + "\"");
    }
    return host;
}

namespace {

struct FoldRange {
    uint32_t lo;
    uint32_t hi;
    const char* base;
};

// Diacritic folding for the Latin-1 supplement and Latin Extended-A
// blocks; enough for the names this corpus carries.
const char* fold_codepoint(uint32_t cp) {
    static const FoldRange ranges[] = {
        {0x00C0, 0x00C5, "a"}, {0x00C6, 0x00C6, "ae"}, {0x00C7, 0x00C7, "c"},
        {0x00C8, 0x00CB, "e"}, {0x00CC, 0x00CF, "i"},  {0x00D0, 0x00D0, "d"},
        {0x00D1, 0x00D1, "n"}, {0x00D2, 0x00D6, "o"},  {0x00D8, 0x00D8, "o"},
        {0x00D9, 0x00DC, "u"}, {0x00DD, 0x00DD, "y"},  {0x00DE, 0x00DE, "th"},
        {0x00DF, 0x00DF, "ss"},
        {0x00E0, 0x00E5, "a"}, {0x00E6, 0x00E6, "ae"}, {0x00E7, 0x00E7, "c"},
        {0x00E8, 0x00EB, "e"}, {0x00EC, 0x00EF, "i"},  {0x00F0, 0x00F0, "d"},
        {0x00F1, 0x00F1, "n"}, {0x00F2, 0x00F6, "o"},  {0x00F8, 0x00F8, "o"},
        {0x00F9, 0x00FC, "u"}, {0x00FD, 0x00FD, "y"},  {0x00FE, 0x00FE, "th"},
        {0x00FF, 0x00FF, "y"},
        {0x0100, 0x0105, "a"}, {0x0106, 0x010D, "c"},  {0x010E, 0x0111, "d"},
        {0x0112, 0x011B, "e"}, {0x011C, 0x0123, "g"},  {0x0124, 0x0127, "h"},
        {0x0128, 0x0131, "i"}, {0x0132, 0x0133, "ij"}, {0x0134, 0x0135, "j"},
        {0x0136, 0x0138, "k"}, {0x0139, 0x0142, "l"},  {0x0143, 0x014B, "n"},
        {0x014C, 0x0151, "o"}, {0x0152, 0x0153, "oe"}, {0x0154, 0x0159, "r"},
        {0x015A, 0x0161, "s"}, {0x0162, 0x0167, "t"},  {0x0168, 0x0173, "u"},
        {0x0174, 0x0175, "w"}, {0x0176, 0x0178, "y"},  {0x0179, 0x017E, "z"},
        {0x017F, 0x017F, "s"},
    };
    for (const FoldRange& r : ranges) {
        if (cp >= r.lo && cp <= r.hi) return r.base;
    }
    return nullptr;
}

void append_codepoint_utf8(std::string& out, uint32_t cp) {
    if (cp <= 0x7F) {
        out.push_back(static_cast<char>(cp));
    } else if (cp <= 0x7FF) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp <= 0xFFFF) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool is_space_codepoint(uint32_t cp) {
    return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == 0x00A0;
}

}  // namespace

std::string normalize_person_name(std::string_view name) {
    std::string folded;
    folded.reserve(name.size());

    std::size_t i = 0;
    bool pending_space = false;
    while (i < name.size()) {
        unsigned char lead = static_cast<unsigned char>(name[i]);
        uint32_t cp = 0;
        std::size_t len = 1;
        if (lead < 0x80) {
            cp = lead;
        } else if ((lead >> 5) == 0x6 && i + 1 < name.size()) {
            cp = (static_cast<uint32_t>(lead & 0x1F) << 6) |
                 (static_cast<uint32_t>(name[i + 1]) & 0x3F);
            len = 2;
        } else if ((lead >> 4) == 0xE && i + 2 < name.size()) {
            cp = (static_cast<uint32_t>(lead & 0x0F) << 12) |
                 ((static_cast<uint32_t>(name[i + 1]) & 0x3F) << 6) |
                 (static_cast<uint32_t>(name[i + 2]) & 0x3F);
            len = 3;
        } else if ((lead >> 3) == 0x1E && i + 3 < name.size()) {
            cp = (static_cast<uint32_t>(lead & 0x07) << 18) |
                 ((static_cast<uint32_t>(name[i + 1]) & 0x3F) << 12) |
                 ((static_cast<uint32_t>(name[i + 2]) & 0x3F) << 6) |
                 (static_cast<uint32_t>(name[i + 3]) & 0x3F);
            len = 4;
        } else {
            cp = lead;  // invalid sequence, pass the byte through
        }
        i += len;

        if (is_space_codepoint(cp)) {
            pending_space = !folded.empty();
            continue;
        }
        if (pending_space) {
            folded.push_back(' ');
            pending_space = false;
        }
        if (cp < 0x80) {
            folded.push_back(static_cast<char>(std::tolower(static_cast<int>(cp))));
        } else if (const char* base = fold_codepoint(cp)) {
            folded += base;
        } else {
            append_codepoint_utf8(folded, cp);
        }
    }
    return folded;
}

void HomepageIndex::add_homepage(const std::string& url, const Iri& external) {
    add_fqdn(normalize_fqdn(url), external);
}

void HomepageIndex::add_fqdn(std::string fqdn, const Iri& external) {
    by_fqdn_[std::move(fqdn)].insert(external);
}

const std::set<Iri>* HomepageIndex::find(const std::string& fqdn) const {
    auto it = by_fqdn_.find(fqdn);
    return it == by_fqdn_.end() ? nullptr : &it->second;
}

void PersonIndex::add(std::string_view name, const std::string& birth_date, const Iri& external) {
    by_key_[{normalize_person_name(name), birth_date}].insert(external);
}

const std::set<Iri>* PersonIndex::find(std::string_view name, const std::string& birth_date) const {
    auto it = by_key_.find({normalize_person_name(name), birth_date});
    return it == by_key_.end() ? nullptr : &it->second;
}

std::string_view to_string(LinkMethod method) {
    return method == LinkMethod::org_fqdn ? "org-fqdn" : "person-name-dob";
}

std::vector<SameAsMapping> link_organizations(std::vector<LocalOrg> orgs,
                                              const HomepageIndex& index, LinkStats& stats) {
    // One record per local IRI, processed in IRI order so output does not
    // depend on input order.
    std::sort(orgs.begin(), orgs.end(),
              [](const LocalOrg& a, const LocalOrg& b) { return a.iri < b.iri; });
    orgs.erase(std::unique(orgs.begin(), orgs.end(),
                           [](const LocalOrg& a, const LocalOrg& b) { return a.iri == b.iri; }),
               orgs.end());

    std::vector<SameAsMapping> mappings;
    for (const LocalOrg& org : orgs) {
        ++stats.considered;
        std::string fqdn;
        try {
            fqdn = normalize_fqdn(org.homepage_url);
        } catch (const Error&) {
            ++stats.skipped;
            continue;
        }
        const std::set<Iri>* candidates = index.find(fqdn);
        if (!candidates || candidates->empty()) {
            ++stats.unmatched;
            continue;
        }
        if (candidates->size() > 1) {
            ++stats.ambiguous;
            stats.ambiguity_log.push_back("org-fqdn " + fqdn + ": " +
                                          std::to_string(candidates->size()) +
                                          " candidates for <" + org.iri.value() + ">");
            continue;
        }
        ++stats.matched;
        mappings.push_back({org.iri, *candidates->begin(), LinkMethod::org_fqdn, fqdn});
    }
    return mappings;
}

std::vector<SameAsMapping> link_persons(std::vector<LocalPerson> people,
                                        const PersonIndex& index, LinkStats& stats) {
    std::sort(people.begin(), people.end(),
              [](const LocalPerson& a, const LocalPerson& b) { return a.iri < b.iri; });
    people.erase(
        std::unique(people.begin(), people.end(),
                    [](const LocalPerson& a, const LocalPerson& b) { return a.iri == b.iri; }),
        people.end());

    std::vector<SameAsMapping> mappings;
    for (const LocalPerson& person : people) {
        ++stats.considered;
        if (person.born_on.trust_code != 7) {
            ++stats.skipped;
            continue;
        }
        std::string date = person.born_on.lexical.substr(0, 10);
        const std::set<Iri>* candidates = index.find(person.name, date);
        if (!candidates || candidates->empty()) {
            ++stats.unmatched;
            continue;
        }
        std::string key = normalize_person_name(person.name) + "|" + date;
        if (candidates->size() > 1) {
            ++stats.ambiguous;
            stats.ambiguity_log.push_back("person-name-dob " + key + ": " +
                                          std::to_string(candidates->size()) +
                                          " candidates for <" + person.iri.value() + ">");
            continue;
        }
        ++stats.matched;
        mappings.push_back({person.iri, *candidates->begin(), LinkMethod::person_name_dob, key});
    }
    return mappings;
}

TripleSet emit_sameas_dump(const std::vector<SameAsMapping>& mappings) {
    TripleSet g;
    for (const SameAsMapping& m : mappings) {
        g.insert({m.local, wk::owl_same_as(), m.external});
    }
    return g;
}

ExternalIndexes index_external_corpus(const TripleSet& corpus, const CorpusPredicates& preds) {
    ExternalIndexes indexes;

    // People need (name, birth date) pairs per subject; gather first.
    std::map<Iri, std::vector<std::string>> names;
    std::map<Iri, std::vector<std::string>> birth_dates;

    for (const Triple& t : corpus) {
        bool homepage_pred =
            std::any_of(preds.homepage.begin(), preds.homepage.end(),
                        [&](const Iri& p) { return p == t.predicate; });
        if (homepage_pred) {
            std::string url;
            if (const Iri* iri = std::get_if<Iri>(&t.object)) {
                url = iri->value();
            } else {
                url = std::get<Literal>(t.object).lexical();
            }
            try {
                indexes.homepages.add_homepage(url, t.subject);
            } catch (const Error&) {
                ++indexes.skipped_values;
            }
            continue;
        }
        if (t.predicate == preds.name_pred) {
            if (const Literal* lit = std::get_if<Literal>(&t.object)) {
                names[t.subject].push_back(lit->lexical());
            }
            continue;
        }
        if (t.predicate == preds.birth_date) {
            const Literal* lit = std::get_if<Literal>(&t.object);
            if (!lit) continue;
            const std::string& lex = lit->lexical();
            bool exact_date = lit->datatype() && *lit->datatype() == wk::xsd_date();
            if (!exact_date && !(lex.size() == 10 && lex[4] == '-' && lex[7] == '-')) {
                ++indexes.skipped_values;
                continue;
            }
            birth_dates[t.subject].push_back(lex.substr(0, 10));
        }
    }

    for (const auto& [subject, subject_names] : names) {
        auto dates = birth_dates.find(subject);
        if (dates == birth_dates.end()) continue;
        for (const std::string& name : subject_names) {
            for (const std::string& date : dates->second) {
                indexes.persons.add(name, date, subject);
            }
        }
    }
    return indexes;
}

std::vector<LocalOrg> extract_local_orgs(const TripleSet& dump) {
    const Iri homepage = property_iri("homepage_url");
    std::vector<LocalOrg> orgs;
    for (const Triple& t : dump) {
        if (t.predicate != homepage) continue;
        if (const Literal* lit = std::get_if<Literal>(&t.object)) {
            orgs.push_back({t.subject, lit->lexical()});
        }
    }
    return orgs;
}

std::vector<LocalPerson> extract_local_people(const TripleSet& dump) {
    const Iri name_pred = property_iri("name");
    const Iri born_pred = property_iri("born_on");

    std::map<Iri, std::string> names;
    std::map<Iri, TrustCodedDate> births;
    for (const Triple& t : dump) {
        const Literal* lit = std::get_if<Literal>(&t.object);
        if (!lit) continue;
        if (t.predicate == name_pred) {
            names.emplace(t.subject, lit->lexical());
        } else if (t.predicate == born_pred) {
            // The dump encodes the trust level in the datatype.
            int trust = 0;
            if (lit->datatype()) {
                if (*lit->datatype() == wk::xsd_date()) trust = 7;
                else if (*lit->datatype() == wk::xsd_g_year_month()) trust = 5;
                else if (*lit->datatype() == wk::xsd_g_year()) trust = 3;
            }
            births.emplace(t.subject, TrustCodedDate{lit->lexical(), trust});
        }
    }

    std::vector<LocalPerson> people;
    for (const auto& [subject, born] : births) {
        auto name = names.find(subject);
        if (name == names.end()) continue;
        people.push_back({subject, name->second, born});
    }
    return people;
}

void write_link_report(std::ostream& out, const LinkStats& org_stats,
                       const LinkStats& person_stats) {
    auto line = [&](std::string_view method, const LinkStats& s) {
        out << method << ": considered=" << s.considered << " matched=" << s.matched
            << " ambiguous=" << s.ambiguous << " unmatched=" << s.unmatched
            << " skipped=" << s.skipped << "\n";
    };
    line("org-fqdn", org_stats);
    line("person-name-dob", person_stats);
    for (const std::string& entry : org_stats.ambiguity_log) out << "ambiguous " << entry << "\n";
    for (const std::string& entry : person_stats.ambiguity_log) {
        out << "ambiguous " << entry << "\n";
    }
}

}  // namespace cbld
