#include "cbld/rdf.hpp"

#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

namespace cbld {

namespace {

bool has_scheme(std::string_view s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    for (std::size_t i = 1; i < s.size(); ++i) {
        char c = s[i];
        if (c == ':') return i + 1 < s.size();
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') {
            return false;
        }
    }
    return false;
}

// Characters an N-Triples IRIREF cannot carry raw.
bool needs_iri_escaping(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    if (u <= 0x20) return true;
    switch (c) {
        case '<':
        case '>':
        case '"':
        case '{':
        case '}':
        case '|':
        case '^':
        case '`':
        case '\\':
            return true;
        default:
            return false;
    }
}

bool all_digits(std::string_view s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

bool valid_year(std::string_view s) { return s.size() == 4 && all_digits(s); }

bool valid_month(std::string_view s) {
    if (s.size() != 2 || !all_digits(s)) return false;
    int m = (s[0] - '0') * 10 + (s[1] - '0');
    return m >= 1 && m <= 12;
}

bool valid_day(std::string_view s) {
    if (s.size() != 2 || !all_digits(s)) return false;
    int d = (s[0] - '0') * 10 + (s[1] - '0');
    return d >= 1 && d <= 31;
}

bool valid_date_lexical(std::string_view s) {
    return s.size() == 10 && s[4] == '-' && s[7] == '-' && valid_year(s.substr(0, 4)) &&
           valid_month(s.substr(5, 2)) && valid_day(s.substr(8, 2));
}

bool valid_g_year_month_lexical(std::string_view s) {
    return s.size() == 7 && s[4] == '-' && valid_year(s.substr(0, 4)) &&
           valid_month(s.substr(5, 2));
}

bool valid_boolean_lexical(std::string_view s) {
    return s == "true" || s == "false" || s == "1" || s == "0";
}

bool valid_integer_lexical(std::string_view s) {
    if (s.empty()) return false;
    if (s[0] == '+' || s[0] == '-') s.remove_prefix(1);
    return all_digits(s);
}

bool valid_decimal_lexical(std::string_view s) {
    if (s.empty()) return false;
    if (s[0] == '+' || s[0] == '-') s.remove_prefix(1);
    auto dot = s.find('.');
    if (dot == std::string_view::npos) return all_digits(s);
    std::string_view intpart = s.substr(0, dot);
    std::string_view fracpart = s.substr(dot + 1);
    if (intpart.empty() && fracpart.empty()) return false;
    return (intpart.empty() || all_digits(intpart)) && (fracpart.empty() || all_digits(fracpart));
}

void check_known_xsd_lexical(const std::string& lexical, const Iri& datatype) {
    const std::string& dt = datatype.value();
    bool ok = true;
    if (dt == wk::xsd_date().value()) {
        ok = valid_date_lexical(lexical);
    } else if (dt == wk::xsd_g_year_month().value()) {
        ok = valid_g_year_month_lexical(lexical);
    } else if (dt == wk::xsd_g_year().value()) {
        ok = valid_year(lexical);
    } else if (dt == wk::xsd_boolean().value()) {
        ok = valid_boolean_lexical(lexical);
    } else if (dt == wk::xsd_decimal().value()) {
        ok = valid_decimal_lexical(lexical);
    } else if (dt == wk::xsd_integer().value()) {
        ok = valid_integer_lexical(lexical);
    }
    if (!ok) {
        throw Error(ErrorKind::invalid_literal,
                    "\"" + lexical + "\" is not in the lexical space of <" + dt + ">");
    }
}

bool valid_language_tag(std::string_view tag) {
    if (tag.empty()) return false;
    bool first = true;
    std::size_t run = 0;
    for (char c : tag) {
        if (c == '-') {
            if (run == 0) return false;
            run = 0;
            first = false;
            continue;
        }
        bool alpha = std::isalpha(static_cast<unsigned char>(c));
        bool digit = std::isdigit(static_cast<unsigned char>(c));
        if (!(alpha || (digit && !first))) return false;
        if (++run > 8) return false;
    }
    return run > 0;
}

void append_utf8(std::string& out, uint32_t cp) {
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

}  // namespace

Iri::Iri(std::string value) : value_(std::move(value)) {
    if (!has_scheme(value_)) {
        throw Error(ErrorKind::parse_error, "not an absolute IRI: \"" + value_ + "\"");
    }
    for (char c : value_) {
        if (needs_iri_escaping(c)) {
            throw Error(ErrorKind::parse_error,
                        "IRI contains a character that must be percent-encoded: \"" + value_ + "\"");
        }
    }
}

Literal Literal::plain(std::string lexical) {
    Literal l;
    l.lexical_ = std::move(lexical);
    return l;
}

Literal Literal::typed(std::string lexical, Iri datatype) {
    // "..."^^xsd:string is the same term as a plain literal; normalize.
    if (datatype.value() == wk::xsd_string().value()) return plain(std::move(lexical));
    check_known_xsd_lexical(lexical, datatype);
    Literal l;
    l.lexical_ = std::move(lexical);
    l.datatype_ = std::move(datatype);
    return l;
}

Literal Literal::lang(std::string lexical, std::string language_tag) {
    if (!valid_language_tag(language_tag)) {
        throw Error(ErrorKind::invalid_literal, "bad language tag: \"" + language_tag + "\"");
    }
    Literal l;
    l.lexical_ = std::move(lexical);
    l.language_ = std::move(language_tag);
    return l;
}

void TripleSet::merge(const TripleSet& other) {
    triples_.insert(other.triples_.begin(), other.triples_.end());
}

std::string escape_literal(std::string_view s) {
    std::string out;
    out.reserve(s.size());
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

std::string unescape_literal(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\') {
            out.push_back(s[i]);
            continue;
        }
        if (++i >= s.size()) {
            throw Error(ErrorKind::parse_error, "dangling backslash in literal");
        }
        switch (s[i]) {
            case '\\': out.push_back('\\'); break;
            case '"': out.push_back('"'); break;
            case '\'': out.push_back('\''); break;
            case 'n': out.push_back('\n'); break;
            case 'r': out.push_back('\r'); break;
            case 't': out.push_back('\t'); break;
            case 'b': out.push_back('\b'); break;
            case 'f': out.push_back('\f'); break;
            case 'u':
            case 'U': {
                std::size_t ndigits = s[i] == 'u' ? 4 : 8;
                if (i + ndigits >= s.size()) {
                    throw Error(ErrorKind::parse_error, "truncated \\u escape in literal");
                }
                uint32_t cp = 0;
                for (std::size_t k = 0; k < ndigits; ++k) {
                    char h = s[++i];
                    cp <<= 4;
                    if (h >= '0' && h <= '9') cp |= static_cast<uint32_t>(h - '0');
                    else if (h >= 'a' && h <= 'f') cp |= static_cast<uint32_t>(h - 'a' + 10);
                    else if (h >= 'A' && h <= 'F') cp |= static_cast<uint32_t>(h - 'A' + 10);
                    else throw Error(ErrorKind::parse_error, "bad hex digit in \\u escape");
                }
                append_utf8(out, cp);
                break;
            }
            default:
                throw Error(ErrorKind::parse_error,
                            std::string("unknown escape \\") + s[i] + " in literal");
        }
    }
    return out;
}

std::string serialize_term(const Term& t) {
    if (const Iri* iri = std::get_if<Iri>(&t)) {
        return "<" + iri->value() + ">";
    }
    const Literal& lit = std::get<Literal>(t);
    std::string out = "\"" + escape_literal(lit.lexical()) + "\"";
    if (lit.datatype()) {
        out += "^^<" + lit.datatype()->value() + ">";
    } else if (lit.language()) {
        out += "@" + *lit.language();
    }
    return out;
}

std::string serialize_triple(const Triple& t) {
    return "<" + t.subject.value() + "> <" + t.predicate.value() + "> " +
           serialize_term(t.object) + " .";
}

std::string serialize_ntriples(const TripleSet& g) {
    std::vector<std::string> lines;
    lines.reserve(g.size());
    for (const Triple& t : g) lines.push_back(serialize_triple(t));
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const std::string& line : lines) {
        out += line;
        out += '\n';
    }
    return out;
}

namespace {

void skip_ws(std::string_view s, std::size_t& pos) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
}

Iri parse_iriref(std::string_view s, std::size_t& pos) {
    if (pos >= s.size() || s[pos] != '<') {
        throw Error(ErrorKind::parse_error, "expected '<'");
    }
    auto end = s.find('>', ++pos);
    if (end == std::string_view::npos) {
        throw Error(ErrorKind::parse_error, "unterminated IRI");
    }
    std::string value(s.substr(pos, end - pos));
    pos = end + 1;
    return Iri(std::move(value));
}

Term parse_object(std::string_view s, std::size_t& pos) {
    if (pos < s.size() && s[pos] == '<') return parse_iriref(s, pos);
    if (pos >= s.size() || s[pos] != '"') {
        throw Error(ErrorKind::parse_error, "expected IRI or literal object");
    }
    ++pos;
    std::string raw;
    bool closed = false;
    while (pos < s.size()) {
        char c = s[pos];
        if (c == '\\') {
            if (pos + 1 >= s.size()) throw Error(ErrorKind::parse_error, "dangling backslash");
            raw.push_back(c);
            raw.push_back(s[pos + 1]);
            pos += 2;
            continue;
        }
        if (c == '"') {
            closed = true;
            ++pos;
            break;
        }
        raw.push_back(c);
        ++pos;
    }
    if (!closed) throw Error(ErrorKind::parse_error, "unterminated literal");
    std::string lexical = unescape_literal(raw);
    if (pos + 1 < s.size() && s[pos] == '^' && s[pos + 1] == '^') {
        pos += 2;
        Iri dt = parse_iriref(s, pos);
        return Literal::typed(std::move(lexical), std::move(dt));
    }
    if (pos < s.size() && s[pos] == '@') {
        ++pos;
        std::size_t start = pos;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '-')) {
            ++pos;
        }
        return Literal::lang(std::move(lexical), std::string(s.substr(start, pos - start)));
    }
    return Literal::plain(std::move(lexical));
}

}  // namespace

Triple parse_ntriples_line(std::string_view line) {
    std::size_t pos = 0;
    skip_ws(line, pos);
    if (pos + 1 < line.size() && line[pos] == '_' && line[pos + 1] == ':') {
        throw Error(ErrorKind::parse_error, "blank nodes are not representable");
    }
    Iri subject = parse_iriref(line, pos);
    skip_ws(line, pos);
    Iri predicate = parse_iriref(line, pos);
    skip_ws(line, pos);
    if (pos + 1 < line.size() && line[pos] == '_' && line[pos + 1] == ':') {
        throw Error(ErrorKind::parse_error, "blank nodes are not representable");
    }
    Term object = parse_object(line, pos);
    skip_ws(line, pos);
    if (pos >= line.size() || line[pos] != '.') {
        throw Error(ErrorKind::parse_error, "missing terminating '.'");
    }
    ++pos;
    skip_ws(line, pos);
    if (pos != line.size() && line[pos] != '#') {
        throw Error(ErrorKind::parse_error, "trailing content after '.'");
    }
    return Triple{std::move(subject), std::move(predicate), std::move(object)};
}

TripleSet read_ntriples(std::istream& in) {
    TripleSet g;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t pos = 0;
        skip_ws(line, pos);
        if (pos == line.size() || line[pos] == '#') continue;
        try {
            g.insert(parse_ntriples_line(line));
        } catch (const Error& e) {
            throw Error(ErrorKind::parse_error,
                        "line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return g;
}

TripleSet read_ntriples(const std::string& text) {
    std::istringstream in(text);
    return read_ntriples(in);
}

namespace {

bool is_gz_path(const std::filesystem::path& path) { return path.extension() == ".gz"; }

std::string gz_read_all(const std::filesystem::path& path) {
    gzFile f = gzopen(path.string().c_str(), "rb");
    if (!f) throw Error(ErrorKind::io_error, "cannot open " + path.string());
    std::string out;
    char buf[1 << 16];
    int n = 0;
    while ((n = gzread(f, buf, sizeof buf)) > 0) out.append(buf, static_cast<std::size_t>(n));
    bool bad = n < 0;
    gzclose(f);
    if (bad) throw Error(ErrorKind::io_error, "gzip read failed for " + path.string());
    return out;
}

void gz_write_all(const std::filesystem::path& path, const std::string& data) {
    gzFile f = gzopen(path.string().c_str(), "wb");
    if (!f) throw Error(ErrorKind::io_error, "cannot open " + path.string());
    bool bad = !data.empty() &&
               gzwrite(f, data.data(), static_cast<unsigned>(data.size())) !=
                   static_cast<int>(data.size());
    gzclose(f);
    if (bad) throw Error(ErrorKind::io_error, "gzip write failed for " + path.string());
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
    if (is_gz_path(path)) return gz_read_all(path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io_error, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (is_gz_path(path)) {
        gz_write_all(path, text);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io_error, "cannot open " + path.string());
    out << text;
    if (!out) throw Error(ErrorKind::io_error, "write failed for " + path.string());
}

TripleSet read_ntriples_file(const std::filesystem::path& path) {
    return read_ntriples(read_text_file(path));
}

void write_ntriples_file(const std::filesystem::path& path, const TripleSet& g) {
    write_text_file(path, serialize_ntriples(g));
}

const std::array<std::string_view, 16>& entity_type_names() {
    static const std::array<std::string_view, 16> names = {
        "acquisitions", "addresses",      "categories", "degrees",
        "funding_rounds", "funds",        "images",     "investments",
        "ipos",         "jobs",           "locations",  "news",
        "organizations", "people",        "videos",     "websites",
    };
    return names;
}

bool is_entity_type(std::string_view name) {
    const auto& names = entity_type_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

bool is_valid_permalink(std::string_view permalink) {
    if (permalink.empty()) return false;
    return std::all_of(permalink.begin(), permalink.end(), [](unsigned char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
    });
}

Iri mint_entity_iri(const Iri& base, std::string_view entity_type, std::string_view permalink) {
    if (!is_entity_type(entity_type)) {
        throw Error(ErrorKind::invalid_type, "unknown entity type \"" + std::string(entity_type) + "\"");
    }
    if (!is_valid_permalink(permalink)) {
        throw Error(ErrorKind::invalid_permalink, "bad permalink \"" + std::string(permalink) + "\"");
    }
    std::string b = base.value();
    while (!b.empty() && b.back() == '/') b.pop_back();
    return Iri(b + "/api/" + std::string(entity_type) + "/" + std::string(permalink));
}

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::invalid_type: return "invalid-type";
        case ErrorKind::invalid_permalink: return "invalid-permalink";
        case ErrorKind::invalid_field: return "invalid-field";
        case ErrorKind::invalid_literal: return "invalid-literal";
        case ErrorKind::invalid_trust: return "invalid-trust";
        case ErrorKind::invalid_date: return "invalid-date";
        case ErrorKind::wrong_payload: return "wrong-payload";
        case ErrorKind::parse_error: return "parse-error";
        case ErrorKind::unparseable_url: return "unparseable-url";
        case ErrorKind::invalid_key: return "invalid-key";
        case ErrorKind::unknown_entity: return "unknown-entity";
        case ErrorKind::rate_exceeded: return "rate-exceeded";
        case ErrorKind::foreign_redirect: return "foreign-redirect";
        case ErrorKind::upstream_error: return "upstream-error";
        case ErrorKind::unsupported_scheme: return "unsupported-scheme";
        case ErrorKind::malformed_credentials: return "malformed-credentials";
        case ErrorKind::not_acceptable: return "not-acceptable";
        case ErrorKind::schema_error: return "schema-error";
        case ErrorKind::io_error: return "io-error";
        case ErrorKind::checkpoint_corrupt: return "checkpoint-corrupt";
    }
    return "error";
}

namespace wk {

namespace {
Iri make(std::string_view ns, std::string_view local) {
    return Iri(std::string(ns) + std::string(local));
}
}  // namespace

#define CBLD_WK_IRI(fn, ns, local)            \
    const Iri& fn() {                         \
        static const Iri iri = make(ns, local); \
        return iri;                           \
    }

CBLD_WK_IRI(rdf_type, rdf_ns, "type")
CBLD_WK_IRI(rdfs_label, rdfs_ns, "label")
CBLD_WK_IRI(rdfs_sub_class_of, rdfs_ns, "subClassOf")
CBLD_WK_IRI(rdfs_sub_property_of, rdfs_ns, "subPropertyOf")
CBLD_WK_IRI(rdfs_is_defined_by, rdfs_ns, "isDefinedBy")
CBLD_WK_IRI(owl_class, owl_ns, "Class")
CBLD_WK_IRI(owl_ontology, owl_ns, "Ontology")
CBLD_WK_IRI(owl_datatype_property, owl_ns, "DatatypeProperty")
CBLD_WK_IRI(owl_object_property, owl_ns, "ObjectProperty")
CBLD_WK_IRI(owl_equivalent_class, owl_ns, "equivalentClass")
CBLD_WK_IRI(owl_equivalent_property, owl_ns, "equivalentProperty")
CBLD_WK_IRI(owl_same_as, owl_ns, "sameAs")
CBLD_WK_IRI(xsd_boolean, xsd_ns, "boolean")
CBLD_WK_IRI(xsd_integer, xsd_ns, "integer")
CBLD_WK_IRI(xsd_decimal, xsd_ns, "decimal")
CBLD_WK_IRI(xsd_date, xsd_ns, "date")
CBLD_WK_IRI(xsd_g_year_month, xsd_ns, "gYearMonth")
CBLD_WK_IRI(xsd_g_year, xsd_ns, "gYear")
CBLD_WK_IRI(xsd_string, xsd_ns, "string")
CBLD_WK_IRI(voaf_vocabulary, voaf_ns, "Vocabulary")
CBLD_WK_IRI(dcterms_title, dcterms_ns, "title")
CBLD_WK_IRI(vann_preferred_namespace_prefix, vann_ns, "preferredNamespacePrefix")
CBLD_WK_IRI(vann_preferred_namespace_uri, vann_ns, "preferredNamespaceUri")
CBLD_WK_IRI(void_dataset, void_ns, "Dataset")
CBLD_WK_IRI(void_linkset, void_ns, "Linkset")
CBLD_WK_IRI(void_triples, void_ns, "triples")
CBLD_WK_IRI(void_entities, void_ns, "entities")
CBLD_WK_IRI(void_classes, void_ns, "classes")
CBLD_WK_IRI(void_properties, void_ns, "properties")
CBLD_WK_IRI(void_class_partition, void_ns, "classPartition")
CBLD_WK_IRI(void_class, void_ns, "class")
CBLD_WK_IRI(void_subset, void_ns, "subset")
CBLD_WK_IRI(void_link_predicate, void_ns, "linkPredicate")
CBLD_WK_IRI(void_subjects_target, void_ns, "subjectsTarget")
CBLD_WK_IRI(foaf_homepage, foaf_ns, "homepage")
CBLD_WK_IRI(foaf_name, foaf_ns, "name")

#undef CBLD_WK_IRI

}  // namespace wk

}  // namespace cbld
