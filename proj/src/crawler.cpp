#include "cbld/crawler.hpp"

#include <unistd.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <fstream>
#include <queue>
#include <sstream>

#include "cbld/transform.hpp"
#include "cbld/vocab.hpp"

namespace cbld {

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

}  // namespace

SeedIngest ingest_seed_csv(std::istream& in, const SeedCsvConfig& config) {
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorKind::schema_error, "seed CSV is empty");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> header = split_csv_row(line);
    auto column = [&](const std::string& name) -> std::size_t {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw Error(ErrorKind::schema_error, "seed CSV lacks column \"" + name + "\"");
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    std::size_t type_col = column(config.type_column);
    std::size_t permalink_col = column(config.permalink_column);

    SeedIngest result;
    std::set<std::pair<std::string, std::string>> seen;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields = split_csv_row(line);
        if (fields.size() <= std::max(type_col, permalink_col)) {
            ++result.skipped;
            continue;
        }
        const std::string& type = fields[type_col];
        const std::string& permalink = fields[permalink_col];
        if (!is_entity_type(type) || !is_valid_permalink(permalink)) {
            ++result.skipped;
            continue;
        }
        if (seen.emplace(type, permalink).second) {
            result.rows.push_back({type, permalink});
        }
    }
    return result;
}

SeedIngest ingest_seed_csv(const std::filesystem::path& path, const SeedCsvConfig& config) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io_error, "cannot open " + path.string());
    return ingest_seed_csv(in, config);
}

CrawlStats compute_stats(const TripleSet& dump) {
    CrawlStats stats;
    stats.unique_triples = dump.size();

    std::map<std::string, std::set<std::string>> subjects_by_class;
    std::set<std::string> typed_subjects;
    std::set<std::string> predicates;

    for (const Triple& t : dump) {
        if (t.predicate == wk::rdf_type()) {
            if (const Iri* cls = std::get_if<Iri>(&t.object)) {
                subjects_by_class[cls->value()].insert(t.subject.value());
                typed_subjects.insert(t.subject.value());
            }
            continue;
        }
        predicates.insert(t.predicate.value());
        if (std::holds_alternative<Iri>(t.object)) {
            ++stats.object_properties[t.predicate.value()];
        } else {
            ++stats.datatype_properties[t.predicate.value()];
        }
        if (t.predicate == wk::owl_same_as()) ++stats.sameas_links;
    }

    for (const auto& [cls, subjects] : subjects_by_class) {
        stats.instances_by_class[cls] = subjects.size();
    }
    stats.entities = typed_subjects.size();
    stats.classes = subjects_by_class.size();
    stats.properties = predicates.size();
    return stats;
}

void write_stats_tsv(std::ostream& out, const CrawlStats& stats) {
    out << "kind\tname\tcount\n";
    for (const auto& [cls, count] : stats.instances_by_class) {
        auto type = entity_type_for_class(Iri(cls));
        out << "entity_type\t" << (type ? std::string(*type) : cls) << "\t" << count << "\n";
    }
    for (const auto& [pred, count] : stats.object_properties) {
        out << "object_property\t" << pred << "\t" << count << "\n";
    }
    for (const auto& [pred, count] : stats.datatype_properties) {
        out << "datatype_property\t" << pred << "\t" << count << "\n";
    }
    out << "total\tunique_triples\t" << stats.unique_triples << "\n";
    out << "total\tentities\t" << stats.entities << "\n";
    out << "total\tclasses\t" << stats.classes << "\n";
    out << "total\tproperties\t" << stats.properties << "\n";
    out << "total\tsameas_links\t" << stats.sameas_links << "\n";
}

TripleSet emit_void(const CrawlStats& stats, const Iri& dataset_iri) {
    TripleSet g;
    auto count_literal = [](std::size_t n) {
        return Literal::typed(std::to_string(n), wk::xsd_integer());
    };

    g.insert({dataset_iri, wk::rdf_type(), wk::void_dataset()});
    g.insert({dataset_iri, wk::void_triples(), count_literal(stats.unique_triples)});
    g.insert({dataset_iri, wk::void_entities(), count_literal(stats.entities)});
    g.insert({dataset_iri, wk::void_classes(), count_literal(stats.classes)});
    g.insert({dataset_iri, wk::void_properties(), count_literal(stats.properties)});

    for (const auto& [cls, count] : stats.instances_by_class) {
        Iri class_iri(cls);
        auto type = entity_type_for_class(class_iri);
        std::string local = type ? std::string(*type)
                                 : cls.substr(cls.find_last_of("#/") + 1);
        Iri partition(dataset_iri.value() + "/class/" + local);
        g.insert({dataset_iri, wk::void_class_partition(), partition});
        g.insert({partition, wk::void_class(), class_iri});
        g.insert({partition, wk::void_entities(), count_literal(count)});
    }

    Iri linkset(dataset_iri.value() + "/linkset/sameas");
    g.insert({dataset_iri, wk::void_subset(), linkset});
    g.insert({linkset, wk::rdf_type(), wk::void_linkset()});
    g.insert({linkset, wk::void_subjects_target(), dataset_iri});
    g.insert({linkset, wk::void_link_predicate(), wk::owl_same_as()});
    g.insert({linkset, wk::void_triples(), count_literal(stats.sameas_links)});
    return g;
}

LineDeduper::LineDeduper(std::size_t memory_limit_lines, std::filesystem::path spill_dir)
    : limit_(std::max<std::size_t>(memory_limit_lines, 1)), spill_dir_(std::move(spill_dir)) {}

LineDeduper::~LineDeduper() {
    for (const auto& run : runs_) {
        std::error_code ec;
        std::filesystem::remove(run, ec);
    }
}

void LineDeduper::add(std::string line) {
    lines_.insert(std::move(line));
    ++added_;
    if (lines_.size() > limit_) spill();
}

void LineDeduper::spill() {
    static std::atomic<unsigned> instance_counter{0};
    if (runs_.empty()) instance_id_ = instance_counter++;
    std::filesystem::path run =
        spill_dir_ / ("dedup-run-" + std::to_string(::getpid()) + "-" +
                      std::to_string(instance_id_) + "-" + std::to_string(runs_.size()) +
                      ".tmp");
    std::ofstream out(run, std::ios::binary);
    if (!out) throw Error(ErrorKind::io_error, "cannot open spill file " + run.string());
    for (const std::string& line : lines_) out << line << '\n';
    out.flush();
    if (!out) throw Error(ErrorKind::io_error, "spill write failed");
    runs_.push_back(run);
    lines_.clear();
}

std::vector<std::string> LineDeduper::finish() {
    if (runs_.empty()) {
        return {lines_.begin(), lines_.end()};
    }
    if (!lines_.empty()) spill();

    std::vector<std::ifstream> streams;
    streams.reserve(runs_.size());
    for (const auto& run : runs_) {
        streams.emplace_back(run, std::ios::binary);
        if (!streams.back()) {
            throw Error(ErrorKind::io_error, "cannot reopen spill file " + run.string());
        }
    }

    using Head = std::pair<std::string, std::size_t>;
    auto greater = [](const Head& a, const Head& b) { return a.first > b.first; };
    std::priority_queue<Head, std::vector<Head>, decltype(greater)> heap(greater);

    std::string line;
    for (std::size_t i = 0; i < streams.size(); ++i) {
        if (std::getline(streams[i], line)) heap.emplace(std::move(line), i);
    }

    std::vector<std::string> merged;
    while (!heap.empty()) {
        auto [value, idx] = heap.top();
        heap.pop();
        if (merged.empty() || merged.back() != value) merged.push_back(value);
        if (std::getline(streams[idx], line)) heap.emplace(std::move(line), idx);
    }
    return merged;
}

namespace {

// A crawl unit is one upstream page, keyed by its relative path:
//   "organizations"                              index page 1
//   "organizations?page=2"                       later index page
//   "organizations/facebook"                     entity detail
//   "organizations/facebook/acquisitions?page=2" relation expansion page
enum class UnitKind { index_page, detail, relation_page };

UnitKind classify_unit(const std::string& path) {
    std::string_view without_query(path);
    auto q = without_query.find('?');
    if (q != std::string_view::npos) without_query = without_query.substr(0, q);
    auto slashes = std::count(without_query.begin(), without_query.end(), '/');
    if (slashes == 0) return UnitKind::index_page;
    if (slashes == 1) return UnitKind::detail;
    return UnitKind::relation_page;
}

// Append-only crawl state: "todo <path>" when a unit is discovered,
// "done <path>" once its triples are safely journaled.
class Checkpoint {
public:
    Checkpoint(std::filesystem::path log_path, bool resume)
        : log_path_(std::move(log_path)), journal_path_(log_path_.string() + ".triples") {
        if (resume) replay();
        log_.open(log_path_, std::ios::app | std::ios::binary);
        if (!log_) throw Error(ErrorKind::io_error, "cannot open checkpoint " + log_path_.string());
        journal_.open(journal_path_, std::ios::app | std::ios::binary);
        if (!journal_) {
            throw Error(ErrorKind::io_error, "cannot open journal " + journal_path_.string());
        }
    }

    void discover(const std::string& path) {
        if (done_.count(path) || queued_.count(path)) return;
        queued_.insert(path);
        pending_[static_cast<int>(classify_unit(path))].push_back(path);
        log_ << "todo " << path << '\n';
        log_.flush();
    }

    void journal_lines(const std::vector<std::string>& lines) {
        for (const std::string& line : lines) journal_ << line << '\n';
        journal_.flush();
        if (!journal_) throw Error(ErrorKind::io_error, "journal write failed");
        journaled_ += lines.size();
    }

    void complete(const std::string& path) {
        done_.insert(path);
        log_ << "done " << path << '\n';
        log_.flush();
        if (!log_) throw Error(ErrorKind::io_error, "checkpoint write failed");
    }

    // Next pending unit, index pages before details before relation pages.
    std::optional<std::string> next() {
        for (auto& queue : pending_) {
            while (!queue.empty()) {
                std::string path = queue.front();
                queue.pop_front();
                if (!done_.count(path)) return path;
            }
        }
        return std::nullopt;
    }

    void feed_journal_into(LineDeduper& dedup) const {
        if (!std::filesystem::exists(journal_path_)) return;
        std::ifstream in(journal_path_, std::ios::binary);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty()) dedup.add(line);
        }
    }

    std::size_t journaled() const noexcept { return journaled_; }

private:
    void replay() {
        if (!std::filesystem::exists(log_path_)) return;
        std::ifstream in(log_path_, std::ios::binary);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            std::string path;
            if (line.rfind("todo ", 0) == 0) {
                path = line.substr(5);
            } else if (line.rfind("done ", 0) == 0) {
                done_.insert(line.substr(5));
                continue;
            } else {
                throw Error(ErrorKind::checkpoint_corrupt,
                            log_path_.string() + " line " + std::to_string(lineno) +
                                ": unrecognized record");
            }
            if (path.empty()) {
                throw Error(ErrorKind::checkpoint_corrupt,
                            log_path_.string() + " line " + std::to_string(lineno) + ": empty path");
            }
            if (queued_.insert(path).second) {
                pending_[static_cast<int>(classify_unit(path))].push_back(path);
            }
        }
    }

    std::filesystem::path log_path_;
    std::filesystem::path journal_path_;
    std::ofstream log_;
    std::ofstream journal_;
    std::set<std::string> done_;
    std::set<std::string> queued_;
    std::array<std::deque<std::string>, 3> pending_;
    std::size_t journaled_ = 0;
};

std::vector<std::string> serialize_sorted(const TripleSet& g) {
    std::vector<std::string> lines;
    lines.reserve(g.size());
    for (const Triple& t : g) lines.push_back(serialize_triple(t));
    return lines;
}

}  // namespace

Crawler::Crawler(UpstreamClient& client, ApiKey key, Iri base)
    : client_(client), key_(std::move(key)), base_(std::move(base)) {}

CrawlOutcome Crawler::run(const std::vector<SeedRow>& seeds, const CrawlOptions& options) {
    bool checkpoint_exists = std::filesystem::exists(options.checkpoint);
    if (options.fresh && options.resume) {
        throw Error(ErrorKind::checkpoint_corrupt, "--fresh and --resume are mutually exclusive");
    }
    if (checkpoint_exists && !options.resume && !options.fresh) {
        throw Error(ErrorKind::checkpoint_corrupt,
                    "checkpoint " + options.checkpoint.string() +
                        " already exists; pass resume or fresh");
    }
    if (options.fresh) {
        std::error_code ec;
        std::filesystem::remove(options.checkpoint, ec);
        std::filesystem::remove(options.checkpoint.string() + ".triples", ec);
        std::filesystem::remove(options.checkpoint.string() + ".errors", ec);
    }

    Checkpoint checkpoint(options.checkpoint, options.resume && checkpoint_exists);

    // Seeds define which entity-type indexes get crawled and contribute
    // detail pages of their own.
    for (const SeedRow& seed : seeds) {
        checkpoint.discover(seed.entity_type);
    }
    for (const SeedRow& seed : seeds) {
        checkpoint.discover(seed.entity_type + "/" + seed.permalink);
    }

    CrawlOutcome outcome;
    SameAsStore empty_store;

    std::ofstream error_log(options.checkpoint.string() + ".errors",
                            std::ios::app | std::ios::binary);
    auto record_error = [&](const std::string& message) {
        outcome.error_log.push_back(message);
        error_log << message << '\n';
        error_log.flush();
    };

    auto fetch_unit = [&](const std::string& path) -> std::optional<FetchResult> {
        for (int attempt = 0; attempt < 2; ++attempt) {
            try {
                ++outcome.requests;
                return client_.fetch(path, key_);
            } catch (const Error& e) {
                // Transient upstream trouble gets one more try; anything
                // else is recorded and the unit abandoned.
                if (e.kind() == ErrorKind::upstream_error && attempt == 0) continue;
                record_error(path + ": " + e.what());
                return std::nullopt;
            }
        }
        return std::nullopt;
    };

    auto process_unit = [&](const std::string& path, const FetchResult& result) {
        switch (classify_unit(path)) {
            case UnitKind::index_page: {
                if (!result.envelope.has_summary()) {
                    record_error(path + ": expected a collection page");
                    return;
                }
                const SummaryPage& page = result.envelope.summary();
                for (const ItemStub& item : page.items) {
                    checkpoint.discover(item.api_path);
                }
                if (page.next_page_url) {
                    checkpoint.discover(client_.relativize(*page.next_page_url));
                }
                return;
            }
            case UnitKind::detail: {
                if (!result.envelope.has_detail()) {
                    record_error(path + ": expected an entity detail");
                    return;
                }
                EntityDetail detail = strip_metadata(result.envelope);
                TransformLog log;
                TripleSet g = entity_to_triples(detail, empty_store, base_, &log);
                for (const std::string& message : log.messages) {
                    record_error(path + ": " + message);
                }
                checkpoint.journal_lines(serialize_sorted(g));
                for (const auto& [relation, rel_page] : detail.relationships) {
                    if (rel_page.next_page_url) {
                        checkpoint.discover(client_.relativize(*rel_page.next_page_url));
                    }
                }
                return;
            }
            case UnitKind::relation_page: {
                if (!result.envelope.has_summary()) {
                    record_error(path + ": expected a relation page");
                    return;
                }
                const SummaryPage& page = result.envelope.summary();
                // "{type}/{permalink}/{relation}?page=N"
                auto first = path.find('/');
                auto second = path.find('/', first + 1);
                auto query = path.find('?');
                std::string type = path.substr(0, first);
                std::string permalink = path.substr(first + 1, second - first - 1);
                std::string relation = path.substr(
                    second + 1, (query == std::string::npos ? path.size() : query) - second - 1);

                Iri subject = mint_entity_iri(base_, type, permalink);
                TripleSet g;
                Iri predicate = property_iri(relation);
                for (const ItemStub& item : page.items) {
                    g.insert({subject, predicate,
                              mint_entity_iri(base_, item.entity_type, item.permalink)});
                }
                checkpoint.journal_lines(serialize_sorted(g));
                if (page.next_page_url) {
                    checkpoint.discover(client_.relativize(*page.next_page_url));
                }
                return;
            }
        }
    };

    while (auto unit = checkpoint.next()) {
        if (options.stop_after_requests > 0 && outcome.requests >= options.stop_after_requests) {
            outcome.completed = false;
            break;
        }
        const std::string& path = *unit;
        std::optional<FetchResult> result = fetch_unit(path);
        if (result) {
            try {
                process_unit(path, *result);
            } catch (const Error& e) {
                // Bad payloads (foreign next links, unmintable stubs) are
                // recorded like fetch failures; the crawl moves on.
                record_error(path + ": " + e.what());
            }
        }
        checkpoint.complete(path);
    }

    outcome.triples_written = checkpoint.journaled();
    if (!outcome.completed) return outcome;

    // All pages fetched; fold the journal into the final deduplicated dump.
    LineDeduper dedup(options.dedup_memory_lines, options.checkpoint.parent_path().empty()
                                                      ? std::filesystem::temp_directory_path()
                                                      : options.checkpoint.parent_path());
    checkpoint.feed_journal_into(dedup);
    std::vector<std::string> lines = dedup.finish();

    std::string text;
    for (const std::string& line : lines) {
        text += line;
        text += '\n';
    }
    write_text_file(options.out, text);

    TripleSet dump;
    for (const std::string& line : lines) dump.insert(parse_ntriples_line(line));
    outcome.stats = compute_stats(dump);

    Iri dataset = options.dataset_iri.value_or(Iri(base_.value() + "/dataset"));
    if (options.void_out) {
        write_ntriples_file(*options.void_out, emit_void(outcome.stats, dataset));
    }
    if (options.stats_out) {
        std::ofstream out(*options.stats_out);
        if (!out) throw Error(ErrorKind::io_error, "cannot open " + options.stats_out->string());
        write_stats_tsv(out, outcome.stats);
    }
    return outcome;
}

}  // namespace cbld
