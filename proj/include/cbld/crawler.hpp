#pragma once

#include <deque>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cbld/rdf.hpp"
#include "cbld/upstream.hpp"

namespace cbld {

struct SeedRow {
    std::string entity_type;
    std::string permalink;

    bool operator==(const SeedRow&) const = default;
};

struct SeedCsvConfig {
    std::string type_column = "entity_type";
    std::string permalink_column = "permalink";
};

struct SeedIngest {
    std::vector<SeedRow> rows;  // deduplicated, file order
    std::size_t skipped = 0;    // malformed rows
};

// Reads seed rows from a CSV export. The header row names the columns;
// malformed or invalid rows are skipped and counted.
SeedIngest ingest_seed_csv(std::istream& in, const SeedCsvConfig& config = {});
SeedIngest ingest_seed_csv(const std::filesystem::path& path, const SeedCsvConfig& config = {});

struct CrawlStats {
    std::map<std::string, std::size_t> instances_by_class;  // class IRI -> count
    std::map<std::string, std::size_t> object_properties;   // predicate IRI -> triples
    std::map<std::string, std::size_t> datatype_properties;
    std::size_t unique_triples = 0;
    std::size_t sameas_links = 0;
    std::size_t entities = 0;    // distinct typed subjects
    std::size_t classes = 0;     // distinct rdf:type objects
    std::size_t properties = 0;  // distinct predicates, rdf:type excluded

    bool operator==(const CrawlStats&) const = default;
};

// Counts instances per class and triples per predicate. rdf:type is kept
// out of both property partitions.
CrawlStats compute_stats(const TripleSet& dump);

// TSV with columns kind, name, count.
void write_stats_tsv(std::ostream& out, const CrawlStats& stats);

// VoID description of a dump: dataset-level counts, one class partition
// per class, and a linkset for the owl:sameAs mappings.
TripleSet emit_void(const CrawlStats& stats, const Iri& dataset_iri);

// Set-of-lines deduplication that spills sorted runs to disk when the
// in-memory set exceeds its budget.
class LineDeduper {
public:
    explicit LineDeduper(std::size_t memory_limit_lines = 4'000'000,
                         std::filesystem::path spill_dir = std::filesystem::temp_directory_path());
    ~LineDeduper();

    void add(std::string line);
    std::size_t added() const noexcept { return added_; }

    // Sorted unique lines across memory and spill runs. The deduper is
    // spent afterwards.
    std::vector<std::string> finish();

private:
    void spill();

    std::size_t limit_;
    std::filesystem::path spill_dir_;
    std::set<std::string> lines_;
    std::vector<std::filesystem::path> runs_;
    std::size_t added_ = 0;
    unsigned instance_id_ = 0;
};

struct CrawlOptions {
    std::filesystem::path out;  // ".gz" suffix selects gzip
    std::optional<std::filesystem::path> void_out;
    std::optional<std::filesystem::path> stats_out;
    std::filesystem::path checkpoint;
    bool resume = false;
    bool fresh = false;
    std::optional<Iri> dataset_iri;          // defaults to {base}/dataset
    std::size_t dedup_memory_lines = 4'000'000;
    std::size_t stop_after_requests = 0;  // 0 = unlimited; test hook
};

struct CrawlOutcome {
    CrawlStats stats;
    std::size_t requests = 0;
    std::size_t triples_written = 0;  // journal lines, duplicates included
    std::vector<std::string> error_log;
    bool completed = true;
};

// Drives the three crawl passes (entity-type indexes, details, oversized
// relation pages) against the upstream client, deduplicates triples, and
// keeps an append-only checkpoint so interrupted crawls resume cleanly.
class Crawler {
public:
    Crawler(UpstreamClient& client, ApiKey key, Iri base);

    CrawlOutcome run(const std::vector<SeedRow>& seeds, const CrawlOptions& options);

private:
    UpstreamClient& client_;
    ApiKey key_;
    Iri base_;
};

}  // namespace cbld
