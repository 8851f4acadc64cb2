#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>

#include "cbld/crawler.hpp"
#include "cbld/vocab.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Builds a full N-Triples dump by crawling the upstream API"};

    std::vector<std::string> seed_files;
    std::string out;
    std::string void_out;
    std::string stats_out;
    std::string ontology_out;
    std::string checkpoint = "crawl-checkpoint.log";
    bool resume = false;
    bool fresh = false;
    long rate_ms = 1000;
    std::string upstream_base = "http://127.0.0.1:8024";  // the mock's default address
    std::string base_iri = "http://linked-crunchbase.org";
    cbld::SeedCsvConfig csv_config;

    app.add_option("--seeds", seed_files, "Seed CSV files")->required()->expected(-1);
    app.add_option("--out", out, "Dump path (.gz for gzip)")->required();
    app.add_option("--void", void_out, "VoID metadata output path");
    app.add_option("--stats", stats_out, "Statistics TSV output path");
    app.add_option("--ontology", ontology_out, "Also write the vocabulary as N-Triples");
    app.add_option("--checkpoint", checkpoint, "Checkpoint log path");
    app.add_flag("--resume", resume, "Continue from an existing checkpoint");
    app.add_flag("--fresh", fresh, "Discard any existing checkpoint");
    app.add_option("--rate-ms", rate_ms, "Minimum interval between upstream requests");
    app.add_option("--upstream", upstream_base, "Upstream API base URL")
        ->envname("UPSTREAM_BASE");
    app.add_option("--base-iri", base_iri, "Base IRI minted into the dump");
    app.add_option("--type-column", csv_config.type_column, "Seed CSV entity-type column");
    app.add_option("--permalink-column", csv_config.permalink_column,
                   "Seed CSV permalink column");

    CLI11_PARSE(app, argc, argv);

    const char* key_env = std::getenv("CB_API_KEY");
    if (!key_env || !*key_env) {
        std::cerr << "CB_API_KEY is not set\n";
        return 2;
    }

    try {
        std::vector<cbld::SeedRow> seeds;
        std::size_t skipped = 0;
        for (const std::string& file : seed_files) {
            cbld::SeedIngest ingest = cbld::ingest_seed_csv(file, csv_config);
            seeds.insert(seeds.end(), ingest.rows.begin(), ingest.rows.end());
            skipped += ingest.skipped;
        }
        std::cout << "seeds: " << seeds.size() << " rows";
        if (skipped > 0) std::cout << " (" << skipped << " skipped)";
        std::cout << std::endl;

        auto gate = std::make_shared<cbld::RateGate>(
            cbld::RateLimitConfig{std::chrono::milliseconds(rate_ms)});
        cbld::UpstreamClient client(upstream_base, gate);
        cbld::Crawler crawler(client, cbld::ApiKey(key_env), cbld::Iri(base_iri));

        cbld::CrawlOptions options;
        options.out = out;
        if (!void_out.empty()) options.void_out = void_out;
        if (!stats_out.empty()) options.stats_out = stats_out;
        options.checkpoint = checkpoint;
        options.resume = resume;
        options.fresh = fresh;

        if (!ontology_out.empty()) {
            cbld::write_ntriples_file(ontology_out, cbld::emit_ontology());
        }

        cbld::CrawlOutcome outcome = crawler.run(seeds, options);
        std::cout << "requests " << outcome.requests << ", unique triples "
                  << outcome.stats.unique_triples << ", fetch errors "
                  << outcome.error_log.size() << std::endl;
        for (const std::string& line : outcome.error_log) std::cerr << "error: " << line << "\n";
        return outcome.completed ? 0 : 3;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
}
