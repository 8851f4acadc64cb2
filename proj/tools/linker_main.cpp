#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "cbld/linker.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Links local entities to an external RDF corpus via owl:sameAs"};

    std::string orgs_file;
    std::string people_file;
    std::vector<std::string> corpus_files;
    std::string out = "mappings.nt";
    std::string report_file = "report.txt";
    std::vector<std::string> homepage_preds;
    std::string name_pred;
    std::string birth_pred;

    app.add_option("--orgs", orgs_file, "N-Triples with local cbw:homepage_url triples");
    app.add_option("--people", people_file, "N-Triples with local cbw:name and cbw:born_on");
    app.add_option("--corpus", corpus_files, "External corpus N-Triples files")
        ->required()
        ->expected(-1);
    app.add_option("--out", out, "Mapping dump output path");
    app.add_option("--report", report_file, "Report output path");
    app.add_option("--homepage-pred", homepage_preds,
                   "Corpus homepage predicate IRI (repeatable)");
    app.add_option("--name-pred", name_pred, "Corpus name predicate IRI");
    app.add_option("--birth-pred", birth_pred, "Corpus birth-date predicate IRI");

    CLI11_PARSE(app, argc, argv);

    if (orgs_file.empty() && people_file.empty()) {
        std::cerr << "nothing to link: pass --orgs and/or --people\n";
        return 2;
    }

    try {
        cbld::CorpusPredicates predicates;
        if (!homepage_preds.empty()) {
            predicates.homepage.clear();
            for (const std::string& p : homepage_preds) predicates.homepage.push_back(cbld::Iri(p));
        }
        if (!name_pred.empty()) predicates.name_pred = cbld::Iri(name_pred);
        if (!birth_pred.empty()) predicates.birth_date = cbld::Iri(birth_pred);

        cbld::TripleSet corpus;
        for (const std::string& file : corpus_files) {
            corpus.merge(cbld::read_ntriples_file(file));
        }
        cbld::ExternalIndexes indexes = cbld::index_external_corpus(corpus, predicates);
        std::cout << "corpus: " << corpus.size() << " triples, " << indexes.homepages.size()
                  << " homepage keys, " << indexes.persons.size() << " person keys" << std::endl;

        cbld::LinkStats org_stats;
        cbld::LinkStats person_stats;
        std::vector<cbld::SameAsMapping> mappings;

        if (!orgs_file.empty()) {
            auto orgs = cbld::extract_local_orgs(cbld::read_ntriples_file(orgs_file));
            auto linked = cbld::link_organizations(std::move(orgs), indexes.homepages, org_stats);
            mappings.insert(mappings.end(), linked.begin(), linked.end());
        }
        if (!people_file.empty()) {
            auto people = cbld::extract_local_people(cbld::read_ntriples_file(people_file));
            auto linked = cbld::link_persons(std::move(people), indexes.persons, person_stats);
            mappings.insert(mappings.end(), linked.begin(), linked.end());
        }

        cbld::write_ntriples_file(out, cbld::emit_sameas_dump(mappings));

        std::ofstream report(report_file);
        if (!report) {
            std::cerr << "cannot open " << report_file << "\n";
            return 1;
        }
        cbld::write_link_report(report, org_stats, person_stats);

        std::cout << "mappings: " << mappings.size() << " (orgs " << org_stats.matched
                  << ", people " << person_stats.matched << "), ambiguous "
                  << org_stats.ambiguous + person_stats.ambiguous << std::endl;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 0;
}
