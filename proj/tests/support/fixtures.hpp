#pragma once

#include <set>
#include <string>
#include <vector>

#include "cbld/crawler.hpp"
#include "cbld/mock_upstream.hpp"

namespace testfix {

// Handcrafted corpus: four entity types, one relation larger than the
// default page size, trust-coded dates, unicode and escape-needing strings.
cbld::FixtureCorpus small_corpus();

// Deterministic generated corpus with `entity_count` entities spread over
// organizations, people, categories and funding rounds.
cbld::FixtureCorpus generated_corpus(std::size_t entity_count = 50);

// One seed row per fixture entity.
std::vector<cbld::SeedRow> seeds_for(const cbld::FixtureCorpus& corpus);

// Brute-force flattening of the fixture JSON into expected N-Triples
// lines, written independently of the transform/crawl pipeline: type line,
// typed property literals, and one object triple per relationship item
// (the full lists, paging ignored).
std::set<std::string> flatten_expected_lines(const cbld::FixtureCorpus& corpus,
                                             const std::string& base);

// Predicted number of upstream requests for a full crawl of `corpus`
// seeded with every entity: index pages + details + extra relation pages.
std::size_t predicted_requests(const cbld::FixtureCorpus& corpus, std::size_t page_size);

}  // namespace testfix
