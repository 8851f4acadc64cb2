// Acceptance suite: one function per criterion, one PASS/FAIL line each.
// Run with no arguments for all criteria, or with a criterion number.

#include <httplib.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <regex>
#include <sstream>
#include <thread>
#include <vector>

#include "cbld/crawler.hpp"
#include "cbld/gateway.hpp"
#include "cbld/linker.hpp"
#include "cbld/transform.hpp"
#include "cbld/vocab.hpp"
#include "support/fixtures.hpp"
#include "support/jsonld_expand.hpp"

using namespace cbld;
using namespace std::chrono;
using namespace std::chrono_literals;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void expect(bool condition, const std::string& what) {
        if (!condition && ok) {
            ok = false;
            detail = what;
        }
    }
};

constexpr const char* kAuth = "Basic dGVzdC1rZXk6";  // base64("test-key:")
const ApiKey kKey{std::string("test-key")};
const Iri kBase{std::string("http://linked-crunchbase.org")};

MockConfig keyed_config(std::size_t page_size) {
    MockConfig config;
    config.page_size = page_size;
    config.valid_keys = {"test-key"};
    return config;
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() / ("cbld-acc-" + tag);
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::filesystem::path operator/(const std::string& name) const { return path / name; }
};

GatewayConfig gateway_config(const MockUpstream& mock) {
    GatewayConfig config;
    config.upstream_base = mock.base_url();
    return config;
}

CrawlOutcome run_crawl(MockUpstream& mock, const TempDir& dir, milliseconds rate,
                       std::size_t stop_after = 0, bool resume = false) {
    auto gate = std::make_shared<RateGate>(RateLimitConfig{rate});
    UpstreamClient client(mock.base_url(), gate);
    Crawler crawler(client, kKey, kBase);
    CrawlOptions options;
    options.out = dir / "dump.nt";
    options.void_out = dir / "void.nt";
    options.stats_out = dir / "stats.tsv";
    options.checkpoint = dir / "cp.log";
    options.stop_after_requests = stop_after;
    options.resume = resume;
    return crawler.run(testfix::seeds_for(mock.corpus()), options);
}

// 1. Round-trip fidelity: turtle and JSON-LD representations of every
// entity in a 50-entity corpus describe the same triples, no blank nodes,
// in under 10 seconds.
Check criterion1() {
    Check c;
    auto begin = steady_clock::now();

    MockUpstream mock(testfix::generated_corpus(50), keyed_config(8));
    mock.start();
    SameAsStore store;
    store.add(mint_entity_iri(kBase, "organizations", "org-0"),
              Iri("http://dbpedia.org/resource/Org0"));
    Gateway gateway(gateway_config(mock), std::make_shared<RateGate>(RateLimitConfig{1ms}),
                    store);
    gateway.start();
    httplib::Client client(gateway.base_url());

    std::size_t entities = 0;
    for (const FixtureEntity& e : mock.corpus().all()) {
        std::string path = "/api/" + e.api_path();
        auto turtle = client.Get(path, {{"Authorization", kAuth}, {"Accept", "text/turtle"}});
        auto ldjson =
            client.Get(path, {{"Authorization", kAuth}, {"Accept", "application/ld+json"}});
        c.expect(turtle && turtle->status == 200, path + ": turtle request failed");
        c.expect(ldjson && ldjson->status == 200, path + ": ld+json request failed");
        if (!c.ok) break;

        std::istringstream lines(turtle->body);
        std::string line;
        while (std::getline(lines, line)) {
            c.expect(line.rfind("_:", 0) != 0, path + ": blank node line in output");
        }

        TripleSet parsed = read_ntriples(turtle->body);
        TripleSet expanded = jsonld::expand(ldjson->body);
        c.expect(parsed == expanded, path + ": turtle and JSON-LD disagree");
        ++entities;
    }
    c.expect(entities == 50, "expected 50 entities, saw " + std::to_string(entities));

    auto elapsed = duration_cast<milliseconds>(steady_clock::now() - begin);
    c.expect(elapsed < 10s, "took " + std::to_string(elapsed.count()) + "ms, limit 10s");
    gateway.stop();
    return c;
}

// 2. Crawl oracle equivalence at page sizes 2 and 8, with the predicted
// request economy, in under 30 seconds at the 20 req/s test rate.
Check criterion2() {
    Check c;
    auto begin = steady_clock::now();

    for (std::size_t page_size : {std::size_t{2}, std::size_t{8}}) {
        MockUpstream mock(testfix::small_corpus(), keyed_config(page_size));
        mock.start();
        c.expect(mock.corpus().entity_types().size() >= 3, "corpus too narrow");

        TempDir dir("oracle-" + std::to_string(page_size));
        CrawlOutcome outcome = run_crawl(mock, dir, 50ms);

        std::set<std::string> got;
        std::istringstream in(read_text_file(dir / "dump.nt"));
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty()) got.insert(line);
        }
        auto expected = testfix::flatten_expected_lines(mock.corpus(), kBase.value());
        c.expect(got == expected,
                 "page size " + std::to_string(page_size) + ": dump differs from the oracle (" +
                     std::to_string(got.size()) + " vs " + std::to_string(expected.size()) +
                     " lines)");

        std::size_t predicted = testfix::predicted_requests(mock.corpus(), page_size);
        c.expect(outcome.requests == predicted,
                 "page size " + std::to_string(page_size) + ": " +
                     std::to_string(outcome.requests) + " requests, predicted " +
                     std::to_string(predicted));
        c.expect(mock.request_count() == predicted,
                 "mock log disagrees with the request economy");
    }

    auto elapsed = duration_cast<milliseconds>(steady_clock::now() - begin);
    c.expect(elapsed < 30s, "took " + std::to_string(elapsed.count()) + "ms, limit 30s");
    return c;
}

// 3. Rate contract: 10 concurrent fetches at min_interval 50ms show
// pairwise request-start gaps of at least 45ms in the mock's log.
Check criterion3() {
    Check c;
    MockUpstream mock(testfix::small_corpus(), keyed_config(8));
    mock.start();
    auto gate = std::make_shared<RateGate>(RateLimitConfig{50ms});
    UpstreamClient client(mock.base_url(), gate);

    std::vector<std::thread> workers;
    std::atomic<int> failures{0};
    for (int i = 0; i < 10; ++i) {
        workers.emplace_back([&] {
            try {
                client.fetch("organizations/facebook", kKey);
            } catch (...) {
                ++failures;
            }
        });
    }
    for (auto& w : workers) w.join();
    c.expect(failures == 0, "a concurrent fetch failed");

    auto log = mock.request_log();
    c.expect(log.size() == 10, "expected 10 logged requests");
    std::vector<steady_clock::time_point> starts;
    for (const auto& r : log) starts.push_back(r.time);
    std::sort(starts.begin(), starts.end());
    for (std::size_t i = 1; i < starts.size(); ++i) {
        auto gap = duration_cast<milliseconds>(starts[i] - starts[i - 1]);
        c.expect(gap >= 45ms, "gap " + std::to_string(gap.count()) + "ms below 45ms at index " +
                                  std::to_string(i));
    }
    return c;
}

// 4. Content negotiation matrix: exact status and Content-Type per Accept
// value; JSON is byte-identical to the upstream body.
Check criterion4() {
    Check c;
    MockUpstream mock(testfix::small_corpus(), keyed_config(8));
    mock.start();
    Gateway gateway(gateway_config(mock), std::make_shared<RateGate>(RateLimitConfig{1ms}));
    gateway.start();
    httplib::Client client(gateway.base_url());

    struct Row {
        const char* accept;  // nullptr = absent header
        int status;
        const char* content_type;
    };
    const Row matrix[] = {
        {"application/json", 200, "application/json"},
        {"application/ld+json", 200, "application/ld+json"},
        {"text/turtle", 200, "text/turtle"},
        {"*/*", 200, "text/turtle"},
        {nullptr, 200, "text/turtle"},
        {"text/html", 406, "text/plain"},
    };
    for (const Row& row : matrix) {
        httplib::Headers headers = {{"Authorization", kAuth}};
        if (row.accept) headers.insert({"Accept", row.accept});
        auto res = client.Get("/api/organizations/facebook", headers);
        std::string label = row.accept ? row.accept : "(absent)";
        c.expect(static_cast<bool>(res), label + ": no response");
        if (!res) continue;
        c.expect(res->status == row.status,
                 label + ": status " + std::to_string(res->status) + ", want " +
                     std::to_string(row.status));
        c.expect(res->get_header_value("Content-Type") == row.content_type,
                 label + ": content type \"" + res->get_header_value("Content-Type") +
                     "\", want \"" + row.content_type + "\"");
    }

    auto via_gateway = client.Get("/api/organizations/facebook",
                                  {{"Authorization", kAuth}, {"Accept", "application/json"}});
    httplib::Client direct(mock.base_url());
    auto upstream = direct.Get("/organizations/facebook?user_key=test-key");
    c.expect(via_gateway && upstream && via_gateway->body == upstream->body,
             "JSON body is not byte-identical to upstream");
    gateway.stop();
    return c;
}

// 5. Keyless licensing rule: anonymous responses are 200 with only
// owl:sameAs triples and never reach upstream.
Check criterion5() {
    Check c;
    MockUpstream mock(testfix::small_corpus(), keyed_config(8));
    mock.start();
    SameAsStore store;
    store.add(mint_entity_iri(kBase, "organizations", "facebook"),
              Iri("http://dbpedia.org/resource/Facebook"));
    Gateway gateway(gateway_config(mock), std::make_shared<RateGate>(RateLimitConfig{1ms}),
                    store);
    gateway.start();
    httplib::Client client(gateway.base_url());

    std::size_t upstream_requests = mock.request_count();
    const char* accepts[] = {"text/turtle", "application/ld+json", "application/json"};
    const char* paths[] = {"/api/organizations/facebook", "/api/people/ada",
                           "/api/organizations"};
    for (const char* path : paths) {
        for (const char* accept : accepts) {
            auto res = client.Get(path, {{"Accept", accept}});
            std::string label = std::string(path) + " as " + accept;
            c.expect(res && res->status == 200, label + ": not a 200");
            if (!res) continue;
            TripleSet g = accept == std::string("text/turtle") ? read_ntriples(res->body)
                                                               : jsonld::expand(res->body);
            for (const Triple& t : g) {
                c.expect(t.predicate == wk::owl_same_as(),
                         label + ": non-sameAs predicate " + t.predicate.value());
            }
            if (path == std::string("/api/organizations/facebook") &&
                accept == std::string("text/turtle")) {
                c.expect(g.size() == 1, label + ": expected exactly the stored mapping");
            }
        }
    }
    c.expect(mock.request_count() == upstream_requests,
             "keyless calls reached upstream: " + std::to_string(mock.request_count()) + " vs " +
                 std::to_string(upstream_requests));
    gateway.stop();
    return c;
}

// 6. Linker precision harness: 20 true org pairs + 20 true person pairs
// recovered exactly; homonym traps and FQDN collisions emit nothing; the
// ambiguity log has exactly the 3 collision entries.
Check criterion6() {
    Check c;

    TripleSet corpus;
    auto dbp = [](const std::string& n) { return Iri("http://dbpedia.org/resource/" + n); };
    auto foaf_homepage = wk::foaf_homepage();
    auto foaf_name = wk::foaf_name();
    Iri birth_pred("http://dbpedia.org/ontology/birthDate");

    TripleSet local_orgs;
    TripleSet local_people;
    std::vector<std::pair<Iri, Iri>> expected_pairs;

    // 20 true organization pairs.
    for (int i = 0; i < 20; ++i) {
        Iri external = dbp("TrueOrg" + std::to_string(i));
        corpus.insert({external, foaf_homepage,
                       Iri("http://true-org-" + std::to_string(i) + ".example/")});
        Iri local = mint_entity_iri(kBase, "organizations", "true-org-" + std::to_string(i));
        local_orgs.insert({local, property_iri("homepage_url"),
                           Literal::plain("https://www.true-org-" + std::to_string(i) +
                                          ".example/about")});
        expected_pairs.emplace_back(local, external);
    }
    // 3 FQDN collisions: two external candidates per key.
    for (int i = 0; i < 3; ++i) {
        std::string host = "http://collide-" + std::to_string(i) + ".example/";
        corpus.insert({dbp("CollideA" + std::to_string(i)), foaf_homepage, Iri(host)});
        corpus.insert({dbp("CollideB" + std::to_string(i)), foaf_homepage, Iri(host)});
        local_orgs.insert({mint_entity_iri(kBase, "organizations", "collide-" + std::to_string(i)),
                           property_iri("homepage_url"), Literal::plain(host)});
    }
    // 20 true person pairs.
    for (int i = 0; i < 20; ++i) {
        Iri external = dbp("TruePerson" + std::to_string(i));
        std::string name = "True Person " + std::to_string(i);
        std::string date = "198" + std::to_string(i % 10) + "-04-1" + std::to_string(i % 9);
        corpus.insert({external, foaf_name, Literal::plain(name)});
        corpus.insert({external, birth_pred, Literal::typed(date, wk::xsd_date())});
        Iri local = mint_entity_iri(kBase, "people", "true-person-" + std::to_string(i));
        local_people.insert({local, property_iri("name"), Literal::plain(name)});
        local_people.insert(
            {local, property_iri("born_on"), Literal::typed(date, wk::xsd_date())});
        expected_pairs.emplace_back(local, external);
    }
    // 5 homonym traps: same name, different birth date.
    for (int i = 0; i < 5; ++i) {
        std::string name = "Trap Name " + std::to_string(i);
        corpus.insert({dbp("TrapPerson" + std::to_string(i)), foaf_name, Literal::plain(name)});
        corpus.insert({dbp("TrapPerson" + std::to_string(i)), birth_pred,
                       Literal::typed("1950-06-0" + std::to_string(i + 1), wk::xsd_date())});
        Iri local = mint_entity_iri(kBase, "people", "trap-" + std::to_string(i));
        local_people.insert({local, property_iri("name"), Literal::plain(name)});
        local_people.insert({local, property_iri("born_on"),
                             Literal::typed("1990-07-0" + std::to_string(i + 1), wk::xsd_date())});
    }

    ExternalIndexes indexes = index_external_corpus(corpus, {});
    LinkStats org_stats;
    LinkStats person_stats;
    auto org_links = link_organizations(extract_local_orgs(local_orgs), indexes.homepages,
                                        org_stats);
    auto person_links = link_persons(extract_local_people(local_people), indexes.persons,
                                     person_stats);

    c.expect(org_links.size() == 20, std::to_string(org_links.size()) + " org links, want 20");
    c.expect(person_links.size() == 20,
             std::to_string(person_links.size()) + " person links, want 20");

    TripleSet dump = emit_sameas_dump(org_links);
    dump.merge(emit_sameas_dump(person_links));
    c.expect(dump.size() == 40, std::to_string(dump.size()) + " sameAs triples, want 40");
    for (const auto& [local, external] : expected_pairs) {
        c.expect(dump.contains({local, wk::owl_same_as(), external}),
                 "missing true pair for " + local.value());
    }
    c.expect(org_stats.ambiguity_log.size() == 3,
             std::to_string(org_stats.ambiguity_log.size()) + " org ambiguity entries, want 3");
    c.expect(person_stats.ambiguity_log.size() == 0,
             std::to_string(person_stats.ambiguity_log.size()) +
                 " person ambiguity entries, want 0");
    return c;
}

// 7. Vocabulary fidelity: the seven class equivalences and sixteen class
// declarations.
Check criterion7() {
    Check c;
    TripleSet g = emit_ontology();

    const std::pair<const char*, const char*> table[] = {
        {"Address", "Place"},     {"Image", "ImageObject"}, {"News", "NewsArticle"},
        {"Organization", "Organization"}, {"Person", "Person"},
        {"Video", "VideoObject"}, {"Website", "WebSite"},
    };
    std::size_t equivalences = 0;
    for (const Triple& t : g) {
        if (t.predicate == wk::owl_equivalent_class()) ++equivalences;
    }
    c.expect(equivalences == 7,
             std::to_string(equivalences) + " equivalentClass triples, want exactly 7");
    for (const auto& [local, external] : table) {
        Triple expected{Iri(std::string(wk::cbw_ns) + local), wk::owl_equivalent_class(),
                        Iri(std::string(wk::schema_ns) + external)};
        c.expect(g.contains(expected), std::string("missing cbw:") + local + " == schema:" +
                                           external);
    }

    std::size_t classes = 0;
    for (const Triple& t : g) {
        if (t.predicate == wk::rdf_type() && std::holds_alternative<Iri>(t.object) &&
            std::get<Iri>(t.object) == wk::owl_class()) {
            ++classes;
        }
    }
    c.expect(classes == 16, std::to_string(classes) + " owl:Class declarations, want 16");
    return c;
}

// 8. Resume determinism: killing a crawl at its midpoint and resuming
// yields a byte-identical dump.
Check criterion8() {
    Check c;

    TempDir straight_dir("resume-straight");
    std::size_t total_requests;
    {
        MockUpstream mock(testfix::small_corpus(), keyed_config(2));
        mock.start();
        CrawlOutcome outcome = run_crawl(mock, straight_dir, 1ms);
        c.expect(outcome.completed, "uninterrupted crawl did not complete");
        total_requests = outcome.requests;
    }

    TempDir resumed_dir("resume-killed");
    {
        MockUpstream mock(testfix::small_corpus(), keyed_config(2));
        mock.start();
        CrawlOutcome first = run_crawl(mock, resumed_dir, 1ms, total_requests / 2);
        c.expect(!first.completed, "the interrupted run unexpectedly completed");
    }
    {
        MockUpstream mock(testfix::small_corpus(), keyed_config(2));
        mock.start();
        CrawlOutcome second = run_crawl(mock, resumed_dir, 1ms, 0, true);
        c.expect(second.completed, "the resumed run did not complete");
    }

    c.expect(read_text_file(straight_dir / "dump.nt") == read_text_file(resumed_dir / "dump.nt"),
             "resumed dump differs from the uninterrupted dump");
    return c;
}

// 9. VoID consistency: the emitted VoID counts equal compute_stats over
// the dump for every test corpus.
Check criterion9() {
    Check c;
    struct Case {
        const char* name;
        FixtureCorpus corpus;
        std::size_t page_size;
    };
    Case cases[] = {
        {"small corpus, page size 2", testfix::small_corpus(), 2},
        {"small corpus, page size 8", testfix::small_corpus(), 8},
        {"generated corpus", testfix::generated_corpus(50), 8},
    };
    for (Case& one : cases) {
        MockUpstream mock(std::move(one.corpus), keyed_config(one.page_size));
        mock.start();
        TempDir dir("void");
        run_crawl(mock, dir, 1ms);

        TripleSet dump = read_ntriples_file(dir / "dump.nt");
        TripleSet expected_void =
            emit_void(compute_stats(dump), Iri(kBase.value() + "/dataset"));
        TripleSet actual_void = read_ntriples_file(dir / "void.nt");
        c.expect(actual_void == expected_void,
                 std::string(one.name) + ": VoID does not match compute_stats");
    }
    return c;
}

struct Criterion {
    int number;
    const char* label;
    std::function<Check()> run;
};

const Criterion kCriteria[] = {
    {1, "round-trip fidelity (N-Triples vs JSON-LD expansion, 50 entities)", criterion1},
    {2, "crawl oracle equivalence and request economy", criterion2},
    {3, "rate contract (50ms interval, 10 concurrent fetches)", criterion3},
    {4, "content negotiation matrix", criterion4},
    {5, "keyless sameAs-only responses", criterion5},
    {6, "linker precision harness", criterion6},
    {7, "vocabulary fidelity", criterion7},
    {8, "resume determinism", criterion8},
    {9, "VoID consistency", criterion9},
};

}  // namespace

int main(int argc, char** argv) {
    int selected = argc > 1 ? std::atoi(argv[1]) : 0;
    int failures = 0;

    for (const Criterion& criterion : kCriteria) {
        if (selected != 0 && criterion.number != selected) continue;
        Check result;
        try {
            result = criterion.run();
        } catch (const std::exception& e) {
            result.ok = false;
            result.detail = std::string("exception: ") + e.what();
        }
        if (result.ok) {
            std::cout << "PASS criterion " << criterion.number << ": " << criterion.label
                      << std::endl;
        } else {
            std::cout << "FAIL criterion " << criterion.number << ": " << criterion.label
                      << " -- " << result.detail << std::endl;
            ++failures;
        }
    }
    return failures == 0 ? 0 : 1;
}
