#include <CLI11.hpp>

#include <chrono>
#include <csignal>
#include <iostream>
#include <sstream>
#include <thread>

#include "cbld/mock_upstream.hpp"

namespace {

volatile std::sig_atomic_t g_stop = 0;

void handle_signal(int) { g_stop = 1; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fixture-driven stand-in for the upstream JSON API"};

    std::string fixtures;
    std::string addr = "127.0.0.1:8024";
    std::size_t page_size = 8;
    std::string keys;
    bool enforce_rate = false;
    long rate_ms = 1000;

    app.add_option("--fixtures", fixtures, "Fixture directory (one JSON file per entity)")
        ->required();
    app.add_option("--addr", addr, "host:port to listen on");
    app.add_option("--page-size", page_size, "Items per page");
    app.add_option("--keys", keys, "Comma-separated accepted user_key values");
    app.add_flag("--enforce-rate", enforce_rate, "Answer 429 to requests above the rate limit");
    app.add_option("--rate-ms", rate_ms, "Minimum interval between requests when enforced");

    CLI11_PARSE(app, argc, argv);

    auto colon = addr.rfind(':');
    if (colon == std::string::npos) {
        std::cerr << "bad --addr, expected host:port\n";
        return 2;
    }
    std::string host = addr.substr(0, colon);
    int port = std::stoi(addr.substr(colon + 1));

    cbld::MockConfig config;
    config.page_size = page_size;
    config.enforce_rate = enforce_rate;
    config.rate_interval = std::chrono::milliseconds(rate_ms);
    std::stringstream key_stream(keys);
    std::string key;
    while (std::getline(key_stream, key, ',')) {
        if (!key.empty()) config.valid_keys.insert(key);
    }

    try {
        cbld::MockUpstream server(cbld::FixtureCorpus::load_dir(fixtures), config);
        server.start(host, port);
        std::cout << "mock upstream serving " << server.corpus().size() << " fixtures at "
                  << server.base_url() << std::endl;

        std::signal(SIGINT, handle_signal);
        std::signal(SIGTERM, handle_signal);
        while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
        server.stop();
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 0;
}
