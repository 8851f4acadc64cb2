#include <CLI11.hpp>

#include <chrono>
#include <csignal>
#include <iostream>
#include <thread>

#include "cbld/gateway.hpp"

namespace {

volatile std::sig_atomic_t g_stop = 0;

void handle_signal(int) { g_stop = 1; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linked Data gateway in front of the upstream JSON API"};

    std::string listen_addr = "127.0.0.1:8080";
    std::string upstream_base = "http://127.0.0.1:8024";  // the mock's default address
    std::string base_iri = "http://linked-crunchbase.org";
    std::string sameas_path;
    long rate_ms = 1000;

    app.add_option("--listen", listen_addr, "host:port to listen on")->envname("LISTEN_ADDR");
    app.add_option("--upstream", upstream_base, "Upstream API base URL")
        ->envname("UPSTREAM_BASE");
    app.add_option("--base-iri", base_iri, "Base IRI minted into responses")->envname("BASE_IRI");
    app.add_option("--sameas", sameas_path, "N-Triples file of owl:sameAs mappings")
        ->envname("SAMEAS_PATH");
    app.add_option("--rate-ms", rate_ms, "Minimum interval between upstream requests");

    CLI11_PARSE(app, argc, argv);

    auto colon = listen_addr.rfind(':');
    if (colon == std::string::npos) {
        std::cerr << "bad --listen, expected host:port\n";
        return 2;
    }
    std::string host = listen_addr.substr(0, colon);
    int port = std::stoi(listen_addr.substr(colon + 1));

    try {
        cbld::GatewayConfig config;
        config.upstream_base = upstream_base;
        config.base_iri = cbld::Iri(base_iri);
        if (!sameas_path.empty()) config.sameas_path = sameas_path;

        auto gate = std::make_shared<cbld::RateGate>(
            cbld::RateLimitConfig{std::chrono::milliseconds(rate_ms)});
        cbld::Gateway gateway(std::move(config), gate);
        gateway.start(host, port);
        std::cout << "gateway listening at " << gateway.base_url() << ", "
                  << gateway.sameas().size() << " sameAs links loaded" << std::endl;

        std::signal(SIGINT, handle_signal);
        std::signal(SIGTERM, handle_signal);
        while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
        gateway.stop();
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 0;
}
