// Minimal local SPARQL endpoint for offline runs: serves canned responses
// keyed by whitespace-collapsed query text and answers single-pattern
// equivalence lookups from a triple list. Useful together with the replay
// cassette to exercise the whole pipeline without network access.

#include <csignal>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "../tests/support/fixture_graph.hpp"
#include "../tests/support/stub_servers.hpp"
#include "sqt/util/jsonl.hpp"

using namespace sqt;

int main(int argc, char** argv) {
    CLI::App app{"canned SPARQL endpoint for offline runs"};
    std::string map_path, triples_path;
    app.add_option("--map", map_path, "JSON object: collapsed query -> results JSON");
    app.add_option("--triples", triples_path, "whitespace-separated triple file");
    CLI11_PARSE(app, argc, argv);

    testing::StubSparqlServer server;
    if (!map_path.empty()) {
        auto map = nlohmann::json::parse(read_file(map_path));
        size_t n = 0;
        for (const auto& [query, response] : map.items()) {
            server.add_canned(query, response.dump());
            ++n;
        }
        std::cout << "loaded " << n << " canned responses from " << map_path << "\n";
    }
    if (!triples_path.empty()) {
        testing::load_graph_fixture(server, triples_path);
        std::cout << "loaded triples from " << triples_path << "\n";
    }

    std::cout << "serving on " << server.url() << "\n"
              << "export SPARQL_ENDPOINT_<NAME>=" << server.url()
              << " to point a profile here; Ctrl-C stops.\n";
    std::cout.flush();

    // the server runs on its own thread inside StubSparqlServer; block forever
    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    sigprocmask(SIG_BLOCK, &set, nullptr);
    int sig = 0;
    sigwait(&set, &sig);
    return 0;
}
