#ifndef SQT_TESTS_STUB_SERVERS_HPP
#define SQT_TESTS_STUB_SERVERS_HPP

#include <atomic>
#include <chrono>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "sqt/sparql/query_doc.hpp"
#include "sqt/util/strings.hpp"

namespace sqt::testing {

/// Key under which canned responses are looked up: whitespace runs collapsed
/// so formatting differences between producer and consumer don't matter.
inline std::string query_key(const std::string& query) {
    std::string out;
    bool in_space = false;
    for (char c : query) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_space = true;
            continue;
        }
        if (in_space && !out.empty()) out += ' ';
        in_space = false;
        out += c;
    }
    return out;
}

struct Triple {
    std::string subject, predicate, object;
};

/// In-process SPARQL endpoint. Resolution order per request:
///   1. canned responses by collapsed query text
///   2. the triple table, for single-pattern `{ <s> <p> ?var }` queries
///   3. HTTP 400 when the query fails syntax validation
///   4. the default response (empty bindings)
class StubSparqlServer {
public:
    StubSparqlServer() {
        server_.Post("/sparql", [this](const httplib::Request& req, httplib::Response& res) {
            handle(req, res);
        });
        server_.Get("/sparql", [this](const httplib::Request& req, httplib::Response& res) {
            handle(req, res);
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~StubSparqlServer() {
        server_.stop();
        if (thread_.joinable()) thread_.join();
    }

    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/sparql"; }

    void add_canned(const std::string& query, const std::string& response_json) {
        canned_[query_key(query)] = response_json;
    }
    void add_triple(std::string s, std::string p, std::string o) {
        triples_.push_back({std::move(s), std::move(p), std::move(o)});
    }
    void set_fail_unknown(bool v) { fail_unknown_ = v; }

    size_t request_count() const { return requests_.load(); }

private:
    void handle(const httplib::Request& req, httplib::Response& res) {
        requests_.fetch_add(1);
        std::string query = req.has_param("query") ? req.get_param_value("query") : "";

        auto it = canned_.find(query_key(query));
        if (it != canned_.end()) {
            res.set_content(it->second, "application/sparql-results+json");
            return;
        }

        // single triple pattern with a concrete subject and predicate
        auto answer = answer_pattern(query);
        if (answer) {
            res.set_content(*answer, "application/sparql-results+json");
            return;
        }

        if (!validate_syntax(query).empty()) {
            res.status = 400;
            res.set_content("malformed query", "text/plain");
            return;
        }
        if (fail_unknown_) {
            res.status = 404;
            res.set_content("no canned response", "text/plain");
            return;
        }
        res.set_content(R"({"head":{"vars":[]},"results":{"bindings":[]}})",
                        "application/sparql-results+json");
    }

    // answers `{ <s> <p> ?v }` with objects and `{ ?v <p> <o> }` with subjects
    std::optional<std::string> answer_pattern(const std::string& query) const {
        std::string key = query_key(query);
        auto open = key.find('{');
        auto close = key.rfind('}');
        if (open == std::string::npos || close == std::string::npos || close < open)
            return std::nullopt;
        std::string body = key.substr(open + 1, close - open - 1);

        auto read_iri = [&](size_t from, std::string* out) -> size_t {
            auto i_open = body.find('<', from);
            if (i_open == std::string::npos) return std::string::npos;
            auto i_close = body.find('>', i_open + 1);
            if (i_close == std::string::npos) return std::string::npos;
            *out = body.substr(i_open + 1, i_close - i_open - 1);
            return i_close + 1;
        };
        auto read_var = [&](size_t from, std::string* out) -> size_t {
            auto v = body.find('?', from);
            if (v == std::string::npos) return std::string::npos;
            std::string name;
            size_t i = v + 1;
            for (; i < body.size() && (std::isalnum(static_cast<unsigned char>(body[i])) ||
                                       body[i] == '_');
                 ++i)
                name += body[i];
            if (name.empty()) return std::string::npos;
            *out = name;
            return i;
        };

        size_t first_var = body.find('?');
        size_t first_iri = body.find('<');
        if (first_iri == std::string::npos || first_var == std::string::npos)
            return std::nullopt;

        std::string var, predicate, concrete;
        bool var_is_subject = first_var < first_iri;
        size_t pos;
        if (var_is_subject) {
            pos = read_var(0, &var);
            if (pos == std::string::npos) return std::nullopt;
            pos = read_iri(pos, &predicate);
            if (pos == std::string::npos) return std::nullopt;
            if (read_iri(pos, &concrete) == std::string::npos) return std::nullopt;
        } else {
            pos = read_iri(0, &concrete);
            if (pos == std::string::npos) return std::nullopt;
            pos = read_iri(pos, &predicate);
            if (pos == std::string::npos) return std::nullopt;
            if (read_var(pos, &var) == std::string::npos) return std::nullopt;
        }

        nlohmann::ordered_json j;
        j["head"]["vars"] = {var};
        auto bindings = nlohmann::ordered_json::array();
        for (const auto& t : triples_) {
            if (t.predicate != predicate) continue;
            std::string value;
            if (var_is_subject && t.object == concrete) value = t.subject;
            else if (!var_is_subject && t.subject == concrete) value = t.object;
            else continue;
            nlohmann::ordered_json row;
            row[var] = {{"type", "uri"}, {"value", value}};
            bindings.push_back(row);
        }
        j["results"]["bindings"] = bindings;
        return j.dump();
    }

    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::map<std::string, std::string> canned_;
    std::vector<Triple> triples_;
    bool fail_unknown_ = false;
    std::atomic<size_t> requests_{0};
};

/// In-process chat-completions endpoint. Responds with the completion the
/// responder function produces for the prompt text; tracks the maximum
/// number of concurrently open requests.
class StubLlmServer {
public:
    using Responder = std::function<std::string(const std::string& model,
                                                const std::string& prompt)>;

    explicit StubLlmServer(Responder responder, int delay_ms = 0)
        : responder_(std::move(responder)), delay_ms_(delay_ms) {
        server_.Post("/chat/completions",
                     [this](const httplib::Request& req, httplib::Response& res) {
                         handle(req, res);
                     });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~StubLlmServer() {
        server_.stop();
        if (thread_.joinable()) thread_.join();
    }

    std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }

    size_t max_concurrency() const { return max_inflight_.load(); }
    size_t request_count() const { return requests_.load(); }

    /// The next n requests answer with the given status before recovering.
    void fail_next(int n, int status = 503) {
        fail_remaining_ = n;
        fail_status_ = status;
    }

private:
    void handle(const httplib::Request& req, httplib::Response& res) {
        size_t now = inflight_.fetch_add(1) + 1;
        size_t seen = max_inflight_.load();
        while (now > seen && !max_inflight_.compare_exchange_weak(seen, now)) {
        }
        requests_.fetch_add(1);
        if (fail_remaining_.fetch_sub(1) > 0) {
            res.status = fail_status_;
            res.set_content("injected failure", "text/plain");
            inflight_.fetch_sub(1);
            return;
        }
        fail_remaining_.store(0);
        if (delay_ms_ > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms_));

        auto j = nlohmann::json::parse(req.body, nullptr, false);
        std::string model = j.value("model", "");
        std::string prompt;
        if (j.contains("messages") && !j["messages"].empty())
            prompt = j["messages"].back().value("content", "");

        nlohmann::ordered_json out;
        out["choices"] = {{{"message", {{"role", "assistant"},
                                        {"content", responder_(model, prompt)}}},
                           {"finish_reason", "stop"}}};
        out["usage"] = {{"prompt_tokens", prompt.size() / 4},
                        {"completion_tokens", 32}};
        res.set_content(out.dump(), "application/json");
        inflight_.fetch_sub(1);
    }

    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    Responder responder_;
    int delay_ms_ = 0;
    std::atomic<size_t> inflight_{0};
    std::atomic<size_t> max_inflight_{0};
    std::atomic<size_t> requests_{0};
    std::atomic<int> fail_remaining_{0};
    int fail_status_ = 503;
};

} // namespace sqt::testing

#endif
