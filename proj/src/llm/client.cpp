#include "sqt/llm/client.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "sqt/exec/endpoint.hpp"
#include "sqt/util/sha256.hpp"
#include "sqt/util/strings.hpp"

namespace sqt {

using nlohmann::json;

std::string ChatRequest::request_digest() const {
    Sha256 h;
    h.update(model_id);
    h.update("\x1f");
    h.update(prompt.spec_digest);
    h.update("\x1f");
    h.update(format_double(temperature));
    h.update("\x1f");
    h.update(std::to_string(max_tokens));
    return h.hex_digest();
}

LlmOptions llm_options_from_env() {
    LlmOptions opts;
    if (const char* base = std::getenv("LLM_API_BASE"); base && *base)
        opts.api_base = base;
    if (const char* key = std::getenv("LLM_API_KEY"); key && *key)
        opts.api_key = key;
    return opts;
}

ChatResponse LlmClient::call_endpoint(const ChatRequest& request) const {
    if (options_.api_base.empty())
        throw TransportError("LLM_API_BASE is not configured");

    UrlParts parts = split_url(options_.api_base);
    std::string path = parts.path == "/" ? "/chat/completions"
                                         : parts.path + "/chat/completions";

    json body;
    body["model"] = request.model_id;
    auto messages = json::array();
    if (options_.system_message)
        messages.push_back({{"role", "system"}, {"content", *options_.system_message}});
    messages.push_back({{"role", "user"}, {"content", request.prompt.text}});
    body["messages"] = messages;
    body["temperature"] = request.temperature;
    body["max_tokens"] = request.max_tokens;
    std::string payload = body.dump();

    std::string last_error;
    for (int attempt = 0; attempt < std::max(1, options_.attempts); ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(options_.backoff * (1 << (attempt - 1)));

        httplib::Client cli(parts.origin);
        cli.set_connection_timeout(options_.timeout);
        cli.set_read_timeout(options_.timeout);
        cli.set_write_timeout(options_.timeout);

        httplib::Headers headers;
        if (!options_.api_key.empty())
            headers.emplace("Authorization", "Bearer " + options_.api_key);

        auto start = std::chrono::steady_clock::now();
        auto res = cli.Post(path, headers, payload, "application/json");
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();

        if (!res) {
            last_error = httplib::to_string(res.error());
            continue;  // transport problems are transient until proven otherwise
        }
        if (res->status >= 500) {
            last_error = "server error " + std::to_string(res->status);
            continue;
        }
        if (res->status < 200 || res->status >= 300)
            throw ProviderRefusal(res->status, res->body);

        json j = json::parse(res->body, nullptr, false);
        if (j.is_discarded() || !j.contains("choices") || j["choices"].empty())
            throw TransportError("completion response malformed: " +
                                 res->body.substr(0, 200));
        const auto& choice = j["choices"][0];
        ChatResponse out;
        out.text = choice.at("message").at("content").get<std::string>();
        out.finish_reason = choice.value("finish_reason", "stop");
        out.latency_ms = elapsed;
        if (j.contains("usage")) {
            out.usage.prompt_tokens = j["usage"].value("prompt_tokens", size_t(0));
            out.usage.completion_tokens = j["usage"].value("completion_tokens", size_t(0));
        }
        return out;
    }
    throw TransportError("completion failed after retries: " + last_error);
}

ChatResponse LlmClient::complete(const ChatRequest& request, Cassette& cassette) const {
    std::string digest = request.request_digest();

    if (cassette.mode() == CassetteMode::Replay) {
        auto stored = cassette.find(digest);
        if (!stored) throw CassetteMiss(digest);
        return *stored;
    }
    if (cassette.mode() == CassetteMode::Record) {
        if (auto stored = cassette.find(digest)) return *stored;
        ChatResponse response = call_endpoint(request);
        json snapshot;
        snapshot["model"] = request.model_id;
        snapshot["strategy"] = to_string(request.prompt.strategy);
        snapshot["temperature"] = request.temperature;
        snapshot["max_tokens"] = request.max_tokens;
        snapshot["prompt_text"] = request.prompt.text;
        cassette.put(digest, snapshot, response);
        return response;
    }
    return call_endpoint(request);
}

std::vector<LlmClient::BatchItem> LlmClient::batch_complete(
    const std::vector<ChatRequest>& requests, Cassette& cassette,
    size_t parallelism) const {
    std::vector<BatchItem> results(requests.size());
    if (requests.empty()) return results;
    parallelism = std::max<size_t>(1, parallelism);

    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= requests.size()) return;
            try {
                results[i].response = complete(requests[i], cassette);
            } catch (const CassetteMiss& e) {
                results[i] = {std::nullopt, "CassetteMiss", e.what()};
            } catch (const ProviderRefusal& e) {
                results[i] = {std::nullopt, "ProviderRefusal", e.what()};
            } catch (const TransportError& e) {
                results[i] = {std::nullopt, "TransportError", e.what()};
            }
        }
    };

    std::vector<std::thread> threads;
    for (size_t t = 0; t < std::min(parallelism, requests.size()); ++t)
        threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    return results;
}

} // namespace sqt
