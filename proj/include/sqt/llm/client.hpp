#ifndef SQT_LLM_CLIENT_HPP
#define SQT_LLM_CLIENT_HPP

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "sqt/llm/cassette.hpp"
#include "sqt/prompt/prompt.hpp"

namespace sqt {

struct ChatRequest {
    std::string model_id;
    RenderedPrompt prompt;
    double temperature = 0.0;  // determinism by default
    size_t max_tokens = 4096;

    /// Stable across processes: sha256 over model id, prompt digest and the
    /// sampling parameters.
    std::string request_digest() const;
};

struct TransportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Non-2xx that is not worth retrying; the body is surfaced.
struct ProviderRefusal : std::runtime_error {
    int status;
    std::string body;
    ProviderRefusal(int s, std::string b)
        : std::runtime_error("provider returned " + std::to_string(s)),
          status(s), body(std::move(b)) {}
};

struct LlmOptions {
    std::string api_base;  // e.g. http://host:port/v1
    std::string api_key;
    int attempts = 3;
    std::chrono::milliseconds backoff{200};
    std::chrono::seconds timeout{120};
    std::optional<std::string> system_message;  // none by default
};

/// Fills api_base/api_key from LLM_API_BASE and LLM_API_KEY.
LlmOptions llm_options_from_env();

/// Chat-completions client with bounded retries and cassette record/replay.
class LlmClient {
public:
    LlmClient() = default;
    explicit LlmClient(LlmOptions options) : options_(std::move(options)) {}

    /// Replay: returns the stored response or throws CassetteMiss. Record:
    /// serves a stored response when present, otherwise calls the endpoint
    /// and persists the exchange. Passthrough always calls.
    ChatResponse complete(const ChatRequest& request, Cassette& cassette) const;

    struct BatchItem {
        std::optional<ChatResponse> response;
        std::string error_kind;     // CassetteMiss | TransportError | ProviderRefusal
        std::string error_message;
        bool ok() const { return response.has_value(); }
    };

    /// Runs requests with at most `parallelism` in flight; results come back
    /// in request order and per-item failures are collected, not thrown.
    std::vector<BatchItem> batch_complete(const std::vector<ChatRequest>& requests,
                                          Cassette& cassette,
                                          size_t parallelism) const;

    const LlmOptions& options() const { return options_; }

private:
    ChatResponse call_endpoint(const ChatRequest& request) const;

    LlmOptions options_;
};

} // namespace sqt

#endif
