#ifndef SQT_LLM_CASSETTE_HPP
#define SQT_LLM_CASSETTE_HPP

#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace sqt {

enum class CassetteMode { Record, Replay, Passthrough };

std::string to_string(CassetteMode m);
CassetteMode cassette_mode_from(const std::string& s);

struct TokenUsage {
    size_t prompt_tokens = 0;
    size_t completion_tokens = 0;
    bool operator==(const TokenUsage&) const = default;
};

struct ChatResponse {
    std::string text;  // the verbatim completion
    std::string finish_reason;
    int64_t latency_ms = 0;
    TokenUsage usage;
    bool operator==(const ChatResponse&) const = default;
};

struct CassetteMiss : std::runtime_error {
    std::string digest;
    explicit CassetteMiss(std::string d)
        : std::runtime_error("no cassette entry for digest " + d),
          digest(std::move(d)) {}
};

/// Append-only store of chat exchanges keyed by request digest. Replay mode
/// never touches the network; record mode persists every new exchange and
/// serves repeats from the store.
class Cassette {
public:
    explicit Cassette(CassetteMode mode) : mode_(mode) {}  // memory-only
    Cassette(std::string path, CassetteMode mode);         // file-backed

    CassetteMode mode() const { return mode_; }
    size_t size() const;

    std::optional<ChatResponse> find(const std::string& digest) const;

    /// request_snapshot is stored alongside the response for auditability.
    void put(const std::string& digest, const nlohmann::json& request_snapshot,
             const ChatResponse& response);

private:
    CassetteMode mode_;
    std::string path_;
    std::map<std::string, ChatResponse> entries_;
    mutable std::mutex mutex_;
};

} // namespace sqt

#endif
