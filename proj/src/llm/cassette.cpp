#include "sqt/llm/cassette.hpp"

#include "sqt/util/jsonl.hpp"

namespace sqt {

using nlohmann::ordered_json;

std::string to_string(CassetteMode m) {
    switch (m) {
        case CassetteMode::Record: return "record";
        case CassetteMode::Replay: return "replay";
        default: return "passthrough";
    }
}

CassetteMode cassette_mode_from(const std::string& s) {
    if (s == "record") return CassetteMode::Record;
    if (s == "replay") return CassetteMode::Replay;
    if (s == "passthrough") return CassetteMode::Passthrough;
    throw std::runtime_error("unknown cassette mode: " + s);
}

Cassette::Cassette(std::string path, CassetteMode mode)
    : mode_(mode), path_(std::move(path)) {
    read_jsonl(path_, [&](const nlohmann::json& j, size_t) {
        ChatResponse r;
        const auto& resp = j.at("response");
        r.text = resp.at("text").get<std::string>();
        r.finish_reason = resp.value("finish_reason", "stop");
        r.latency_ms = resp.value("latency_ms", int64_t(0));
        r.usage.prompt_tokens = resp.value("prompt_tokens", size_t(0));
        r.usage.completion_tokens = resp.value("completion_tokens", size_t(0));
        entries_[j.at("digest").get<std::string>()] = std::move(r);
    });
}

size_t Cassette::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

std::optional<ChatResponse> Cassette::find(const std::string& digest) const {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(digest);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void Cassette::put(const std::string& digest, const nlohmann::json& request_snapshot,
                   const ChatResponse& response) {
    std::lock_guard lock(mutex_);
    entries_[digest] = response;
    if (path_.empty()) return;
    ordered_json j;
    j["digest"] = digest;
    j["request"] = request_snapshot;
    j["response"] = {{"text", response.text},
                     {"finish_reason", response.finish_reason},
                     {"latency_ms", response.latency_ms},
                     {"prompt_tokens", response.usage.prompt_tokens},
                     {"completion_tokens", response.usage.completion_tokens}};
    append_jsonl(path_, j);
}

} // namespace sqt
