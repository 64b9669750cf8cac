#include "sqt/exemplar/embedding.hpp"

#include <fstream>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "sqt/exec/endpoint.hpp"

namespace sqt {

FileEmbeddingProvider::FileEmbeddingProvider(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ProviderError("cannot open vector file " + path);

    size_t count = 0;
    std::string header;
    if (!std::getline(in, header)) throw ProviderError("empty vector file " + path);
    {
        std::istringstream hs(header);
        if (!(hs >> dimension_ >> count) || dimension_ == 0)
            throw ProviderError("bad vector file header: " + header);
    }

    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::istringstream ls(line);
        std::string id;
        ls >> id;
        std::vector<double> values;
        double v;
        while (ls >> v) values.push_back(v);
        if (values.size() != dimension_)
            throw DimensionMismatch("row '" + id + "' has " +
                                    std::to_string(values.size()) + " values, expected " +
                                    std::to_string(dimension_));
        Eigen::VectorXd vec(dimension_);
        for (size_t i = 0; i < dimension_; ++i) vec[i] = values[i];
        vectors_[id] = std::move(vec);
    }
    if (vectors_.size() != count)
        throw ProviderError("vector file declares " + std::to_string(count) +
                            " rows but has " + std::to_string(vectors_.size()));
}

std::vector<EmbeddingVector> FileEmbeddingProvider::embed(
    const std::vector<EmbedRequest>& reqs) {
    std::vector<EmbeddingVector> out;
    out.reserve(reqs.size());
    for (const auto& req : reqs) {
        auto it = vectors_.find(req.id);
        if (it == vectors_.end())
            throw ProviderError("no precomputed vector for id " + req.id);
        out.push_back({it->second, req.text});
    }
    return out;
}

std::vector<EmbeddingVector> HttpEmbeddingProvider::embed(
    const std::vector<EmbedRequest>& reqs) {
    UrlParts parts = split_url(base_url_);
    httplib::Client cli(parts.origin);
    cli.set_read_timeout(std::chrono::seconds(120));

    nlohmann::json body;
    body["model"] = model_;
    auto input = nlohmann::json::array();
    for (const auto& req : reqs) input.push_back(req.text);
    body["input"] = input;

    std::string path = parts.path == "/" ? "/embeddings" : parts.path + "/embeddings";
    auto res = cli.Post(path, body.dump(), "application/json");
    if (!res) throw ProviderError("embedding request failed: " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw ProviderError("embedding endpoint returned " + std::to_string(res->status));

    auto j = nlohmann::json::parse(res->body, nullptr, false);
    if (j.is_discarded() || !j.contains("data") || !j["data"].is_array() ||
        j["data"].size() != reqs.size())
        throw ProviderError("embedding response shape unexpected");

    std::vector<EmbeddingVector> out;
    size_t dim = 0;
    for (size_t i = 0; i < reqs.size(); ++i) {
        const auto& emb = j["data"][i]["embedding"];
        Eigen::VectorXd vec(emb.size());
        for (size_t k = 0; k < emb.size(); ++k) vec[k] = emb[k].get<double>();
        if (i == 0) dim = vec.size();
        if (size_t(vec.size()) != dim)
            throw DimensionMismatch("embedding rows differ in dimension");
        out.push_back({std::move(vec), reqs[i].text});
    }
    return out;
}

std::vector<EmbeddingVector> embed_texts(const std::vector<std::string>& texts,
                                         EmbeddingProvider& provider) {
    std::vector<EmbedRequest> reqs;
    reqs.reserve(texts.size());
    for (const auto& t : texts) reqs.push_back({t, t});
    return provider.embed(reqs);
}

} // namespace sqt
