#ifndef SQT_EXEMPLAR_EMBEDDING_HPP
#define SQT_EXEMPLAR_EMBEDDING_HPP

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqt/exemplar/eigen_compat.hpp"

namespace sqt {

struct EmbeddingVector {
    Eigen::VectorXd values;
    std::string source_text;
};

struct ProviderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmbedRequest {
    std::string id;    // exemplar id for file providers
    std::string text;  // the NLQ for remote providers
};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    /// One vector per request, order preserved, uniform dimensionality.
    virtual std::vector<EmbeddingVector> embed(const std::vector<EmbedRequest>& reqs) = 0;
};

/// Precomputed vectors keyed by exemplar id. File layout:
///   <dimension> <count>
///   <id> <v1> ... <v_dimension>
class FileEmbeddingProvider : public EmbeddingProvider {
public:
    explicit FileEmbeddingProvider(const std::string& path);

    std::vector<EmbeddingVector> embed(const std::vector<EmbedRequest>& reqs) override;

    size_t dimension() const { return dimension_; }
    size_t count() const { return vectors_.size(); }

private:
    size_t dimension_ = 0;
    std::map<std::string, Eigen::VectorXd> vectors_;
};

/// Remote embeddings endpoint speaking the de-facto JSON schema
/// (POST {base}/embeddings with {"model", "input": [texts]}).
class HttpEmbeddingProvider : public EmbeddingProvider {
public:
    HttpEmbeddingProvider(std::string base_url, std::string model)
        : base_url_(std::move(base_url)), model_(std::move(model)) {}

    std::vector<EmbeddingVector> embed(const std::vector<EmbedRequest>& reqs) override;

private:
    std::string base_url_;
    std::string model_;
};

/// One vector per text, order preserving; requests are keyed by the text
/// itself.
std::vector<EmbeddingVector> embed_texts(const std::vector<std::string>& texts,
                                         EmbeddingProvider& provider);

} // namespace sqt

#endif
