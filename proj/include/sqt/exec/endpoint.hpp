#ifndef SQT_EXEC_ENDPOINT_HPP
#define SQT_EXEC_ENDPOINT_HPP

#include <chrono>
#include <stdexcept>
#include <string>

#include "sqt/exec/result_set.hpp"

namespace sqt {

struct EndpointError : std::runtime_error {
    int status;  // HTTP status, 0 for transport-level failures
    EndpointError(int s, const std::string& msg)
        : std::runtime_error(msg), status(s) {}
};

struct TimeoutError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UrlParts {
    std::string origin;  // scheme://host[:port]
    std::string path;    // /sparql
};

UrlParts split_url(const std::string& url);

/// SPARQL protocol client: POSTs `query=` form-encoded, accepts the
/// standard results JSON. Transient failures (timeouts, 5xx, connection
/// resets) are retried with exponential backoff; 4xx surfaces immediately.
class SparqlClient {
public:
    struct Options {
        std::chrono::seconds timeout{60};
        int attempts = 3;
        std::chrono::milliseconds backoff{100};
    };

    SparqlClient() = default;
    explicit SparqlClient(Options opts) : opts_(opts) {}

    /// Throws EndpointError, TimeoutError or MalformedResponse.
    ResultSet execute(const std::string& query, const std::string& endpoint_url) const;

    const Options& options() const { return opts_; }

private:
    Options opts_;
};

} // namespace sqt

#endif
