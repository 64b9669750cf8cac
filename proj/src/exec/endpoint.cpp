#include "sqt/exec/endpoint.hpp"

#include <thread>

#include <httplib.h>

namespace sqt {

UrlParts split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw EndpointError(0, "URL missing scheme: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

ResultSet SparqlClient::execute(const std::string& query,
                                const std::string& endpoint_url) const {
    UrlParts parts = split_url(endpoint_url);

    std::string last_error;
    for (int attempt = 0; attempt < std::max(1, opts_.attempts); ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(opts_.backoff * (1 << (attempt - 1)));

        httplib::Client cli(parts.origin);
        cli.set_connection_timeout(opts_.timeout);
        cli.set_read_timeout(opts_.timeout);
        cli.set_write_timeout(opts_.timeout);

        httplib::Params params{{"query", query}};
        httplib::Headers headers{{"Accept", "application/sparql-results+json"}};
        auto res = cli.Post(parts.path, headers, params);

        if (!res) {
            auto err = res.error();
            if (err == httplib::Error::ConnectionTimeout ||
                err == httplib::Error::Read || err == httplib::Error::Write) {
                last_error = "timeout contacting " + endpoint_url;
                continue;  // transient
            }
            last_error = httplib::to_string(err) + " contacting " + endpoint_url;
            continue;
        }
        if (res->status >= 500) {
            last_error = "server error " + std::to_string(res->status);
            continue;
        }
        if (res->status < 200 || res->status >= 300)
            throw EndpointError(res->status, "endpoint returned " +
                                                 std::to_string(res->status) + ": " +
                                                 res->body.substr(0, 200));
        return parse_results_json(res->body);
    }
    if (last_error.find("timeout") != std::string::npos)
        throw TimeoutError(last_error);
    throw EndpointError(0, last_error.empty() ? "request failed" : last_error);
}

} // namespace sqt
