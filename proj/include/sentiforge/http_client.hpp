// Paced, retrying HTTP GET.
//
// Requests to the same host are serialized and spaced at least
// `min_request_interval` apart (process-wide). HTTP 429 and 5xx responses and
// transport failures back off exponentially up to `max_retries`, after which
// a RetryableError is thrown. Other statuses are returned to the caller.

#ifndef SENTIFORGE_HTTP_CLIENT_HPP
#define SENTIFORGE_HTTP_CLIENT_HPP

#include <chrono>
#include <string>

namespace sentiforge::net {

struct RetryPolicy {
    int max_retries = 5;
    std::chrono::milliseconds min_request_interval{1000};
    std::chrono::milliseconds initial_backoff{500};
};

struct HttpResponse {
    int status = 0;
    std::string body;
};

HttpResponse http_get(const std::string& url, const RetryPolicy& policy = {});

// URL split used by the client; exposed for tests.
struct UrlParts {
    std::string scheme_host_port;  // e.g. "http://127.0.0.1:8080"
    std::string path_and_query;    // e.g. "/api/v3/klines?symbol=..."
    std::string host;              // pacing key
};
UrlParts split_url(const std::string& url);  // throws ConfigError

}  // namespace sentiforge::net

#endif  // SENTIFORGE_HTTP_CLIENT_HPP
