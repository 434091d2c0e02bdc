#include "sentiforge/http_client.hpp"

#include <map>
#include <mutex>
#include <thread>

#include <httplib.h>

#include "sentiforge/common.hpp"

namespace sentiforge::net {

namespace {

// One pacer per host, shared across threads: acquiring the host mutex and
// sleeping inside it serializes requests and enforces the spacing.
struct HostPacer {
    std::mutex gate;
    std::chrono::steady_clock::time_point last{};
};

HostPacer& pacer_for(const std::string& host) {
    static std::mutex registry_mutex;
    static std::map<std::string, HostPacer> registry;
    std::lock_guard<std::mutex> lock(registry_mutex);
    return registry[host];
}

void pace(const std::string& host, std::chrono::milliseconds interval) {
    if (interval.count() <= 0) return;
    HostPacer& pacer = pacer_for(host);
    std::lock_guard<std::mutex> lock(pacer.gate);
    const auto now = std::chrono::steady_clock::now();
    const auto earliest = pacer.last + interval;
    if (pacer.last.time_since_epoch().count() != 0 && now < earliest) {
        std::this_thread::sleep_for(earliest - now);
    }
    pacer.last = std::chrono::steady_clock::now();
}

bool is_retryable_status(int status) {
    return status == 429 || (status >= 500 && status <= 599);
}

}  // namespace

UrlParts split_url(const std::string& url) {
    std::size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("URL missing scheme: " + url);
    }
    const std::size_t host_start = scheme_end + 3;
    std::size_t path_start = url.find('/', host_start);
    UrlParts parts;
    if (path_start == std::string::npos) {
        parts.scheme_host_port = url;
        parts.path_and_query = "/";
        parts.host = url.substr(host_start);
    } else {
        parts.scheme_host_port = url.substr(0, path_start);
        parts.path_and_query = url.substr(path_start);
        parts.host = url.substr(host_start, path_start - host_start);
    }
    if (parts.host.empty()) throw ConfigError("URL missing host: " + url);
    return parts;
}

HttpResponse http_get(const std::string& url, const RetryPolicy& policy) {
    const UrlParts parts = split_url(url);
    auto backoff = policy.initial_backoff;
    std::string last_failure = "no attempt made";

    for (int attempt = 0; attempt <= policy.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
        }
        pace(parts.host, policy.min_request_interval);

        httplib::Client client(parts.scheme_host_port);
        client.set_follow_location(true);
        client.set_connection_timeout(10, 0);
        client.set_read_timeout(30, 0);
        auto result = client.Get(parts.path_and_query);
        if (!result) {
            last_failure = "transport error: " + httplib::to_string(result.error());
            continue;
        }
        if (is_retryable_status(result->status)) {
            last_failure = "HTTP " + std::to_string(result->status);
            continue;
        }
        return HttpResponse{result->status, result->body};
    }
    throw RetryableError("GET " + url + " failed after " +
                         std::to_string(policy.max_retries + 1) +
                         " attempts (" + last_failure + ")");
}

}  // namespace sentiforge::net
