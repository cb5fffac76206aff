#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "http.hpp"

#include <thread>

namespace curator {

namespace {

// Splits "https://host:port/prefix" into the client origin and the path
// prefix, so base URLs with a mounted path (e.g. .../v1) work.
std::pair<std::string, std::string> split_base_url(const std::string& base_url) {
    std::string url = base_url;
    while (!url.empty() && url.back() == '/') {
        url.pop_back();
    }
    size_t scheme_end = url.find("://");
    size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    size_t path_start = url.find('/', host_start);
    if (path_start == std::string::npos) {
        return {url, ""};
    }
    return {url.substr(0, path_start), url.substr(path_start)};
}

class HttplibTransport : public HttpTransport {
public:
    HttpResponse post(const std::string& base_url, const std::string& path,
                      const HttpHeaders& headers, const std::string& json_body,
                      int timeout_seconds) override {
        auto [origin, prefix] = split_base_url(base_url);
        httplib::Client client(origin);
        client.set_connection_timeout(timeout_seconds, 0);
        client.set_read_timeout(timeout_seconds, 0);
        client.set_write_timeout(timeout_seconds, 0);
        httplib::Headers hl;
        for (const auto& [k, v] : headers) {
            hl.emplace(k, v);
        }
        auto res = client.Post(prefix + path, hl, json_body, "application/json");
        if (!res) {
            throw TransportFailure("transport failure: " + httplib::to_string(res.error()));
        }
        return {res->status, res->body};
    }
};

} // namespace

std::shared_ptr<HttpTransport> make_httplib_transport() {
    return std::make_shared<HttplibTransport>();
}

HttpResponse post_with_retry(HttpTransport& transport, const std::string& base_url,
                             const std::string& path, const HttpHeaders& headers,
                             const std::string& json_body, int timeout_seconds,
                             int max_retries, const Sleeper& sleeper) {
    Sleeper sleep_fn = sleeper;
    if (!sleep_fn) {
        sleep_fn = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    }

    std::string last_failure;
    auto last_kind = ProviderError::Kind::transport;
    int attempts = 0;
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
        if (attempt > 0) {
            auto delay = kBackoffBase;
            for (int i = 1; i < attempt; ++i) {
                delay *= kBackoffFactor;
            }
            sleep_fn(delay);
        }
        ++attempts;
        try {
            HttpResponse res = transport.post(base_url, path, headers, json_body,
                                              timeout_seconds);
            bool retryable = res.status == 429 || res.status >= 500;
            if (!retryable) {
                return res;
            }
            last_failure = "HTTP " + std::to_string(res.status);
            last_kind = ProviderError::Kind::http_status;
        } catch (const TransportFailure& e) {
            last_failure = e.what();
            last_kind = ProviderError::Kind::transport;
        }
    }
    throw ProviderError(last_kind, attempts,
                        "request to " + base_url + path + " failed after " +
                            std::to_string(attempts) + " attempts: " + last_failure);
}

} // namespace curator
