#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace curator {

struct HttpResponse {
    int status = 0;
    std::string body;
};

// Connection-level failure (refused, reset, timeout). Distinct from an HTTP
// error status, which arrives as a normal HttpResponse.
class TransportFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using HttpHeaders = std::vector<std::pair<std::string, std::string>>;

class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse post(const std::string& base_url, const std::string& path,
                              const HttpHeaders& headers, const std::string& json_body,
                              int timeout_seconds) = 0;
};

std::shared_ptr<HttpTransport> make_httplib_transport();

using Sleeper = std::function<void(std::chrono::milliseconds)>;

inline constexpr std::chrono::milliseconds kBackoffBase{1000};
inline constexpr int kBackoffFactor = 2;

// POST with retries on transport failures, 5xx, and 429, sleeping
// base * factor^i between attempts. Other statuses return immediately for
// the caller to interpret. Throws ProviderError once retries are exhausted.
HttpResponse post_with_retry(HttpTransport& transport, const std::string& base_url,
                             const std::string& path, const HttpHeaders& headers,
                             const std::string& json_body, int timeout_seconds,
                             int max_retries, const Sleeper& sleeper);

} // namespace curator
