#include "embedding.hpp"

#include <cmath>
#include <cstdlib>

#include "json.hpp"

namespace curator {

namespace {

HttpHeaders auth_headers(const std::string& api_key_env_var) {
    HttpHeaders headers;
    if (!api_key_env_var.empty()) {
        const char* key = std::getenv(api_key_env_var.c_str());
        if (key == nullptr || *key == '\0') {
            throw ProviderError(ProviderError::Kind::config, 0,
                                "environment variable " + api_key_env_var +
                                    " is not set");
        }
        headers.emplace_back("Authorization", std::string("Bearer ") + key);
    }
    return headers;
}

} // namespace

EmbeddingClient::EmbeddingClient(EmbeddingConfig config,
                                 std::shared_ptr<HttpTransport> transport, Sleeper sleeper)
    : config_(std::move(config)),
      transport_(transport ? std::move(transport) : make_httplib_transport()),
      sleeper_(std::move(sleeper)) {}

std::vector<std::vector<double>> EmbeddingClient::embed_batch(
    const std::vector<std::string>& texts) {
    if (texts.empty()) {
        throw EmptyBatch();
    }
    nlohmann::json body = {
        {"model", config_.model_name},
        {"input", texts},
    };
    HttpResponse res =
        post_with_retry(*transport_, config_.base_url, "/embeddings",
                        auth_headers(config_.api_key_env_var), body.dump(),
                        config_.timeout_seconds, config_.max_retries, sleeper_);
    if (res.status < 200 || res.status >= 300) {
        throw ProviderError(ProviderError::Kind::http_status, 1,
                            "embeddings endpoint returned HTTP " +
                                std::to_string(res.status));
    }
    nlohmann::json parsed = nlohmann::json::parse(res.body, nullptr, false);
    if (parsed.is_discarded() || !parsed.contains("data") || !parsed["data"].is_array()) {
        throw ProviderError(ProviderError::Kind::bad_response, 1,
                            "embeddings response lacks a \"data\" array");
    }
    const auto& data = parsed["data"];
    if (data.size() != texts.size()) {
        throw ProviderError(ProviderError::Kind::bad_response, 1,
                            "embeddings response has " + std::to_string(data.size()) +
                                " vectors for " + std::to_string(texts.size()) +
                                " inputs");
    }
    std::vector<std::vector<double>> out;
    out.reserve(data.size());
    for (const auto& item : data) {
        if (!item.is_object() || !item.contains("embedding") ||
            !item["embedding"].is_array()) {
            throw ProviderError(ProviderError::Kind::bad_response, 1,
                                "embeddings response item lacks an \"embedding\" array");
        }
        std::vector<double> vec;
        vec.reserve(item["embedding"].size());
        for (const auto& v : item["embedding"]) {
            if (!v.is_number()) {
                throw ProviderError(ProviderError::Kind::bad_response, 1,
                                    "non-numeric embedding component");
            }
            vec.push_back(v.get<double>());
        }
        double norm_sq = 0.0;
        for (double v : vec) {
            norm_sq += v * v;
        }
        if (norm_sq > 0.0) {
            double inv = 1.0 / std::sqrt(norm_sq);
            for (double& v : vec) {
                v *= inv;
            }
        }
        out.push_back(std::move(vec));
    }
    return out;
}

} // namespace curator
