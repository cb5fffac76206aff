#pragma once

#include <memory>
#include <string>
#include <vector>

#include "http.hpp"

namespace curator {

struct EmbeddingConfig {
    std::string base_url;
    std::string model_name;
    std::string api_key_env_var;
    int timeout_seconds = 120;
    int max_retries = 3;
};

// Client for an OpenAI-compatible embeddings endpoint. Returned vectors are
// L2-normalized client-side.
class EmbeddingClient {
public:
    explicit EmbeddingClient(EmbeddingConfig config,
                             std::shared_ptr<HttpTransport> transport = nullptr,
                             Sleeper sleeper = {});

    // One vector per input text, in order. Throws ProviderError on transport
    // failure after retries, on a non-2xx status, or if the provider returns
    // a different number of vectors than inputs.
    std::vector<std::vector<double>> embed_batch(const std::vector<std::string>& texts);

private:
    EmbeddingConfig config_;
    std::shared_ptr<HttpTransport> transport_;
    Sleeper sleeper_;
};

} // namespace curator
