#include "llm.hpp"

#include <cstdlib>
#include <fstream>

namespace curator {

std::string_view to_string(Role role) {
    switch (role) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
    }
    return "user";
}

void CompletionRequest::validate() const {
    if (messages.empty()) {
        throw ValidationError("completion request has no messages");
    }
    if (messages.front().role != Role::system) {
        throw ValidationError("first message must have the system role");
    }
    if (temperature < 0.0) {
        throw ValidationError("temperature must be >= 0");
    }
    for (const auto& m : messages) {
        if (m.role != Role::assistant && m.content.empty()) {
            throw ValidationError("system/user messages must have non-empty content");
        }
    }
}

void ProviderConfig::validate() const {
    if (base_url.empty()) {
        throw ValidationError("provider base_url must be non-empty");
    }
    if (model_name.empty()) {
        throw ValidationError("provider model_name must be non-empty");
    }
    if (timeout_seconds <= 0) {
        throw ValidationError("timeout_seconds must be positive");
    }
    if (max_retries < 0) {
        throw ValidationError("max_retries must be >= 0");
    }
}

LiveProvider::LiveProvider(ProviderConfig config, std::shared_ptr<HttpTransport> transport,
                           Sleeper sleeper)
    : config_(std::move(config)),
      transport_(transport ? std::move(transport) : make_httplib_transport()),
      sleeper_(std::move(sleeper)) {
    config_.validate();
}

std::string LiveProvider::complete(const CompletionRequest& request) {
    request.validate();

    nlohmann::json messages = nlohmann::json::array();
    for (const auto& m : request.messages) {
        messages.push_back({{"role", std::string(to_string(m.role))}, {"content", m.content}});
    }
    nlohmann::json body = {
        {"model", config_.model_name},
        {"messages", std::move(messages)},
        {"temperature", request.temperature},
        {"max_tokens", request.max_output_tokens},
    };

    HttpHeaders headers;
    if (!config_.api_key_env_var.empty()) {
        const char* key = std::getenv(config_.api_key_env_var.c_str());
        if (key == nullptr || *key == '\0') {
            throw ProviderError(ProviderError::Kind::config, 0,
                                "environment variable " + config_.api_key_env_var +
                                    " is not set");
        }
        headers.emplace_back("Authorization", std::string("Bearer ") + key);
    }

    HttpResponse res = post_with_retry(*transport_, config_.base_url, "/chat/completions",
                                       headers, body.dump(), config_.timeout_seconds,
                                       config_.max_retries, sleeper_);
    if (res.status < 200 || res.status >= 300) {
        throw ProviderError(ProviderError::Kind::http_status, 1,
                            "chat completion returned HTTP " + std::to_string(res.status));
    }
    nlohmann::json parsed = nlohmann::json::parse(res.body, nullptr, false);
    if (parsed.is_discarded()) {
        throw ProviderError(ProviderError::Kind::bad_response, 1,
                            "chat completion response is not JSON");
    }
    if (!parsed.contains("choices") || !parsed["choices"].is_array() ||
        parsed["choices"].empty()) {
        throw ProviderError(ProviderError::Kind::bad_response, 1,
                            "chat completion response has no choices");
    }
    const auto& message = parsed["choices"][0]["message"];
    if (!message.is_object() || !message.contains("content") ||
        !message["content"].is_string()) {
        throw ProviderError(ProviderError::Kind::bad_response, 1,
                            "chat completion choice has no message content");
    }
    return message["content"].get<std::string>();
}

MockProvider::MockProvider(std::vector<std::string> script) : script_(std::move(script)) {}

MockProvider MockProvider::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open mock script " + path.string());
    }
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded()) {
        throw ConfigError("mock script " + path.string() + " is not valid JSON");
    }
    const nlohmann::json* list = &doc;
    if (doc.is_object() && doc.contains("responses")) {
        list = &doc["responses"];
    }
    if (!list->is_array()) {
        throw ConfigError("mock script must be a JSON array of assistant texts");
    }
    std::vector<std::string> script;
    script.reserve(list->size());
    for (const auto& item : *list) {
        if (!item.is_string()) {
            throw ConfigError("mock script entries must be strings");
        }
        script.push_back(item.get<std::string>());
    }
    return MockProvider(std::move(script));
}

std::string MockProvider::complete(const CompletionRequest& request) {
    request.validate();
    std::lock_guard<std::mutex> lock(mutex_);
    requests_.push_back(request);
    if (next_ >= script_.size()) {
        throw ProviderError(ProviderError::Kind::script_exhausted,
                            static_cast<int>(next_ + 1),
                            "mock script exhausted after " + std::to_string(script_.size()) +
                                " responses");
    }
    return script_[next_++];
}

size_t MockProvider::calls() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return requests_.size();
}

size_t MockProvider::remaining() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return script_.size() - std::min(next_, script_.size());
}

StructuredOutput extract_structured(const std::string& text) {
    StructuredOutput out;
    out.raw = text;

    // Collect fenced blocks; the payload is the last complete one.
    std::string candidate;
    bool fenced = false;
    size_t pos = 0;
    while (true) {
        size_t open = text.find("```", pos);
        if (open == std::string::npos) {
            break;
        }
        size_t content_start = text.find('\n', open + 3);
        if (content_start == std::string::npos) {
            break; // opening fence with no body
        }
        ++content_start;
        size_t close = text.find("```", content_start);
        if (close == std::string::npos) {
            break;
        }
        candidate = text.substr(content_start, close - content_start);
        fenced = true;
        pos = close + 3;
    }
    if (!fenced) {
        candidate = text;
    }

    size_t b = candidate.find_first_not_of(" \t\r\n");
    size_t e = candidate.find_last_not_of(" \t\r\n");
    if (b == std::string::npos) {
        out.error = "empty payload";
        return out;
    }
    candidate = candidate.substr(b, e - b + 1);

    nlohmann::json parsed = nlohmann::json::parse(candidate, nullptr, false);
    if (parsed.is_discarded()) {
        out.error = fenced ? "last fenced block is not valid JSON"
                           : "text is not valid JSON";
        return out;
    }
    out.ok = true;
    out.value = std::move(parsed);
    return out;
}

} // namespace curator
