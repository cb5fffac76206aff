#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "http.hpp"
#include "json.hpp"

namespace curator {

enum class Role { system, user, assistant };

std::string_view to_string(Role role);

struct ChatMessage {
    Role role;
    std::string content;
};

struct CompletionRequest {
    std::vector<ChatMessage> messages;
    double temperature = 0.7;
    int max_output_tokens = 2048;

    // Non-empty messages, first message is system, system/user content
    // non-empty.
    void validate() const;
};

struct ProviderConfig {
    std::string base_url;
    std::string model_name;
    std::string api_key_env_var;
    int timeout_seconds = 120;
    int max_retries = 3;
    // backoff between retries is exponential: 1 s base, factor 2

    void validate() const;
};

class Provider {
public:
    virtual ~Provider() = default;
    // Returns the assistant message content. Throws ProviderError.
    virtual std::string complete(const CompletionRequest& request) = 0;
};

// OpenAI-compatible chat-completions client: POST {base_url}/chat/completions
// with model/messages/temperature/max_tokens, reading the first choice's
// message content. API key comes from the configured environment variable and
// is sent as a bearer token; an empty variable name disables auth.
class LiveProvider : public Provider {
public:
    explicit LiveProvider(ProviderConfig config,
                          std::shared_ptr<HttpTransport> transport = nullptr,
                          Sleeper sleeper = {});

    std::string complete(const CompletionRequest& request) override;

private:
    ProviderConfig config_;
    std::shared_ptr<HttpTransport> transport_;
    Sleeper sleeper_;
};

// Replays a fixed list of assistant texts in order; the backbone of every
// offline test. Records incoming requests for assertions.
class MockProvider : public Provider {
public:
    explicit MockProvider(std::vector<std::string> script);

    // Script file: either a JSON array of strings or {"responses": [...]}.
    static std::vector<std::string> load_script(const std::filesystem::path& path);

    std::string complete(const CompletionRequest& request) override;

    size_t calls() const;
    size_t remaining() const;
    const std::vector<CompletionRequest>& requests() const { return requests_; }

private:
    std::vector<std::string> script_;
    size_t next_ = 0;
    std::vector<CompletionRequest> requests_;
    mutable std::mutex mutex_;
};

struct StructuredOutput {
    bool ok = false;
    nlohmann::json value;
    std::string raw;   // original assistant text, kept for re-prompt decisions
    std::string error; // parse failure description when !ok
};

// Parses the last fenced code block as JSON, or the whole trimmed text when
// no fence is present. Never throws: failures come back as !ok.
StructuredOutput extract_structured(const std::string& text);

} // namespace curator
