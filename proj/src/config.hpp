#pragma once

#include <filesystem>
#include <memory>
#include <optional>

#include "embedding.hpp"
#include "llm.hpp"
#include "loop.hpp"

namespace curator {

struct RunConfig {
    TaskSpec task;
    LoopConfig loop;
    bool mock_provider = false;
    std::filesystem::path mock_script;          // when mock_provider
    ProviderConfig live_provider;               // when !mock_provider
    std::optional<EmbeddingConfig> embedding;   // required for remote featurizers
    std::filesystem::path output_dir;
};

// Loads and validates a JSON run configuration. Exactly one of a live
// provider or a mock script must be configured; relative paths resolve
// against the config file's directory. Unknown keys are rejected.
RunConfig load_run_config(const std::filesystem::path& path);

std::unique_ptr<Provider> make_provider(const RunConfig& config);
FeatureEngine make_engine(const RunConfig& config);

} // namespace curator
