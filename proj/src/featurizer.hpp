#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "embedding.hpp"
#include "errors.hpp"

namespace curator {

// Sparse feature vector, entries sorted by index with no repeats.
struct SparseVec {
    std::vector<std::pair<uint32_t, double>> entries;

    bool zero() const { return entries.empty(); }
    double dot(const SparseVec& other) const;
    double norm() const;
};

enum class FeaturizerKind { hashed_ngram, remote_embedding };

std::string_view to_string(FeaturizerKind kind);

inline constexpr char kHashAlgorithm[] = "fnv1a-64";

struct FeaturizerSpec {
    FeaturizerKind kind = FeaturizerKind::hashed_ngram;
    uint32_t dimension = 1u << 18;
    bool unigrams = true;
    bool bigrams = true;
    std::string hash_algorithm = kHashAlgorithm;

    void validate() const;
};

uint64_t fnv1a64(std::string_view data);

// Hashed n-gram features: tokens are the whitespace split of
// normalize_text(text); features are unigrams plus adjacent bigrams joined by
// "_", hashed with 64-bit FNV-1a mod dimension, counts accumulated, then
// L2-normalized. An empty token list yields the zero vector.
SparseVec featurize(const FeaturizerSpec& spec, std::string_view text);

// Uniform front-end over the two featurizer kinds. The hashed path is pure;
// the remote path batches texts through an EmbeddingClient and reports the
// provider's dimension once known.
class FeatureEngine {
public:
    explicit FeatureEngine(FeaturizerSpec spec);
    FeatureEngine(FeaturizerSpec spec, std::shared_ptr<EmbeddingClient> client);

    const FeaturizerSpec& spec() const { return spec_; }
    uint32_t dimension() const;

    SparseVec featurize(const std::string& text) const;
    std::vector<SparseVec> featurize_batch(const std::vector<std::string>& texts) const;

private:
    FeaturizerSpec spec_;
    std::shared_ptr<EmbeddingClient> client_;
    mutable uint32_t reported_dimension_ = 0;
};

} // namespace curator
