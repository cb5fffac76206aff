#include "featurizer.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "text_norm.hpp"

namespace curator {

double SparseVec::dot(const SparseVec& other) const {
    double sum = 0.0;
    auto a = entries.begin();
    auto b = other.entries.begin();
    while (a != entries.end() && b != other.entries.end()) {
        if (a->first < b->first) {
            ++a;
        } else if (b->first < a->first) {
            ++b;
        } else {
            sum += a->second * b->second;
            ++a;
            ++b;
        }
    }
    return sum;
}

double SparseVec::norm() const {
    double sum = 0.0;
    for (const auto& [_, w] : entries) {
        sum += w * w;
    }
    return std::sqrt(sum);
}

std::string_view to_string(FeaturizerKind kind) {
    switch (kind) {
    case FeaturizerKind::hashed_ngram: return "hashed_ngram";
    case FeaturizerKind::remote_embedding: return "remote_embedding";
    }
    return "hashed_ngram";
}

void FeaturizerSpec::validate() const {
    if (dimension < 2) {
        throw ValidationError("featurizer dimension must be >= 2");
    }
    if (!unigrams && !bigrams) {
        throw ValidationError("at least one n-gram order must be enabled");
    }
    if (hash_algorithm != kHashAlgorithm) {
        throw ValidationError("unsupported hash algorithm \"" + hash_algorithm + "\"");
    }
}

uint64_t fnv1a64(std::string_view data) {
    uint64_t hash = 14695981039346656037ULL;
    for (unsigned char byte : std::string_view(data)) {
        hash ^= byte;
        hash *= 1099511628211ULL;
    }
    return hash;
}

SparseVec featurize(const FeaturizerSpec& spec, std::string_view text) {
    if (spec.kind != FeaturizerKind::hashed_ngram) {
        throw ValidationError("featurize() applies to the hashed_ngram kind only");
    }
    std::vector<std::string> tokens = normalized_tokens(text);
    std::map<uint32_t, double> counts;
    auto add = [&](std::string_view feature) {
        counts[static_cast<uint32_t>(fnv1a64(feature) % spec.dimension)] += 1.0;
    };
    if (spec.unigrams) {
        for (const auto& tok : tokens) {
            add(tok);
        }
    }
    if (spec.bigrams) {
        for (size_t i = 0; i + 1 < tokens.size(); ++i) {
            add(tokens[i] + "_" + tokens[i + 1]);
        }
    }
    SparseVec vec;
    vec.entries.assign(counts.begin(), counts.end());
    double n = vec.norm();
    if (n > 0.0) {
        for (auto& [_, w] : vec.entries) {
            w /= n;
        }
    }
    return vec;
}

FeatureEngine::FeatureEngine(FeaturizerSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    if (spec_.kind == FeaturizerKind::remote_embedding) {
        throw ValidationError("remote_embedding featurizer requires an embedding client");
    }
}

FeatureEngine::FeatureEngine(FeaturizerSpec spec, std::shared_ptr<EmbeddingClient> client)
    : spec_(std::move(spec)), client_(std::move(client)) {
    spec_.validate();
    if (spec_.kind == FeaturizerKind::remote_embedding && !client_) {
        throw ValidationError("remote_embedding featurizer requires an embedding client");
    }
}

uint32_t FeatureEngine::dimension() const {
    if (spec_.kind == FeaturizerKind::hashed_ngram || reported_dimension_ == 0) {
        return spec_.dimension;
    }
    return reported_dimension_;
}

SparseVec FeatureEngine::featurize(const std::string& text) const {
    if (spec_.kind == FeaturizerKind::hashed_ngram) {
        return curator::featurize(spec_, text);
    }
    return featurize_batch({text}).front();
}

std::vector<SparseVec> FeatureEngine::featurize_batch(
    const std::vector<std::string>& texts) const {
    std::vector<SparseVec> out;
    out.reserve(texts.size());
    if (spec_.kind == FeaturizerKind::hashed_ngram) {
        for (const auto& t : texts) {
            out.push_back(curator::featurize(spec_, t));
        }
        return out;
    }
    if (texts.empty()) {
        return out;
    }
    auto dense = client_->embed_batch(texts);
    for (const auto& vec : dense) {
        if (reported_dimension_ == 0) {
            reported_dimension_ = static_cast<uint32_t>(vec.size());
        } else if (reported_dimension_ != vec.size()) {
            throw ProviderError(ProviderError::Kind::bad_response, 1,
                                "embedding dimension changed between calls");
        }
        SparseVec sv;
        sv.entries.reserve(vec.size());
        for (size_t i = 0; i < vec.size(); ++i) {
            if (vec[i] != 0.0) {
                sv.entries.emplace_back(static_cast<uint32_t>(i), vec[i]);
            }
        }
        out.push_back(std::move(sv));
    }
    return out;
}

} // namespace curator
