#include "curation.hpp"

#include <algorithm>

#include "text_norm.hpp"

namespace curator {

void CurationPolicy::validate() const {
    if (batch_per_class < 1) {
        throw ValidationError("batch_per_class must be >= 1");
    }
    if (per_class_budget < batch_per_class) {
        throw ValidationError("per_class_budget must be >= batch_per_class");
    }
    if (near_dup_cosine <= 0.0 || near_dup_cosine > 1.0) {
        throw ValidationError("near_dup_cosine must be in (0, 1]");
    }
    if (val_overlap_cosine <= 0.0 || val_overlap_cosine > 1.0) {
        throw ValidationError("val_overlap_cosine must be in (0, 1]");
    }
    if (balance_tolerance < 0) {
        throw ValidationError("balance_tolerance must be >= 0");
    }
}

BudgetLedger::BudgetLedger(const LabelSet& labels, int per_class_budget)
    : labels_(labels.names()), counts_(labels.size(), 0), budget_(per_class_budget) {
    if (per_class_budget < 1) {
        throw ValidationError("per-class budget must be >= 1");
    }
}

void BudgetLedger::add(size_t class_index) {
    if (counts_.at(class_index) >= budget_) {
        throw ValidationError("ledger increment would exceed the per-class budget");
    }
    ++counts_[class_index];
}

bool BudgetLedger::exhausted() const {
    return std::all_of(counts_.begin(), counts_.end(),
                       [this](int c) { return c >= budget_; });
}

std::map<std::string, int> BudgetLedger::counts() const {
    std::map<std::string, int> out;
    for (size_t i = 0; i < labels_.size(); ++i) {
        out[labels_[i]] = counts_[i];
    }
    return out;
}

std::string_view to_string(RejectReason reason) {
    switch (reason) {
    case RejectReason::empty_text: return "empty_text";
    case RejectReason::invalid_label: return "invalid_label";
    case RejectReason::exact_duplicate: return "exact_duplicate";
    case RejectReason::near_duplicate: return "near_duplicate";
    case RejectReason::val_overlap: return "val_overlap";
    case RejectReason::budget_exhausted: return "budget_exhausted";
    }
    return "empty_text";
}

double cosine_similarity(const SparseVec& a, const SparseVec& b) {
    double na = a.norm();
    double nb = b.norm();
    if (na == 0.0 || nb == 0.0) {
        return 0.0;
    }
    return a.dot(b) / (na * nb);
}

FilterResult filter_batch(const std::vector<Example>& candidates, const Dataset& train,
                          const Dataset& val, BudgetLedger& ledger,
                          const CurationPolicy& policy, const FeatureEngine& features) {
    policy.validate();
    const LabelSet& labels = train.label_set();

    auto featurize_all = [&](const Dataset& d) {
        std::vector<std::string> texts;
        texts.reserve(d.size());
        for (const auto& ex : d.examples()) {
            texts.push_back(ex.text);
        }
        return features.featurize_batch(texts);
    };
    std::vector<SparseVec> train_vecs = featurize_all(train);
    std::vector<SparseVec> val_vecs = featurize_all(val);

    std::unordered_set<std::string> seen;
    for (const auto& ex : train.examples()) {
        seen.insert(normalize_text(ex.text));
    }
    for (const auto& ex : val.examples()) {
        seen.insert(normalize_text(ex.text));
    }

    FilterResult result;
    std::vector<SparseVec> accepted_vecs;
    for (const auto& candidate : candidates) {
        std::string key = normalize_text(candidate.text);
        if (key.empty()) {
            result.rejections.push_back({candidate, RejectReason::empty_text});
            continue;
        }
        auto class_index = labels.index_of(candidate.label);
        if (!class_index) {
            result.rejections.push_back({candidate, RejectReason::invalid_label});
            continue;
        }
        if (seen.count(key) > 0) {
            result.rejections.push_back({candidate, RejectReason::exact_duplicate});
            continue;
        }
        SparseVec vec = features.featurize(candidate.text);
        auto too_close = [&](const std::vector<SparseVec>& pool, double threshold) {
            return std::any_of(pool.begin(), pool.end(), [&](const SparseVec& other) {
                return cosine_similarity(vec, other) >= threshold;
            });
        };
        if (too_close(train_vecs, policy.near_dup_cosine) ||
            too_close(accepted_vecs, policy.near_dup_cosine)) {
            result.rejections.push_back({candidate, RejectReason::near_duplicate});
            continue;
        }
        if (too_close(val_vecs, policy.val_overlap_cosine)) {
            result.rejections.push_back({candidate, RejectReason::val_overlap});
            continue;
        }
        if (ledger.remaining(*class_index) <= 0) {
            result.rejections.push_back({candidate, RejectReason::budget_exhausted});
            continue;
        }
        ledger.add(*class_index);
        seen.insert(std::move(key));
        accepted_vecs.push_back(std::move(vec));
        result.accepted.push_back(candidate);
    }
    return result;
}

std::map<std::string, int> request_plan(const BudgetLedger& ledger,
                                        const CurationPolicy& policy,
                                        const std::vector<std::string>& priority_labels) {
    std::map<std::string, int> plan;
    const auto& labels = ledger.labels();
    for (size_t i = 0; i < labels.size(); ++i) {
        int want = policy.batch_per_class;
        if (!priority_labels.empty() &&
            std::find(priority_labels.begin(), priority_labels.end(), labels[i]) ==
                priority_labels.end()) {
            want = std::max(policy.batch_per_class / 2, 1);
        }
        plan[labels[i]] = std::min(want, ledger.remaining(i));
    }
    return plan;
}

} // namespace curator
