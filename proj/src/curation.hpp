#pragma once

#include <map>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "featurizer.hpp"

namespace curator {

struct CurationPolicy {
    int per_class_budget = 64;      // B: total accepted generated examples per class
    int batch_per_class = 8;        // g: requested per class per iteration
    double near_dup_cosine = 0.95;  // reject vs train/earlier-accepted at or above
    double val_overlap_cosine = 0.90; // reject vs validation at or above
    int balance_tolerance = 8;      // advisory spread bound; balance is enforced
                                    // by construction through request_plan

    void validate() const;
};

// Accepted generated examples per class, capped at the per-class budget.
class BudgetLedger {
public:
    BudgetLedger(const LabelSet& labels, int per_class_budget);

    int budget() const { return budget_; }
    int generated(size_t class_index) const { return counts_.at(class_index); }
    int remaining(size_t class_index) const { return budget_ - counts_.at(class_index); }
    void add(size_t class_index);
    bool exhausted() const;
    std::map<std::string, int> counts() const;
    const std::vector<std::string>& labels() const { return labels_; }

private:
    std::vector<std::string> labels_;
    std::vector<int> counts_;
    int budget_ = 0;
};

enum class RejectReason {
    empty_text,
    invalid_label,
    exact_duplicate,
    near_duplicate,
    val_overlap,
    budget_exhausted,
};

std::string_view to_string(RejectReason reason);

struct Rejection {
    Example example;
    RejectReason reason; // first failing check in the documented order
};

// Standard cosine; 0 if either vector is zero.
double cosine_similarity(const SparseVec& a, const SparseVec& b);

struct FilterResult {
    std::vector<Example> accepted;
    std::vector<Rejection> rejections;
};

// Applies the acceptance checks to each candidate in order: empty_text,
// invalid_label, exact_duplicate (normalized text already in train, val, or
// an earlier-accepted candidate), near_duplicate (cosine >= near_dup_cosine
// vs any train or earlier-accepted vector), val_overlap (cosine >=
// val_overlap_cosine vs any validation vector), budget_exhausted. Accepted
// examples increment the ledger; accepted + rejections partition the input.
FilterResult filter_batch(const std::vector<Example>& candidates, const Dataset& train,
                          const Dataset& val, BudgetLedger& ledger,
                          const CurationPolicy& policy, const FeatureEngine& features);

// Per-class request counts for the next generation call: batch_per_class for
// every class (priority classes when an analysis names any), half that
// (at least 1) for the rest, all capped by the remaining budget.
std::map<std::string, int> request_plan(const BudgetLedger& ledger,
                                        const CurationPolicy& policy,
                                        const std::vector<std::string>& priority_labels);

} // namespace curator
