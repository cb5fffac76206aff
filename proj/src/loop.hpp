#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "classifier.hpp"
#include "curation.hpp"
#include "dataset.hpp"
#include "llm.hpp"
#include "metrics.hpp"

namespace curator {

struct LoopConfig {
    int max_iterations = 10;        // T_max
    double plateau_epsilon = 0.005; // minimum improvement that counts
    int plateau_patience = 2;       // consecutive non-improving iterations to stop
    int val_per_class = 16;
    // the loop-control metric is validation macro-F1
    CurationPolicy policy;
    TrainConfig train_config;
    FeaturizerSpec featurizer;
    uint64_t rng_seed = 0;

    void validate() const;
};

struct AnalysisRecord {
    std::vector<std::string> failure_modes;
    std::vector<std::string> data_needs;
    std::vector<std::string> priority_labels; // subset of the task labels
};

struct IterationRecord {
    int index = 0;             // t >= 1
    Dataset generated_batch;   // accepted examples only
    std::map<RejectReason, int> rejection_tallies;
    size_t train_size = 0;     // cumulative after this iteration
    EvalReport eval;
    std::optional<AnalysisRecord> analysis;
    double metric_value = 0.0; // equals eval.macro_f1
    double improvement_over_best = 0.0;
};

struct LoopState {
    TaskSpec task;
    Dataset train_set;      // cumulative, seeded from the task's seed examples
    Dataset validation_set; // generated once at initialization, then frozen
    BudgetLedger ledger;
    std::vector<IterationRecord> history;
    int best_index = 0; // 1-based; 0 = no iteration yet
    std::optional<Model> best_model;
    double best_metric = 0.0;
    std::optional<AnalysisRecord> last_analysis;
    bool provider_failed_after_eval = false; // analyze-stage provider failure
};

enum class StopReason { max_iterations, plateau, budget_exhausted, provider_failure };

std::string_view to_string(StopReason reason);

struct CurationResult {
    Dataset final_train_set; // cumulative train set as of the best iteration
    std::optional<Model> model;
    StopReason stop_reason;
    std::vector<IterationRecord> history;
    Dataset validation_set;
    int best_index = 0;
    double best_metric = 0.0;
};

// Prompt templates. The generate prompt carries every label with its
// description, up to three recent examples per class, the latest analysis if
// any, and the per-class request counts; the analyze prompt carries accuracy,
// macro-F1, the labeled confusion matrix, per-class error rates, and the
// capped error traces.
std::string build_validation_prompt(const TaskSpec& task,
                                    const std::map<std::string, int>& needed);
std::string build_generate_prompt(const LoopState& state,
                                  const std::map<std::string, int>& plan);
std::string build_analyze_prompt(const LoopState& state, const EvalReport& eval);

// Synthesizes the provisional validation set (class-balanced, disjoint from
// the seeds, re-prompting up to 3 times for short classes) and seeds the
// training set. Throws InitializationFailed when any class ends below
// ceil(val_per_class / 2); provider errors propagate.
LoopState initialize(const TaskSpec& task, const LoopConfig& config, Provider& provider);

// One generate -> filter -> train & evaluate -> analyze cycle. Appends the
// record to state.history and returns a copy. Generate-stage provider errors
// propagate; analyze-stage provider errors complete the record with
// analysis = none and set state.provider_failed_after_eval.
IterationRecord run_iteration(LoopState& state, const LoopConfig& config,
                              Provider& provider, const FeatureEngine& engine);

// Stop decision over the metric history. An iteration is non-improving iff
// its metric exceeds the best preceding metric by at most plateau_epsilon
// (the first iteration is measured against 0). Precedence: max_iterations,
// then plateau, then budget_exhausted.
std::optional<StopReason> should_stop(const std::vector<double>& metric_history,
                                      const BudgetLedger& ledger,
                                      const LoopConfig& config);

// Full closed loop: initialize, iterate until a stop fires, return the best
// iteration's artifacts. Deterministic for a fixed task, config, and mock
// script.
CurationResult run(const TaskSpec& task, const LoopConfig& config, Provider& provider);
CurationResult run(const TaskSpec& task, const LoopConfig& config, Provider& provider,
                   const FeatureEngine& engine);

} // namespace curator
