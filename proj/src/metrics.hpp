#pragma once

#include <string>
#include <vector>

#include "classifier.hpp"
#include "dataset.hpp"

namespace curator {

inline constexpr size_t kErrorTracesPerClass = 20;

struct ErrorTrace {
    std::string text;
    std::string true_label;
    std::string predicted_label;
    double predicted_probability = 0.0; // confidence assigned to the (wrong) prediction
};

struct EvalReport {
    std::vector<std::string> labels;           // class order for all fields below
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    std::vector<std::vector<int64_t>> confusion; // rows = true class, cols = predicted
    std::vector<double> per_class_error_rate;    // 0 for classes with no true examples
    std::vector<ErrorTrace> error_traces;        // misclassified only, capped per true
                                                 // class, highest confidence first
};

// Evaluates the model on every example. Per-class F1 uses the convention
// F1 = 0 when precision + recall = 0, and macro-F1 averages over all task
// classes, including classes absent from the dataset. Throws EmptyEvalSet.
EvalReport evaluate(const Model& model, const Dataset& dataset,
                    const FeatureEngine& engine);
EvalReport evaluate(const Model& model, const Dataset& dataset);

} // namespace curator
