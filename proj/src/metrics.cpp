#include "metrics.hpp"

#include <algorithm>

namespace curator {

EvalReport evaluate(const Model& model, const Dataset& dataset,
                    const FeatureEngine& engine) {
    if (dataset.empty()) {
        throw EmptyEvalSet();
    }
    const LabelSet& labels = dataset.label_set();
    if (labels.names() != model.labels) {
        throw ValidationError("model and dataset label sets differ");
    }
    size_t C = labels.size();

    EvalReport report;
    report.labels = labels.names();
    report.confusion.assign(C, std::vector<int64_t>(C, 0));

    std::vector<std::string> texts;
    texts.reserve(dataset.size());
    for (const auto& ex : dataset.examples()) {
        texts.push_back(ex.text);
    }
    std::vector<SparseVec> vectors = engine.featurize_batch(texts);

    struct Mistake {
        ErrorTrace trace;
        size_t true_class;
        size_t order; // dataset position, for a stable sort
    };
    std::vector<Mistake> mistakes;

    int64_t correct = 0;
    for (size_t i = 0; i < dataset.size(); ++i) {
        const Example& ex = dataset.examples()[i];
        size_t true_class = *labels.index_of(ex.label);
        Prediction pred = predict_vector(model, vectors[i]);
        ++report.confusion[true_class][pred.label_index];
        if (pred.label_index == true_class) {
            ++correct;
        } else {
            mistakes.push_back({{ex.text, ex.label, pred.label,
                                 pred.probabilities[pred.label_index]},
                                true_class,
                                i});
        }
    }
    report.accuracy = static_cast<double>(correct) / static_cast<double>(dataset.size());

    // Per-class precision/recall from the confusion matrix; zero-denominator
    // classes contribute F1 = 0 and still divide the macro average.
    double f1_sum = 0.0;
    report.per_class_error_rate.assign(C, 0.0);
    for (size_t c = 0; c < C; ++c) {
        int64_t row_sum = 0;
        int64_t col_sum = 0;
        for (size_t k = 0; k < C; ++k) {
            row_sum += report.confusion[c][k];
            col_sum += report.confusion[k][c];
        }
        int64_t tp = report.confusion[c][c];
        double precision = col_sum > 0 ? static_cast<double>(tp) / col_sum : 0.0;
        double recall = row_sum > 0 ? static_cast<double>(tp) / row_sum : 0.0;
        double f1 = precision + recall > 0.0
                        ? 2.0 * precision * recall / (precision + recall)
                        : 0.0;
        f1_sum += f1;
        if (row_sum > 0) {
            report.per_class_error_rate[c] =
                1.0 - static_cast<double>(tp) / static_cast<double>(row_sum);
        }
    }
    report.macro_f1 = f1_sum / static_cast<double>(C);

    std::stable_sort(mistakes.begin(), mistakes.end(), [](const Mistake& a, const Mistake& b) {
        return a.trace.predicted_probability > b.trace.predicted_probability;
    });
    std::vector<size_t> taken(C, 0);
    for (auto& m : mistakes) {
        if (taken[m.true_class] < kErrorTracesPerClass) {
            ++taken[m.true_class];
            report.error_traces.push_back(std::move(m.trace));
        }
    }
    return report;
}

EvalReport evaluate(const Model& model, const Dataset& dataset) {
    return evaluate(model, dataset, FeatureEngine(model.featurizer));
}

} // namespace curator
