// Independent reference implementations used to check the library. These are
// deliberately written as plain loops over the definitions, not as calls into
// the code under test.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "classifier.hpp"
#include "loop.hpp"

namespace oracle {

// FNV-1a 64-bit, restated from the published constants.
inline uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h = (h ^ c) * 1099511628211ULL;
    }
    return h;
}

// Central finite differences of the training loss over every parameter.
struct NumericGrad {
    std::vector<double> weights;
    std::vector<double> bias;
};

inline NumericGrad finite_difference_gradient(curator::Model model,
                                              const std::vector<curator::TrainingInstance>& batch,
                                              double l2_lambda, double step) {
    auto loss_at = [&](curator::Model& m) {
        return curator::loss_and_gradient(m, batch, l2_lambda).loss;
    };
    NumericGrad grad;
    grad.weights.resize(model.weights.size());
    grad.bias.resize(model.bias.size());
    for (size_t i = 0; i < model.weights.size(); ++i) {
        double saved = model.weights[i];
        model.weights[i] = saved + step;
        double up = loss_at(model);
        model.weights[i] = saved - step;
        double down = loss_at(model);
        model.weights[i] = saved;
        grad.weights[i] = (up - down) / (2.0 * step);
    }
    for (size_t i = 0; i < model.bias.size(); ++i) {
        double saved = model.bias[i];
        model.bias[i] = saved + step;
        double up = loss_at(model);
        model.bias[i] = saved - step;
        double down = loss_at(model);
        model.bias[i] = saved;
        grad.bias[i] = (up - down) / (2.0 * step);
    }
    return grad;
}

// Relative error between gradient vectors, measured over the concatenation.
inline double gradient_relative_error(const curator::LossGrad& analytic,
                                      const NumericGrad& numeric) {
    double diff_sq = 0.0;
    double a_sq = 0.0;
    double n_sq = 0.0;
    for (size_t i = 0; i < analytic.grad_weights.size(); ++i) {
        double d = analytic.grad_weights[i] - numeric.weights[i];
        diff_sq += d * d;
        a_sq += analytic.grad_weights[i] * analytic.grad_weights[i];
        n_sq += numeric.weights[i] * numeric.weights[i];
    }
    for (size_t i = 0; i < analytic.grad_bias.size(); ++i) {
        double d = analytic.grad_bias[i] - numeric.bias[i];
        diff_sq += d * d;
        a_sq += analytic.grad_bias[i] * analytic.grad_bias[i];
        n_sq += numeric.bias[i] * numeric.bias[i];
    }
    double denom = std::max({std::sqrt(a_sq), std::sqrt(n_sq), 1e-12});
    return std::sqrt(diff_sq) / denom;
}

// Brute-force recount of every evaluation field from raw (true, predicted,
// confidence, text) tuples.
struct RawPrediction {
    size_t true_class;
    size_t predicted_class;
    double predicted_probability;
    std::string text;
};

struct BruteMetrics {
    std::vector<std::vector<int64_t>> confusion;
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    std::vector<double> per_class_error_rate;
};

inline BruteMetrics brute_force_metrics(size_t num_classes,
                                        const std::vector<RawPrediction>& predictions) {
    BruteMetrics out;
    out.confusion.assign(num_classes, std::vector<int64_t>(num_classes, 0));
    int64_t correct = 0;
    for (const auto& p : predictions) {
        out.confusion[p.true_class][p.predicted_class] += 1;
        if (p.true_class == p.predicted_class) {
            ++correct;
        }
    }
    out.accuracy = static_cast<double>(correct) / static_cast<double>(predictions.size());

    double f1_total = 0.0;
    out.per_class_error_rate.assign(num_classes, 0.0);
    for (size_t c = 0; c < num_classes; ++c) {
        int64_t tp = 0;
        int64_t in_class = 0;
        int64_t predicted_as = 0;
        for (const auto& p : predictions) {
            if (p.true_class == c && p.predicted_class == c) {
                ++tp;
            }
            if (p.true_class == c) {
                ++in_class;
            }
            if (p.predicted_class == c) {
                ++predicted_as;
            }
        }
        double precision = predicted_as > 0 ? double(tp) / double(predicted_as) : 0.0;
        double recall = in_class > 0 ? double(tp) / double(in_class) : 0.0;
        if (precision + recall > 0.0) {
            f1_total += 2.0 * precision * recall / (precision + recall);
        }
        if (in_class > 0) {
            out.per_class_error_rate[c] = 1.0 - double(tp) / double(in_class);
        }
    }
    out.macro_f1 = f1_total / static_cast<double>(num_classes);
    return out;
}

// Direct transliteration of the stopping rule: stop at max_iterations when
// the history is that long; otherwise plateau when each of the last
// `patience` iterations improved on the best preceding metric (0 before the
// first iteration) by at most epsilon; otherwise budget exhaustion.
inline std::optional<curator::StopReason> brute_force_should_stop(
    const std::vector<double>& history, int max_iterations, double epsilon, int patience,
    bool budgets_exhausted) {
    int n = static_cast<int>(history.size());
    if (n >= max_iterations) {
        return curator::StopReason::max_iterations;
    }
    if (n >= patience) {
        int flat_tail = 0;
        for (int t = 0; t < n; ++t) {
            double best_before = 0.0;
            for (int i = 0; i < t; ++i) {
                best_before = std::max(best_before, history[i]);
            }
            bool improving = history[t] - best_before > epsilon;
            flat_tail = improving ? 0 : flat_tail + 1;
        }
        if (flat_tail >= patience) {
            return curator::StopReason::plateau;
        }
    }
    if (budgets_exhausted) {
        return curator::StopReason::budget_exhausted;
    }
    return std::nullopt;
}

} // namespace oracle
