#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "featurizer.hpp"

namespace curator {

struct TrainConfig {
    double learning_rate = 0.1;
    double l2_lambda = 1e-4;
    int max_epochs = 200;
    double loss_tolerance = 1e-6;
    // weights always start at zero; the objective is convex, so no RNG

    void validate() const;
};

// Linear softmax classifier over featurizer vectors.
struct Model {
    FeaturizerSpec featurizer;
    std::vector<std::string> labels; // ordered, equals the task label order
    uint32_t dimension = 0;
    std::vector<double> weights; // C x D, row-major
    std::vector<double> bias;    // C

    size_t num_classes() const { return labels.size(); }
    double& w(size_t c, size_t j) { return weights[c * dimension + j]; }
    double w(size_t c, size_t j) const { return weights[c * dimension + j]; }

    static Model zero(const LabelSet& labels, const FeaturizerSpec& spec,
                      uint32_t dimension);
};

struct TrainingInstance {
    SparseVec features;
    size_t class_index = 0;
};

struct LossGrad {
    double loss = 0.0;
    std::vector<double> grad_weights; // C x D, row-major
    std::vector<double> grad_bias;    // C
};

// Multinomial logistic loss with L2 penalty on the weights:
//   loss = -(1/N) sum_i log softmax(W x_i + b)[y_i] + lambda * ||W||_F^2
// Gradients are the exact analytic derivatives. Throws EmptyBatch.
LossGrad loss_and_gradient(const Model& model,
                           const std::vector<TrainingInstance>& batch,
                           double l2_lambda);

// Full-batch gradient descent from zero initialization; stops after
// max_epochs or when the loss change drops below loss_tolerance.
// Deterministic for identical inputs.
Model train(const LabelSet& labels, const Dataset& dataset, const FeatureEngine& engine,
            const TrainConfig& config);
Model train(const LabelSet& labels, const Dataset& dataset, const FeaturizerSpec& spec,
            const TrainConfig& config);

struct Prediction {
    std::string label;
    size_t label_index = 0;
    std::vector<double> probabilities;
};

// softmax(W x + b); argmax label with ties broken by lowest class index.
Prediction predict_vector(const Model& model, const SparseVec& features);
Prediction predict(const Model& model, const FeatureEngine& engine,
                   const std::string& text);
Prediction predict(const Model& model, const std::string& text);

// Single-file model persistence; save/load round-trips to bitwise-equal
// predictions.
void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

} // namespace curator
