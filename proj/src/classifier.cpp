#include "classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"

namespace curator {

void TrainConfig::validate() const {
    if (learning_rate <= 0.0) {
        throw ValidationError("learning_rate must be positive");
    }
    if (l2_lambda < 0.0) {
        throw ValidationError("l2_lambda must be non-negative");
    }
    if (max_epochs < 1) {
        throw ValidationError("max_epochs must be >= 1");
    }
    if (loss_tolerance <= 0.0) {
        throw ValidationError("loss_tolerance must be positive");
    }
}

Model Model::zero(const LabelSet& labels, const FeaturizerSpec& spec, uint32_t dimension) {
    Model m;
    m.featurizer = spec;
    m.labels = labels.names();
    m.dimension = dimension;
    m.weights.assign(m.labels.size() * static_cast<size_t>(dimension), 0.0);
    m.bias.assign(m.labels.size(), 0.0);
    return m;
}

namespace {

// softmax(W x + b) with max-subtraction for stability.
std::vector<double> class_probabilities(const Model& model, const SparseVec& x) {
    size_t C = model.num_classes();
    std::vector<double> logits(C);
    for (size_t c = 0; c < C; ++c) {
        double z = model.bias[c];
        for (const auto& [j, v] : x.entries) {
            z += model.w(c, j) * v;
        }
        logits[c] = z;
    }
    double max_logit = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    std::vector<double> probs(C);
    for (size_t c = 0; c < C; ++c) {
        probs[c] = std::exp(logits[c] - max_logit);
        sum += probs[c];
    }
    for (double& p : probs) {
        p /= sum;
    }
    return probs;
}

} // namespace

LossGrad loss_and_gradient(const Model& model, const std::vector<TrainingInstance>& batch,
                           double l2_lambda) {
    if (batch.empty()) {
        throw EmptyBatch();
    }
    size_t C = model.num_classes();
    size_t D = model.dimension;
    LossGrad out;
    out.grad_weights.assign(C * D, 0.0);
    out.grad_bias.assign(C, 0.0);

    double inv_n = 1.0 / static_cast<double>(batch.size());
    double nll = 0.0;
    for (const auto& inst : batch) {
        std::vector<double> probs = class_probabilities(model, inst.features);
        nll -= std::log(std::max(probs[inst.class_index], 1e-300));
        for (size_t c = 0; c < C; ++c) {
            double residual = probs[c] - (c == inst.class_index ? 1.0 : 0.0);
            out.grad_bias[c] += inv_n * residual;
            for (const auto& [j, v] : inst.features.entries) {
                out.grad_weights[c * D + j] += inv_n * residual * v;
            }
        }
    }

    double weight_norm_sq = 0.0;
    for (double w : model.weights) {
        weight_norm_sq += w * w;
    }
    out.loss = inv_n * nll + l2_lambda * weight_norm_sq;
    if (l2_lambda > 0.0) {
        for (size_t i = 0; i < out.grad_weights.size(); ++i) {
            out.grad_weights[i] += 2.0 * l2_lambda * model.weights[i];
        }
    }
    return out;
}

Model train(const LabelSet& labels, const Dataset& dataset, const FeatureEngine& engine,
            const TrainConfig& config) {
    config.validate();
    if (dataset.empty()) {
        throw EmptyTrainingSet();
    }
    if (dataset.distinct_labels_present() < 2) {
        throw DegenerateTrainingSet();
    }

    std::vector<std::string> texts;
    texts.reserve(dataset.size());
    for (const auto& ex : dataset.examples()) {
        texts.push_back(ex.text);
    }
    std::vector<SparseVec> vectors = engine.featurize_batch(texts);

    std::vector<TrainingInstance> batch;
    batch.reserve(dataset.size());
    for (size_t i = 0; i < dataset.size(); ++i) {
        batch.push_back({std::move(vectors[i]), *labels.index_of(dataset.examples()[i].label)});
    }

    FeaturizerSpec spec = engine.spec();
    uint32_t dimension = engine.dimension();
    spec.dimension = dimension;
    Model model = Model::zero(labels, spec, dimension);

    double prev_loss = 0.0;
    for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
        LossGrad lg = loss_and_gradient(model, batch, config.l2_lambda);
        for (size_t i = 0; i < model.weights.size(); ++i) {
            model.weights[i] -= config.learning_rate * lg.grad_weights[i];
        }
        for (size_t c = 0; c < model.bias.size(); ++c) {
            model.bias[c] -= config.learning_rate * lg.grad_bias[c];
        }
        if (epoch > 0 && std::abs(lg.loss - prev_loss) < config.loss_tolerance) {
            break;
        }
        prev_loss = lg.loss;
    }
    return model;
}

Model train(const LabelSet& labels, const Dataset& dataset, const FeaturizerSpec& spec,
            const TrainConfig& config) {
    return train(labels, dataset, FeatureEngine(spec), config);
}

Prediction predict_vector(const Model& model, const SparseVec& features) {
    Prediction out;
    out.probabilities = class_probabilities(model, features);
    out.label_index = 0;
    for (size_t c = 1; c < out.probabilities.size(); ++c) {
        if (out.probabilities[c] > out.probabilities[out.label_index]) {
            out.label_index = c;
        }
    }
    out.label = model.labels[out.label_index];
    return out;
}

Prediction predict(const Model& model, const FeatureEngine& engine,
                   const std::string& text) {
    return predict_vector(model, engine.featurize(text));
}

Prediction predict(const Model& model, const std::string& text) {
    FeaturizerSpec spec = model.featurizer;
    if (spec.kind != FeaturizerKind::hashed_ngram) {
        throw ValidationError(
            "predict(model, text) supports hashed_ngram models; remote models need an engine");
    }
    return predict_vector(model, featurize(spec, text));
}

void save_model(const Model& model, const std::filesystem::path& path) {
    nlohmann::json doc = {
        {"featurizer",
         {{"kind", std::string(to_string(model.featurizer.kind))},
          {"dimension", model.featurizer.dimension},
          {"unigrams", model.featurizer.unigrams},
          {"bigrams", model.featurizer.bigrams},
          {"hash_algorithm", model.featurizer.hash_algorithm}}},
        {"labels", model.labels},
        {"dimension", model.dimension},
        {"bias", model.bias},
    };
    // one weight row per class keeps lines manageable for large dimensions
    nlohmann::json rows = nlohmann::json::array();
    for (size_t c = 0; c < model.num_classes(); ++c) {
        rows.push_back(std::vector<double>(
            model.weights.begin() + static_cast<long>(c * model.dimension),
            model.weights.begin() + static_cast<long>((c + 1) * model.dimension)));
    }
    doc["weights"] = std::move(rows);

    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << doc.dump(2) << '\n';
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

Model load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw ParseError(1, "model file is not valid JSON");
    }
    try {
        Model m;
        const auto& f = doc.at("featurizer");
        std::string kind = f.at("kind").get<std::string>();
        if (kind == "hashed_ngram") {
            m.featurizer.kind = FeaturizerKind::hashed_ngram;
        } else if (kind == "remote_embedding") {
            m.featurizer.kind = FeaturizerKind::remote_embedding;
        } else {
            throw ValidationError("unknown featurizer kind \"" + kind + "\"");
        }
        m.featurizer.dimension = f.at("dimension").get<uint32_t>();
        m.featurizer.unigrams = f.at("unigrams").get<bool>();
        m.featurizer.bigrams = f.at("bigrams").get<bool>();
        m.featurizer.hash_algorithm = f.at("hash_algorithm").get<std::string>();
        m.featurizer.validate();
        m.labels = doc.at("labels").get<std::vector<std::string>>();
        m.dimension = doc.at("dimension").get<uint32_t>();
        m.bias = doc.at("bias").get<std::vector<double>>();
        const auto& rows = doc.at("weights");
        if (!rows.is_array() || rows.size() != m.labels.size()) {
            throw ValidationError("weight row count does not match label count");
        }
        m.weights.reserve(m.labels.size() * static_cast<size_t>(m.dimension));
        for (const auto& row : rows) {
            auto values = row.get<std::vector<double>>();
            if (values.size() != m.dimension) {
                throw ValidationError("weight row length does not match dimension");
            }
            m.weights.insert(m.weights.end(), values.begin(), values.end());
        }
        if (m.bias.size() != m.labels.size() || m.labels.size() < 2) {
            throw ValidationError("inconsistent model shapes");
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(1, std::string("model file: ") + e.what());
    }
}

} // namespace curator
