#include "config.hpp"

#include <fstream>
#include <set>

namespace curator {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& context) {
    for (const auto& [key, _] : obj.items()) {
        if (allowed.count(key) == 0) {
            throw ConfigError("unknown key \"" + key + "\" in " + context);
        }
    }
}

const json& require(const json& obj, const char* key, const std::string& context) {
    if (!obj.contains(key)) {
        throw ConfigError(std::string("missing \"") + key + "\" in " + context);
    }
    return obj[key];
}

std::string get_string(const json& obj, const char* key, const std::string& context) {
    const json& v = require(obj, key, context);
    if (!v.is_string()) {
        throw ConfigError(std::string("\"") + key + "\" in " + context +
                          " must be a string");
    }
    return v.get<std::string>();
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& context) {
    if (!obj.contains(key)) {
        return fallback;
    }
    try {
        return obj[key].get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("\"") + key + "\" in " + context +
                          " has the wrong type");
    }
}

LabelSet parse_labels(const json& task, const std::string& context) {
    const json& labels = require(task, "labels", context);
    if (!labels.is_array()) {
        throw ConfigError("\"labels\" must be an array in " + context);
    }
    std::vector<Label> out;
    for (const auto& item : labels) {
        if (item.is_string()) {
            out.push_back({item.get<std::string>(), {}});
        } else if (item.is_object()) {
            check_keys(item, {"name", "description"}, context + ".labels[]");
            Label label;
            label.name = get_string(item, "name", context + ".labels[]");
            label.description = get_or<std::string>(item, "description", {}, context);
            out.push_back(std::move(label));
        } else {
            throw ConfigError("label entries must be strings or objects in " + context);
        }
    }
    return LabelSet(std::move(out));
}

FeaturizerSpec parse_featurizer(const json& obj, std::optional<EmbeddingConfig>* embedding) {
    const std::string context = "featurizer";
    check_keys(obj, {"kind", "dimension", "ngram_orders", "embedding"}, context);
    FeaturizerSpec spec;
    std::string kind = get_or<std::string>(obj, "kind", "hashed_ngram", context);
    if (kind == "hashed_ngram") {
        spec.kind = FeaturizerKind::hashed_ngram;
    } else if (kind == "remote_embedding") {
        spec.kind = FeaturizerKind::remote_embedding;
    } else {
        throw ConfigError("unknown featurizer kind \"" + kind + "\"");
    }
    spec.dimension = get_or<uint32_t>(obj, "dimension", spec.dimension, context);
    if (obj.contains("ngram_orders")) {
        if (!obj["ngram_orders"].is_array()) {
            throw ConfigError("\"ngram_orders\" must be an array of 1 and/or 2");
        }
        spec.unigrams = false;
        spec.bigrams = false;
        for (const auto& v : obj["ngram_orders"]) {
            if (v == 1) {
                spec.unigrams = true;
            } else if (v == 2) {
                spec.bigrams = true;
            } else {
                throw ConfigError("\"ngram_orders\" entries must be 1 or 2");
            }
        }
    }
    if (spec.kind == FeaturizerKind::remote_embedding) {
        if (!obj.contains("embedding")) {
            throw ConfigError("remote_embedding featurizer requires an \"embedding\" section");
        }
        const json& emb = obj["embedding"];
        check_keys(emb,
                   {"base_url", "model_name", "api_key_env_var", "timeout_seconds",
                    "max_retries"},
                   "featurizer.embedding");
        EmbeddingConfig config;
        config.base_url = get_string(emb, "base_url", "featurizer.embedding");
        config.model_name = get_string(emb, "model_name", "featurizer.embedding");
        config.api_key_env_var =
            get_or<std::string>(emb, "api_key_env_var", {}, "featurizer.embedding");
        config.timeout_seconds =
            get_or<int>(emb, "timeout_seconds", config.timeout_seconds, "featurizer.embedding");
        config.max_retries =
            get_or<int>(emb, "max_retries", config.max_retries, "featurizer.embedding");
        *embedding = std::move(config);
    } else if (obj.contains("embedding")) {
        throw ConfigError("\"embedding\" section is only valid for remote_embedding");
    }
    spec.validate();
    return spec;
}

} // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config " + path.string());
    }
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw ConfigError("config " + path.string() + " is not a JSON object");
    }
    const std::filesystem::path base_dir = path.parent_path();
    auto resolve = [&](const std::string& p) {
        std::filesystem::path fp(p);
        return fp.is_absolute() ? fp : base_dir / fp;
    };

    check_keys(doc,
               {"task", "loop", "curation", "train", "featurizer", "provider",
                "output_dir"},
               "config");

    // task
    const json& task_obj = require(doc, "task", "config");
    check_keys(task_obj, {"labels", "task_description", "seed_path", "shots"}, "task");
    LabelSet labels = parse_labels(task_obj, "task");
    int shots = get_or<int>(task_obj, "shots", 0, "task");
    std::string description = get_or<std::string>(task_obj, "task_description", {}, "task");
    Dataset seeds(labels);
    if (task_obj.contains("seed_path")) {
        auto read = read_records(resolve(get_string(task_obj, "seed_path", "task")), labels);
        seeds = std::move(read.dataset);
    }
    TaskSpec task(std::move(labels), std::move(seeds), shots, std::move(description));

    // loop + nested sections
    LoopConfig loop;
    if (doc.contains("loop")) {
        const json& l = doc["loop"];
        check_keys(l,
                   {"max_iterations", "plateau_epsilon", "plateau_patience",
                    "val_per_class", "rng_seed"},
                   "loop");
        loop.max_iterations = get_or<int>(l, "max_iterations", loop.max_iterations, "loop");
        loop.plateau_epsilon =
            get_or<double>(l, "plateau_epsilon", loop.plateau_epsilon, "loop");
        loop.plateau_patience =
            get_or<int>(l, "plateau_patience", loop.plateau_patience, "loop");
        loop.val_per_class = get_or<int>(l, "val_per_class", loop.val_per_class, "loop");
        loop.rng_seed = get_or<uint64_t>(l, "rng_seed", loop.rng_seed, "loop");
    }
    if (doc.contains("curation")) {
        const json& c = doc["curation"];
        check_keys(c,
                   {"per_class_budget", "batch_per_class", "near_dup_cosine",
                    "val_overlap_cosine", "balance_tolerance"},
                   "curation");
        CurationPolicy& p = loop.policy;
        p.per_class_budget = get_or<int>(c, "per_class_budget", p.per_class_budget, "curation");
        p.batch_per_class = get_or<int>(c, "batch_per_class", p.batch_per_class, "curation");
        p.near_dup_cosine = get_or<double>(c, "near_dup_cosine", p.near_dup_cosine, "curation");
        p.val_overlap_cosine =
            get_or<double>(c, "val_overlap_cosine", p.val_overlap_cosine, "curation");
        p.balance_tolerance =
            get_or<int>(c, "balance_tolerance", p.batch_per_class, "curation");
    } else {
        loop.policy.balance_tolerance = loop.policy.batch_per_class;
    }
    if (doc.contains("train")) {
        const json& t = doc["train"];
        check_keys(t, {"learning_rate", "l2_lambda", "max_epochs", "loss_tolerance"},
                   "train");
        TrainConfig& tc = loop.train_config;
        tc.learning_rate = get_or<double>(t, "learning_rate", tc.learning_rate, "train");
        tc.l2_lambda = get_or<double>(t, "l2_lambda", tc.l2_lambda, "train");
        tc.max_epochs = get_or<int>(t, "max_epochs", tc.max_epochs, "train");
        tc.loss_tolerance = get_or<double>(t, "loss_tolerance", tc.loss_tolerance, "train");
    }

    RunConfig config{std::move(task), std::move(loop), false, {}, {}, std::nullopt, {}};
    if (doc.contains("featurizer")) {
        config.loop.featurizer = parse_featurizer(doc["featurizer"], &config.embedding);
    }

    // provider: exactly one of live / mock
    const json& provider = require(doc, "provider", "config");
    check_keys(provider, {"live", "mock"}, "provider");
    bool has_live = provider.contains("live");
    bool has_mock = provider.contains("mock");
    if (has_live == has_mock) {
        throw ConfigError("configure exactly one of provider.live and provider.mock");
    }
    if (has_mock) {
        const json& mock = provider["mock"];
        check_keys(mock, {"script_path"}, "provider.mock");
        config.mock_provider = true;
        config.mock_script = resolve(get_string(mock, "script_path", "provider.mock"));
    } else {
        const json& live = provider["live"];
        check_keys(live,
                   {"base_url", "model_name", "api_key_env_var", "timeout_seconds",
                    "max_retries"},
                   "provider.live");
        ProviderConfig& pc = config.live_provider;
        pc.base_url = get_string(live, "base_url", "provider.live");
        pc.model_name = get_string(live, "model_name", "provider.live");
        pc.api_key_env_var =
            get_or<std::string>(live, "api_key_env_var", {}, "provider.live");
        pc.timeout_seconds =
            get_or<int>(live, "timeout_seconds", pc.timeout_seconds, "provider.live");
        pc.max_retries = get_or<int>(live, "max_retries", pc.max_retries, "provider.live");
        pc.validate();
    }

    config.output_dir = resolve(get_or<std::string>(doc, "output_dir", "runs", "config"));
    config.loop.validate();
    return config;
}

std::unique_ptr<Provider> make_provider(const RunConfig& config) {
    if (config.mock_provider) {
        return std::make_unique<MockProvider>(MockProvider::load(config.mock_script));
    }
    return std::make_unique<LiveProvider>(config.live_provider);
}

FeatureEngine make_engine(const RunConfig& config) {
    if (config.loop.featurizer.kind == FeaturizerKind::remote_embedding) {
        if (!config.embedding) {
            throw ConfigError("remote_embedding featurizer requires an embedding section");
        }
        return FeatureEngine(config.loop.featurizer,
                             std::make_shared<EmbeddingClient>(*config.embedding));
    }
    return FeatureEngine(config.loop.featurizer);
}

} // namespace curator
