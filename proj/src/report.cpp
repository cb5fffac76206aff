#include "report.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace curator {

namespace {

nlohmann::json featurizer_to_json(const FeaturizerSpec& spec) {
    nlohmann::json orders = nlohmann::json::array();
    if (spec.unigrams) {
        orders.push_back(1);
    }
    if (spec.bigrams) {
        orders.push_back(2);
    }
    return {
        {"kind", std::string(to_string(spec.kind))},
        {"dimension", spec.dimension},
        {"ngram_orders", std::move(orders)},
        {"hash_algorithm", spec.hash_algorithm},
    };
}

} // namespace

nlohmann::json eval_report_to_json(const EvalReport& report) {
    nlohmann::json traces = nlohmann::json::array();
    for (const auto& trace : report.error_traces) {
        traces.push_back({
            {"text", trace.text},
            {"true_label", trace.true_label},
            {"predicted_label", trace.predicted_label},
            {"predicted_probability", trace.predicted_probability},
        });
    }
    return {
        {"labels", report.labels},
        {"accuracy", report.accuracy},
        {"macro_f1", report.macro_f1},
        {"confusion", report.confusion},
        {"per_class_error_rate", report.per_class_error_rate},
        {"error_traces", std::move(traces)},
    };
}

nlohmann::json iteration_to_json(const IterationRecord& record, bool is_last,
                                 StopReason final_reason) {
    nlohmann::json tallies;
    for (const auto& [reason, count] : record.rejection_tallies) {
        tallies[std::string(to_string(reason))] = count;
    }
    nlohmann::json analysis;
    if (record.analysis) {
        analysis = {
            {"failure_modes", record.analysis->failure_modes},
            {"data_needs", record.analysis->data_needs},
            {"priority_labels", record.analysis->priority_labels},
        };
    }
    return {
        {"index", record.index},
        {"accepted_count", record.generated_batch.size()},
        {"rejection_tallies", std::move(tallies)},
        {"train_size", record.train_size},
        {"eval", eval_report_to_json(record.eval)},
        {"analysis", std::move(analysis)},
        {"metric_value", record.metric_value},
        {"improvement_over_best", record.improvement_over_best},
        {"stop_decision", is_last ? std::string(to_string(final_reason)) : "continue"},
    };
}

nlohmann::json config_to_json(const LoopConfig& config) {
    return {
        {"loop",
         {{"max_iterations", config.max_iterations},
          {"plateau_epsilon", config.plateau_epsilon},
          {"plateau_patience", config.plateau_patience},
          {"val_per_class", config.val_per_class},
          {"primary_metric", "macro_f1"},
          {"rng_seed", config.rng_seed}}},
        {"curation",
         {{"per_class_budget", config.policy.per_class_budget},
          {"batch_per_class", config.policy.batch_per_class},
          {"near_dup_cosine", config.policy.near_dup_cosine},
          {"val_overlap_cosine", config.policy.val_overlap_cosine},
          {"balance_tolerance", config.policy.balance_tolerance}}},
        {"train",
         {{"learning_rate", config.train_config.learning_rate},
          {"l2_lambda", config.train_config.l2_lambda},
          {"max_epochs", config.train_config.max_epochs},
          {"loss_tolerance", config.train_config.loss_tolerance}}},
        {"featurizer", featurizer_to_json(config.featurizer)},
    };
}

nlohmann::json task_to_json(const TaskSpec& task) {
    nlohmann::json labels = nlohmann::json::array();
    for (const auto& label : task.label_set.labels()) {
        labels.push_back({{"name", label.name}, {"description", label.description}});
    }
    return {
        {"labels", std::move(labels)},
        {"shots", task.shots},
        {"task_description", task.task_description},
        {"seed_count", task.seed_examples.size()},
    };
}

nlohmann::json result_to_json(const CurationResult& result, const TaskSpec& task,
                              const LoopConfig& config) {
    nlohmann::json iterations = nlohmann::json::array();
    for (size_t i = 0; i < result.history.size(); ++i) {
        iterations.push_back(iteration_to_json(result.history[i],
                                               i + 1 == result.history.size(),
                                               result.stop_reason));
    }
    nlohmann::json artifacts = {
        {"report", "report.json"},
        {"train_set", "train.jsonl"},
        {"validation_set", "validation.jsonl"},
        {"model", result.model ? nlohmann::json("model.json") : nlohmann::json()},
    };
    return {
        {"schema", "curator-run-report/1"},
        {"task", task_to_json(task)},
        {"config", config_to_json(config)},
        {"iterations", std::move(iterations)},
        {"stop_reason", std::string(to_string(result.stop_reason))},
        {"best_iteration", result.best_index},
        {"best_metric", result.best_metric},
        {"final_train_size", result.final_train_set.size()},
        {"validation_size", result.validation_set.size()},
        {"artifacts", std::move(artifacts)},
    };
}

std::string render_eval_report(const EvalReport& report) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4);
    os << "accuracy:  " << report.accuracy << "\n";
    os << "macro-F1:  " << report.macro_f1 << "\n";
    os << "confusion matrix (rows = true, columns = predicted):\n";

    size_t width = 12;
    for (const auto& name : report.labels) {
        width = std::max(width, name.size() + 2);
    }
    os << std::setw(static_cast<int>(width)) << "true\\pred";
    for (const auto& name : report.labels) {
        os << std::setw(static_cast<int>(width)) << name;
    }
    os << "\n";
    for (size_t r = 0; r < report.labels.size(); ++r) {
        os << std::setw(static_cast<int>(width)) << report.labels[r];
        for (size_t c = 0; c < report.labels.size(); ++c) {
            os << std::setw(static_cast<int>(width)) << report.confusion[r][c];
        }
        os << "\n";
    }
    os << "per-class error rate:\n";
    for (size_t c = 0; c < report.labels.size(); ++c) {
        os << "  " << report.labels[c] << ": " << report.per_class_error_rate[c] << "\n";
    }
    return os.str();
}

std::filesystem::path make_run_directory(const std::filesystem::path& parent,
                                         uint64_t seed) {
    std::filesystem::create_directories(parent);
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::ostringstream stamp;
    stamp << std::put_time(&tm_utc, "%Y%m%dT%H%M%SZ");

    std::string base = "run-" + stamp.str() + "-seed" + std::to_string(seed);
    std::filesystem::path dir = parent / base;
    for (int suffix = 2; std::filesystem::exists(dir); ++suffix) {
        dir = parent / (base + "-" + std::to_string(suffix));
    }
    std::filesystem::create_directory(dir);
    return dir;
}

RunArtifacts write_run_artifacts(const CurationResult& result, const TaskSpec& task,
                                 const LoopConfig& config,
                                 const std::filesystem::path& run_directory) {
    std::filesystem::create_directories(run_directory);
    RunArtifacts artifacts;
    artifacts.directory = run_directory;
    artifacts.report = run_directory / "report.json";
    artifacts.train_set = run_directory / "train.jsonl";
    artifacts.validation_set = run_directory / "validation.jsonl";

    write_records(result.final_train_set, artifacts.train_set);
    write_records(result.validation_set, artifacts.validation_set);
    if (result.model) {
        artifacts.model = run_directory / "model.json";
        save_model(*result.model, artifacts.model);
    }

    std::ofstream out(artifacts.report, std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + artifacts.report.string());
    }
    out << result_to_json(result, task, config).dump(2) << '\n';
    if (!out) {
        throw IoError("failed writing " + artifacts.report.string());
    }
    return artifacts;
}

} // namespace curator
