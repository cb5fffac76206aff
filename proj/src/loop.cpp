#include "loop.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "text_norm.hpp"

namespace curator {

namespace {

constexpr int kMaxOutputTokens = 4096;
constexpr double kGenerateTemperature = 0.7;
constexpr double kAnalyzeTemperature = 0.0;
constexpr int kValidationAttempts = 4; // first call + 3 re-prompts
constexpr size_t kPromptSamplesPerClass = 3;

void warn(const std::string& message) {
    std::cerr << "[curator] warning: " << message << "\n";
}

const char* kCuratorSystemPrompt =
    "You are a meticulous data curation assistant. You write high-quality, "
    "diverse labeled examples for training and validating text classifiers, "
    "and you analyze classifier evaluation results. Always reply with a "
    "single fenced JSON code block and nothing else.";

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(4);
    os << std::fixed << v;
    return os.str();
}

void append_label_section(std::ostringstream& os, const TaskSpec& task) {
    os << "Labels:\n";
    for (const auto& label : task.label_set.labels()) {
        os << "- " << label.name;
        if (!label.description.empty()) {
            os << ": " << label.description;
        }
        os << "\n";
    }
}

void append_task_header(std::ostringstream& os, const TaskSpec& task) {
    os << "Task: ";
    if (!task.task_description.empty()) {
        os << task.task_description << "\n";
    } else {
        os << "Classify each text into exactly one of the labels below.\n";
    }
    append_label_section(os, task);
}

const char* kExamplesContract =
    "Reply with one fenced JSON code block of the form:\n"
    "```json\n"
    "{\"examples\": [{\"text\": \"...\", \"label\": \"...\"}]}\n"
    "```\n";

} // namespace

void LoopConfig::validate() const {
    if (max_iterations < 1) {
        throw ValidationError("max_iterations must be >= 1");
    }
    if (plateau_epsilon <= 0.0) {
        throw ValidationError("plateau_epsilon must be positive");
    }
    if (plateau_patience < 1) {
        throw ValidationError("plateau_patience must be >= 1");
    }
    if (val_per_class < 1) {
        throw ValidationError("val_per_class must be >= 1");
    }
    policy.validate();
    train_config.validate();
    featurizer.validate();
}

std::string_view to_string(StopReason reason) {
    switch (reason) {
    case StopReason::max_iterations: return "max_iterations";
    case StopReason::plateau: return "plateau";
    case StopReason::budget_exhausted: return "budget_exhausted";
    case StopReason::provider_failure: return "provider_failure";
    }
    return "max_iterations";
}

std::string build_validation_prompt(const TaskSpec& task,
                                    const std::map<std::string, int>& needed) {
    std::ostringstream os;
    append_task_header(os, task);
    os << "\nCreate a class-balanced validation set for this task. Produce "
          "exactly the requested number of examples for each label:\n";
    for (const auto& label : task.label_set.labels()) {
        auto it = needed.find(label.name);
        int count = it == needed.end() ? 0 : it->second;
        os << "- " << label.name << ": " << count << "\n";
    }
    os << "\nRequirements:\n"
          "- Each example is a single realistic, self-contained text.\n"
          "- Vary length, tone, vocabulary, and sentence structure.\n"
          "- No duplicates and no trivial rephrasings of one another.\n"
          "- Every example must clearly belong to its label.\n\n";
    os << kExamplesContract;
    return os.str();
}

std::string build_generate_prompt(const LoopState& state,
                                  const std::map<std::string, int>& plan) {
    const TaskSpec& task = state.task;
    std::ostringstream os;
    append_task_header(os, task);

    // Up to three most recent training examples per class, so the model can
    // extend the distribution instead of restating it.
    bool have_samples = false;
    std::ostringstream samples;
    for (size_t c = 0; c < task.label_set.size(); ++c) {
        const std::string& name = task.label_set.at(c).name;
        std::vector<const Example*> recent;
        const auto& examples = state.train_set.examples();
        for (auto it = examples.rbegin();
             it != examples.rend() && recent.size() < kPromptSamplesPerClass; ++it) {
            if (it->label == name) {
                recent.push_back(&*it);
            }
        }
        if (recent.empty()) {
            continue;
        }
        have_samples = true;
        samples << "- " << name << ":\n";
        for (const Example* ex : recent) {
            samples << "  - \"" << ex->text << "\"\n";
        }
    }
    if (have_samples) {
        os << "\nExisting training examples (do not repeat these):\n" << samples.str();
    }

    if (state.last_analysis) {
        const AnalysisRecord& a = *state.last_analysis;
        os << "\nLatest analysis of the classifier:\n";
        if (!a.failure_modes.empty()) {
            os << "Failure modes:\n";
            for (const auto& f : a.failure_modes) {
                os << "- " << f << "\n";
            }
        }
        if (!a.data_needs.empty()) {
            os << "Data needs:\n";
            for (const auto& d : a.data_needs) {
                os << "- " << d << "\n";
            }
        }
        if (!a.priority_labels.empty()) {
            os << "Labels needing attention:";
            for (const auto& p : a.priority_labels) {
                os << " " << p;
            }
            os << "\n";
        }
    }

    os << "\nGenerate new training examples per label:\n";
    for (const auto& label : task.label_set.labels()) {
        auto it = plan.find(label.name);
        int count = it == plan.end() ? 0 : it->second;
        os << "- " << label.name << ": " << count << "\n";
    }
    os << "\nRequirements:\n"
          "- Diverse texts; avoid near-duplicates of the existing examples.\n"
          "- Target the failure modes above when given.\n"
          "- Every example must clearly belong to its label.\n\n";
    os << kExamplesContract;
    return os.str();
}

std::string build_analyze_prompt(const LoopState& state, const EvalReport& eval) {
    std::ostringstream os;
    append_task_header(os, state.task);
    os << "\nThe classifier was trained on the current training set and "
          "evaluated on the validation set.\n\n";
    os << "Accuracy: " << format_double(eval.accuracy) << "\n";
    os << "Macro-F1: " << format_double(eval.macro_f1) << "\n\n";

    os << "Confusion matrix (rows = true label, columns = predicted label):\n";
    os << "true\\predicted";
    for (const auto& name : eval.labels) {
        os << "\t" << name;
    }
    os << "\n";
    for (size_t r = 0; r < eval.labels.size(); ++r) {
        os << eval.labels[r];
        for (size_t c = 0; c < eval.labels.size(); ++c) {
            os << "\t" << eval.confusion[r][c];
        }
        os << "\n";
    }

    os << "\nPer-class error rates:\n";
    for (size_t c = 0; c < eval.labels.size(); ++c) {
        os << "- " << eval.labels[c] << ": " << format_double(eval.per_class_error_rate[c])
           << "\n";
    }

    if (!eval.error_traces.empty()) {
        os << "\nMisclassified examples (true -> predicted, confidence):\n";
        for (const auto& trace : eval.error_traces) {
            os << "- \"" << trace.text << "\" (" << trace.true_label << " -> "
               << trace.predicted_label << ", " << format_double(trace.predicted_probability)
               << ")\n";
        }
    }

    os << "\nSummarize the classifier's failure modes and propose what new "
          "training data would address them (hard negatives, paraphrases, "
          "boundary cases). Name the labels that most need new data.\n\n"
          "Reply with one fenced JSON code block of the form:\n"
          "```json\n"
          "{\"failure_modes\": [\"...\"], \"data_needs\": [\"...\"], "
          "\"priority_labels\": [\"...\"]}\n"
          "```\n";
    return os.str();
}

namespace {

CompletionRequest make_request(const std::string& user_prompt, double temperature) {
    CompletionRequest req;
    req.messages = {{Role::system, kCuratorSystemPrompt}, {Role::user, user_prompt}};
    req.temperature = temperature;
    req.max_output_tokens = kMaxOutputTokens;
    return req;
}

// Coerces a parsed {"examples": [...]} payload into candidates. Items with a
// missing or non-string text/label come through with empty fields so the
// curation filter can reject and tally them. Returns nullopt when the payload
// shape itself is wrong (triggering the caller's malformed-output handling).
std::optional<std::vector<Example>> parse_candidates(const nlohmann::json& value,
                                                     Origin origin, int iteration) {
    if (!value.is_object() || !value.contains("examples") ||
        !value["examples"].is_array()) {
        return std::nullopt;
    }
    std::vector<Example> out;
    out.reserve(value["examples"].size());
    for (const auto& item : value["examples"]) {
        Example ex;
        if (item.is_object()) {
            if (item.contains("text") && item["text"].is_string()) {
                ex.text = item["text"].get<std::string>();
            }
            if (item.contains("label") && item["label"].is_string()) {
                ex.label = item["label"].get<std::string>();
            }
        }
        ex.origin = origin;
        ex.iteration = iteration;
        out.push_back(std::move(ex));
    }
    return out;
}

std::vector<std::string> string_list(const nlohmann::json& value, const char* key) {
    std::vector<std::string> out;
    if (value.contains(key) && value[key].is_array()) {
        for (const auto& item : value[key]) {
            if (item.is_string()) {
                out.push_back(item.get<std::string>());
            }
        }
    }
    return out;
}

AnalysisRecord parse_analysis(const nlohmann::json& value, const LabelSet& labels) {
    AnalysisRecord record;
    record.failure_modes = string_list(value, "failure_modes");
    record.data_needs = string_list(value, "data_needs");
    for (auto& name : string_list(value, "priority_labels")) {
        if (labels.contains(name)) {
            record.priority_labels.push_back(std::move(name));
        } else {
            warn("analysis named unknown priority label \"" + name + "\"; dropped");
        }
    }
    return record;
}

} // namespace

LoopState initialize(const TaskSpec& task, const LoopConfig& config, Provider& provider) {
    config.validate();

    LoopState state{task,
                    task.seed_examples,
                    Dataset(task.label_set),
                    BudgetLedger(task.label_set, config.policy.per_class_budget),
                    {},
                    0,
                    std::nullopt,
                    0.0,
                    std::nullopt,
                    false};

    const LabelSet& labels = task.label_set;
    std::vector<size_t> have(labels.size(), 0);
    auto needed_counts = [&] {
        std::map<std::string, int> needed;
        for (size_t c = 0; c < labels.size(); ++c) {
            int missing = config.val_per_class - static_cast<int>(have[c]);
            if (missing > 0) {
                needed[labels.at(c).name] = missing;
            }
        }
        return needed;
    };

    for (int attempt = 0; attempt < kValidationAttempts; ++attempt) {
        auto needed = needed_counts();
        if (needed.empty()) {
            break;
        }
        std::string reply = provider.complete(
            make_request(build_validation_prompt(task, needed), kGenerateTemperature));
        StructuredOutput parsed = extract_structured(reply);
        if (!parsed.ok) {
            warn("validation batch " + std::to_string(attempt + 1) +
                 " was not parseable; re-prompting");
            continue;
        }
        auto candidates = parse_candidates(parsed.value, Origin::validation, 0);
        if (!candidates) {
            warn("validation batch " + std::to_string(attempt + 1) +
                 " had no \"examples\" list; re-prompting");
            continue;
        }
        for (auto& ex : *candidates) {
            auto class_index = labels.index_of(ex.label);
            if (!class_index) {
                continue; // invalid labels are dropped during initialization
            }
            if (have[*class_index] >= static_cast<size_t>(config.val_per_class)) {
                continue;
            }
            std::string key = normalize_text(ex.text);
            if (key.empty() || state.train_set.contains_normalized(key)) {
                continue; // empty or colliding with seed data
            }
            if (state.validation_set.insert(ex)) {
                ++have[*class_index];
            }
        }
    }

    int minimum = (config.val_per_class + 1) / 2;
    for (size_t c = 0; c < labels.size(); ++c) {
        if (have[c] < static_cast<size_t>(minimum)) {
            throw InitializationFailed(
                "validation synthesis left class \"" + labels.at(c).name + "\" with " +
                std::to_string(have[c]) + " examples; need at least " +
                std::to_string(minimum));
        }
    }
    return state;
}

IterationRecord run_iteration(LoopState& state, const LoopConfig& config,
                              Provider& provider, const FeatureEngine& engine) {
    const int index = static_cast<int>(state.history.size()) + 1;
    const LabelSet& labels = state.task.label_set;

    // Generate
    std::vector<std::string> priorities =
        state.last_analysis ? state.last_analysis->priority_labels
                            : std::vector<std::string>{};
    auto plan = request_plan(state.ledger, config.policy, priorities);
    std::string prompt = build_generate_prompt(state, plan);

    std::vector<Example> candidates;
    CompletionRequest request = make_request(prompt, kGenerateTemperature);
    for (int attempt = 0; attempt < 2; ++attempt) {
        std::string reply = provider.complete(request);
        StructuredOutput parsed = extract_structured(reply);
        if (parsed.ok) {
            if (auto parsed_candidates =
                    parse_candidates(parsed.value, Origin::generated, index)) {
                candidates = std::move(*parsed_candidates);
                break;
            }
        }
        if (attempt == 0) {
            warn("generation output was malformed; re-prompting once");
            request.messages.push_back({Role::assistant, reply});
            request.messages.push_back(
                {Role::user,
                 "That reply was not usable. Respond with exactly one fenced JSON "
                 "code block of the form {\"examples\": [{\"text\": \"...\", "
                 "\"label\": \"...\"}]} and nothing else."});
        } else {
            warn("generation output malformed twice; continuing with an empty batch");
        }
    }

    // Filter
    FilterResult filtered = filter_batch(candidates, state.train_set,
                                         state.validation_set, state.ledger,
                                         config.policy, engine);
    IterationRecord record{index,
                           Dataset(labels),
                           {},
                           0,
                           {},
                           std::nullopt,
                           0.0,
                           0.0};
    for (int reason = 0; reason <= static_cast<int>(RejectReason::budget_exhausted);
         ++reason) {
        record.rejection_tallies[static_cast<RejectReason>(reason)] = 0;
    }
    for (const auto& rejection : filtered.rejections) {
        ++record.rejection_tallies[rejection.reason];
    }
    for (const auto& ex : filtered.accepted) {
        record.generated_batch.insert(ex);
        state.train_set.insert(ex);
    }
    record.train_size = state.train_set.size();

    // Train & evaluate. An untrainable cumulative set (empty or single-class,
    // possible when every candidate was rejected) evaluates the zero model.
    Model model =
        (state.train_set.empty() || state.train_set.distinct_labels_present() < 2)
            ? Model::zero(labels, engine.spec(), engine.dimension())
            : train(labels, state.train_set, engine, config.train_config);
    record.eval = evaluate(model, state.validation_set, engine);
    record.metric_value = record.eval.macro_f1;

    double best_before = state.history.empty() ? 0.0 : state.best_metric;
    record.improvement_over_best = record.metric_value - best_before;
    if (state.history.empty() || record.metric_value > state.best_metric) {
        state.best_metric = record.metric_value;
        state.best_index = index;
        state.best_model = model;
    }

    // Analyze. Malformed output is non-fatal; provider failure preserves the
    // completed record and flags the loop to stop.
    try {
        std::string reply = provider.complete(
            make_request(build_analyze_prompt(state, record.eval), kAnalyzeTemperature));
        StructuredOutput parsed = extract_structured(reply);
        if (parsed.ok && parsed.value.is_object()) {
            record.analysis = parse_analysis(parsed.value, labels);
        } else {
            warn("analysis output was malformed; continuing without an analysis");
        }
    } catch (const ProviderError&) {
        state.provider_failed_after_eval = true;
    }
    state.last_analysis = record.analysis;

    state.history.push_back(record);
    return record;
}

std::optional<StopReason> should_stop(const std::vector<double>& metric_history,
                                      const BudgetLedger& ledger,
                                      const LoopConfig& config) {
    if (static_cast<int>(metric_history.size()) >= config.max_iterations) {
        return StopReason::max_iterations;
    }
    if (static_cast<int>(metric_history.size()) >= config.plateau_patience) {
        bool all_flat = true;
        size_t first_checked = metric_history.size() - config.plateau_patience;
        for (size_t t = first_checked; t < metric_history.size(); ++t) {
            double best_before = 0.0;
            for (size_t i = 0; i < t; ++i) {
                best_before = std::max(best_before, metric_history[i]);
            }
            if (metric_history[t] - best_before > config.plateau_epsilon) {
                all_flat = false;
                break;
            }
        }
        if (all_flat) {
            return StopReason::plateau;
        }
    }
    if (ledger.exhausted()) {
        return StopReason::budget_exhausted;
    }
    return std::nullopt;
}

CurationResult run(const TaskSpec& task, const LoopConfig& config, Provider& provider,
                   const FeatureEngine& engine) {
    config.validate();
    LoopState state = initialize(task, config, provider);

    std::optional<StopReason> stop;
    std::vector<double> metrics;
    while (!stop) {
        try {
            IterationRecord record = run_iteration(state, config, provider, engine);
            metrics.push_back(record.metric_value);
        } catch (const ProviderError&) {
            stop = StopReason::provider_failure;
            break;
        }
        if (state.provider_failed_after_eval) {
            stop = StopReason::provider_failure;
            break;
        }
        stop = should_stop(metrics, state.ledger, config);
    }

    size_t best_train_size =
        state.best_index > 0 ? state.history[state.best_index - 1].train_size
                             : state.train_set.size();
    return CurationResult{state.train_set.prefix(best_train_size),
                          state.best_model,
                          *stop,
                          state.history,
                          state.validation_set,
                          state.best_index,
                          state.best_metric};
}

CurationResult run(const TaskSpec& task, const LoopConfig& config, Provider& provider) {
    if (config.featurizer.kind != FeaturizerKind::hashed_ngram) {
        throw ValidationError(
            "run(task, config, provider) supports hashed_ngram; remote featurizers "
            "need an engine");
    }
    return run(task, config, provider, FeatureEngine(config.featurizer));
}

} // namespace curator
