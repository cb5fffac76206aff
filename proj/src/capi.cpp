#include "curator/curator.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "config.hpp"
#include "report.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out != nullptr) {
        std::memcpy(out, s.c_str(), s.size() + 1);
    }
    return out;
}

// Maps the C++ error hierarchy onto C status codes. Runs the callable and
// captures any failure into the thread-local error slot.
template <typename Fn>
curator_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return CURATOR_OK;
    } catch (const curator::ProviderError& e) {
        set_error(e.what());
        return CURATOR_ERR_PROVIDER;
    } catch (const curator::InitializationFailed& e) {
        set_error(e.what());
        return CURATOR_ERR_INIT_FAILED;
    } catch (const curator::ConfigError& e) {
        set_error(e.what());
        return CURATOR_ERR_CONFIG;
    } catch (const curator::ValidationError& e) {
        set_error(e.what());
        return CURATOR_ERR_CONFIG;
    } catch (const curator::IoError& e) {
        set_error(e.what());
        return CURATOR_ERR_IO;
    } catch (const curator::ParseError& e) {
        set_error(e.what());
        return CURATOR_ERR_DATA;
    } catch (const curator::Error& e) {
        // InvalidLabel, InsufficientData, Empty*/Degenerate* and friends
        set_error(e.what());
        return CURATOR_ERR_DATA;
    } catch (const std::exception& e) {
        set_error(e.what());
        return CURATOR_ERR_INTERNAL;
    } catch (...) {
        set_error("unknown error");
        return CURATOR_ERR_INTERNAL;
    }
}

} // namespace

struct curator_run_result {
    std::string stop_reason;
    double best_metric = 0.0;
    int32_t best_iteration = 0;
    int32_t iteration_count = 0;
    int64_t train_size = 0;
    std::string output_dir;
};

struct curator_eval_report {
    curator::EvalReport report;
};

struct curator_model {
    curator::Model model;
};

extern "C" {

const char* curator_version(void) { return "0.1.0"; }

const char* curator_last_error(void) { return g_last_error.c_str(); }

curator_status curator_run(const char* config_path,
                           const curator_run_overrides* overrides,
                           curator_run_result** out_result) {
    if (config_path == nullptr || out_result == nullptr) {
        set_error("config_path and out_result must be non-null");
        return CURATOR_ERR_INVALID_ARG;
    }
    *out_result = nullptr;
    return guarded([&] {
        curator::RunConfig config = curator::load_run_config(config_path);
        if (overrides != nullptr) {
            if (overrides->seed >= 0) {
                config.loop.rng_seed = static_cast<uint64_t>(overrides->seed);
            }
            if (overrides->max_iterations > 0) {
                config.loop.max_iterations = overrides->max_iterations;
            }
            if (overrides->output_dir != nullptr) {
                config.output_dir = overrides->output_dir;
            }
        }
        config.loop.validate();

        auto provider = curator::make_provider(config);
        curator::FeatureEngine engine = curator::make_engine(config);
        curator::CurationResult result =
            curator::run(config.task, config.loop, *provider, engine);

        auto run_dir = curator::make_run_directory(config.output_dir, config.loop.rng_seed);
        curator::write_run_artifacts(result, config.task, config.loop, run_dir);

        auto* handle = new curator_run_result();
        handle->stop_reason = std::string(curator::to_string(result.stop_reason));
        handle->best_metric = result.best_metric;
        handle->best_iteration = result.best_index;
        handle->iteration_count = static_cast<int32_t>(result.history.size());
        handle->train_size = static_cast<int64_t>(result.final_train_set.size());
        handle->output_dir = run_dir.string();
        *out_result = handle;
    });
}

const char* curator_run_stop_reason(const curator_run_result* result) {
    return result != nullptr ? result->stop_reason.c_str() : "";
}

double curator_run_best_metric(const curator_run_result* result) {
    return result != nullptr ? result->best_metric : 0.0;
}

int32_t curator_run_best_iteration(const curator_run_result* result) {
    return result != nullptr ? result->best_iteration : 0;
}

int32_t curator_run_iteration_count(const curator_run_result* result) {
    return result != nullptr ? result->iteration_count : 0;
}

int64_t curator_run_train_size(const curator_run_result* result) {
    return result != nullptr ? result->train_size : 0;
}

const char* curator_run_output_dir(const curator_run_result* result) {
    return result != nullptr ? result->output_dir.c_str() : "";
}

void curator_run_result_free(curator_run_result* result) { delete result; }

curator_status curator_evaluate_file(const char* model_path, const char* data_path,
                                     curator_eval_report** out_report) {
    if (model_path == nullptr || data_path == nullptr || out_report == nullptr) {
        set_error("model_path, data_path, and out_report must be non-null");
        return CURATOR_ERR_INVALID_ARG;
    }
    *out_report = nullptr;
    return guarded([&] {
        curator::Model model = curator::load_model(model_path);
        std::vector<curator::Label> labels;
        for (const auto& name : model.labels) {
            labels.push_back({name, {}});
        }
        auto read = curator::read_records(data_path, curator::LabelSet(std::move(labels)));
        auto* handle = new curator_eval_report();
        handle->report = curator::evaluate(model, read.dataset);
        *out_report = handle;
    });
}

double curator_eval_accuracy(const curator_eval_report* report) {
    return report != nullptr ? report->report.accuracy : 0.0;
}

double curator_eval_macro_f1(const curator_eval_report* report) {
    return report != nullptr ? report->report.macro_f1 : 0.0;
}

char* curator_eval_render(const curator_eval_report* report) {
    if (report == nullptr) {
        return nullptr;
    }
    return dup_string(curator::render_eval_report(report->report));
}

char* curator_eval_json(const curator_eval_report* report) {
    if (report == nullptr) {
        return nullptr;
    }
    return dup_string(curator::eval_report_to_json(report->report).dump(2) + "\n");
}

void curator_eval_report_free(curator_eval_report* report) { delete report; }

curator_status curator_sample_file(const char* data_path, int32_t per_class,
                                   uint64_t seed, const char* out_path) {
    if (data_path == nullptr || out_path == nullptr || per_class < 0) {
        set_error("data_path/out_path must be non-null and per_class >= 0");
        return CURATOR_ERR_INVALID_ARG;
    }
    return guarded([&] {
        auto read = curator::read_records(data_path);
        curator::Dataset sample = curator::stratified_sample(
            read.dataset, static_cast<size_t>(per_class), seed);
        curator::write_records(sample, out_path);
    });
}

curator_status curator_model_load(const char* path, curator_model** out_model) {
    if (path == nullptr || out_model == nullptr) {
        set_error("path and out_model must be non-null");
        return CURATOR_ERR_INVALID_ARG;
    }
    *out_model = nullptr;
    return guarded([&] {
        auto* handle = new curator_model();
        handle->model = curator::load_model(path);
        *out_model = handle;
    });
}

int32_t curator_model_num_labels(const curator_model* model) {
    return model != nullptr ? static_cast<int32_t>(model->model.labels.size()) : 0;
}

const char* curator_model_label(const curator_model* model, int32_t index) {
    if (model == nullptr || index < 0 ||
        index >= static_cast<int32_t>(model->model.labels.size())) {
        return nullptr;
    }
    return model->model.labels[static_cast<size_t>(index)].c_str();
}

curator_status curator_model_predict(const curator_model* model, const char* text,
                                     int32_t* out_label, double* probabilities) {
    if (model == nullptr || text == nullptr || out_label == nullptr) {
        set_error("model, text, and out_label must be non-null");
        return CURATOR_ERR_INVALID_ARG;
    }
    return guarded([&] {
        curator::Prediction pred = curator::predict(model->model, text);
        *out_label = static_cast<int32_t>(pred.label_index);
        if (probabilities != nullptr) {
            std::memcpy(probabilities, pred.probabilities.data(),
                        pred.probabilities.size() * sizeof(double));
        }
    });
}

void curator_model_free(curator_model* model) { delete model; }

void curator_string_free(char* str) { std::free(str); }

} // extern "C"
