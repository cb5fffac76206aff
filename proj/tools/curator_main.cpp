// curator CLI: runs curation jobs, evaluates saved models, and samples
// record files. Talks to the library exclusively through the C API.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "curator/curator.h"

namespace {

int status_to_exit_code(curator_status status) {
    switch (status) {
    case CURATOR_OK:
        return 0;
    case CURATOR_ERR_PROVIDER:
        return 2;
    case CURATOR_ERR_INIT_FAILED:
        return 3;
    default:
        return 1;
    }
}

void print_error(curator_status status) {
    std::cerr << "curator: error: " << curator_last_error() << "\n";
    (void)status;
}

int cmd_run(const std::string& config_path, int64_t seed, int32_t max_iterations,
            const std::string& output_dir) {
    curator_run_overrides overrides;
    overrides.seed = seed;
    overrides.max_iterations = max_iterations;
    overrides.output_dir = output_dir.empty() ? nullptr : output_dir.c_str();

    curator_run_result* result = nullptr;
    curator_status status = curator_run(config_path.c_str(), &overrides, &result);
    if (status != CURATOR_OK) {
        print_error(status);
        return status_to_exit_code(status);
    }

    std::string stop_reason = curator_run_stop_reason(result);
    std::printf("stop=%s best_macro_f1=%.4f train_size=%lld out=%s\n",
                stop_reason.c_str(), curator_run_best_metric(result),
                static_cast<long long>(curator_run_train_size(result)),
                curator_run_output_dir(result));
    curator_run_result_free(result);
    // a provider failure mid-run still writes a partial report
    return stop_reason == "provider_failure" ? 2 : 0;
}

int cmd_eval(const std::string& model_path, const std::string& data_path,
             const std::string& report_path) {
    curator_eval_report* report = nullptr;
    curator_status status =
        curator_evaluate_file(model_path.c_str(), data_path.c_str(), &report);
    if (status != CURATOR_OK) {
        print_error(status);
        return status_to_exit_code(status);
    }

    char* rendered = curator_eval_render(report);
    if (rendered != nullptr) {
        std::fputs(rendered, stdout);
        curator_string_free(rendered);
    }

    char* json = curator_eval_json(report);
    curator_eval_report_free(report);
    if (json == nullptr) {
        std::cerr << "curator: error: could not serialize the report\n";
        return 1;
    }
    std::ofstream out(report_path, std::ios::trunc);
    if (!out) {
        std::cerr << "curator: error: cannot write " << report_path << "\n";
        curator_string_free(json);
        return 1;
    }
    out << json;
    curator_string_free(json);
    std::cout << "report written to " << report_path << "\n";
    return 0;
}

int cmd_sample(const std::string& data_path, int32_t per_class, uint64_t seed,
               const std::string& out_path) {
    curator_status status =
        curator_sample_file(data_path.c_str(), per_class, seed, out_path.c_str());
    if (status != CURATOR_OK) {
        print_error(status);
        return status_to_exit_code(status);
    }
    std::cout << "wrote " << per_class << " examples per class to " << out_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"curator — LLM-curated training data for lightweight text classifiers"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(curator_version()));

    // run
    std::string run_config;
    int64_t run_seed = -1;
    int32_t run_max_iterations = 0;
    std::string run_out;
    CLI::App* run = app.add_subcommand("run", "Execute a curation run from a config file");
    run->add_option("--config", run_config, "Path to the JSON run config")->required();
    run->add_option("--seed", run_seed, "Override the config's rng_seed");
    run->add_option("--max-iterations", run_max_iterations,
                    "Override the config's max_iterations");
    run->add_option("--out", run_out, "Override the config's output directory");

    // eval
    std::string eval_model;
    std::string eval_data;
    std::string eval_report = "eval-report.json";
    CLI::App* eval = app.add_subcommand("eval", "Evaluate a saved model on a record file");
    eval->add_option("--model", eval_model, "Path to a saved model")->required();
    eval->add_option("--data", eval_data, "Path to a record file")->required();
    eval->add_option("--report", eval_report, "Where to write the report JSON");

    // sample
    std::string sample_data;
    int32_t sample_k = 0;
    uint64_t sample_seed = 0;
    std::string sample_out;
    CLI::App* sample =
        app.add_subcommand("sample", "Stratified k-per-class sample of a record file");
    sample->add_option("--data", sample_data, "Path to a record file")->required();
    sample->add_option("-k", sample_k, "Examples per class")->required();
    sample->add_option("--seed", sample_seed, "Sampling seed");
    sample->add_option("--out", sample_out, "Output record file")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        return cmd_run(run_config, run_seed, run_max_iterations, run_out);
    }
    if (eval->parsed()) {
        return cmd_eval(eval_model, eval_data, eval_report);
    }
    if (sample->parsed()) {
        return cmd_sample(sample_data, sample_k, sample_seed, sample_out);
    }
    return 1;
}
