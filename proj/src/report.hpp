#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "loop.hpp"

namespace curator {

nlohmann::json eval_report_to_json(const EvalReport& report);
nlohmann::json iteration_to_json(const IterationRecord& record, bool is_last,
                                 StopReason final_reason);
nlohmann::json config_to_json(const LoopConfig& config);
nlohmann::json task_to_json(const TaskSpec& task);

// Canonical serialized form of a run: task summary, config echo,
// per-iteration records, stop reason, and artifact file names. Contains no
// timestamps or absolute paths, so identical runs serialize byte-identically.
nlohmann::json result_to_json(const CurationResult& result, const TaskSpec& task,
                              const LoopConfig& config);

// Human-readable metrics block with a labeled confusion matrix.
std::string render_eval_report(const EvalReport& report);

struct RunArtifacts {
    std::filesystem::path directory;
    std::filesystem::path report;
    std::filesystem::path train_set;
    std::filesystem::path validation_set;
    std::filesystem::path model; // empty when the run produced no model
};

// Creates "<parent>/run-<UTC timestamp>-seed<seed>" (with a disambiguating
// suffix on collision).
std::filesystem::path make_run_directory(const std::filesystem::path& parent,
                                         uint64_t seed);

RunArtifacts write_run_artifacts(const CurationResult& result, const TaskSpec& task,
                                 const LoopConfig& config,
                                 const std::filesystem::path& run_directory);

} // namespace curator
