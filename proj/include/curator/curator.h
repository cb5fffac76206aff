/* curator — LLM-curated training data for lightweight text classifiers.
 *
 * C interface to the curation library. All functions return a
 * curator_status; results come back through opaque handles that must be
 * released with the matching *_free function. On any non-OK status,
 * curator_last_error() describes the failure (thread-local).
 */

#ifndef CURATOR_CURATOR_H
#define CURATOR_CURATOR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CURATOR_API __declspec(dllexport)
#else
#define CURATOR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum curator_status {
    CURATOR_OK = 0,
    CURATOR_ERR_INVALID_ARG = 1, /* null or out-of-range argument */
    CURATOR_ERR_CONFIG = 2,      /* unusable configuration or invariant violation */
    CURATOR_ERR_IO = 3,          /* file unreadable or unwritable */
    CURATOR_ERR_DATA = 4,        /* malformed records, label mismatch, empty/degenerate data */
    CURATOR_ERR_PROVIDER = 5,    /* LLM or embedding provider failure */
    CURATOR_ERR_INIT_FAILED = 6, /* validation-set synthesis failed */
    CURATOR_ERR_INTERNAL = 7
} curator_status;

CURATOR_API const char* curator_version(void);

/* Message for the most recent failure on this thread; empty if none. */
CURATOR_API const char* curator_last_error(void);

/* ------------------------------------------------------------------ runs */

typedef struct curator_run_result curator_run_result;

typedef struct curator_run_overrides {
    int64_t seed;            /* < 0: keep the config's rng_seed */
    int32_t max_iterations;  /* <= 0: keep the config's value */
    const char* output_dir;  /* NULL: keep the config's value */
} curator_run_overrides;

/* Executes the full curation loop described by the JSON config file and
 * writes the run artifacts (report, model, datasets) into a fresh run
 * directory. A provider failure mid-run still produces a result (with stop
 * reason "provider_failure" and whatever artifacts exist); provider failure
 * during initialization returns CURATOR_ERR_PROVIDER with no result. */
CURATOR_API curator_status curator_run(const char* config_path,
                                       const curator_run_overrides* overrides,
                                       curator_run_result** out_result);

CURATOR_API const char* curator_run_stop_reason(const curator_run_result* result);
CURATOR_API double curator_run_best_metric(const curator_run_result* result);
CURATOR_API int32_t curator_run_best_iteration(const curator_run_result* result);
CURATOR_API int32_t curator_run_iteration_count(const curator_run_result* result);
CURATOR_API int64_t curator_run_train_size(const curator_run_result* result);
CURATOR_API const char* curator_run_output_dir(const curator_run_result* result);
CURATOR_API void curator_run_result_free(curator_run_result* result);

/* ------------------------------------------------------------ evaluation */

typedef struct curator_eval_report curator_eval_report;

/* Loads a saved model and a record file (labels must match the model's) and
 * evaluates every example. */
CURATOR_API curator_status curator_evaluate_file(const char* model_path,
                                                 const char* data_path,
                                                 curator_eval_report** out_report);

CURATOR_API double curator_eval_accuracy(const curator_eval_report* report);
CURATOR_API double curator_eval_macro_f1(const curator_eval_report* report);
/* Human-readable metrics block; free with curator_string_free. */
CURATOR_API char* curator_eval_render(const curator_eval_report* report);
/* Full report as a JSON document; free with curator_string_free. */
CURATOR_API char* curator_eval_json(const curator_eval_report* report);
CURATOR_API void curator_eval_report_free(curator_eval_report* report);

/* -------------------------------------------------------------- sampling */

/* Stratified k-per-class sample of a record file, deterministic per seed. */
CURATOR_API curator_status curator_sample_file(const char* data_path, int32_t per_class,
                                               uint64_t seed, const char* out_path);

/* ------------------------------------------------------------ prediction */

typedef struct curator_model curator_model;

CURATOR_API curator_status curator_model_load(const char* path, curator_model** out_model);
CURATOR_API int32_t curator_model_num_labels(const curator_model* model);
CURATOR_API const char* curator_model_label(const curator_model* model, int32_t index);
/* Predicts the label index for a text; if probabilities is non-NULL it must
 * hold num_labels doubles and receives the class probabilities. */
CURATOR_API curator_status curator_model_predict(const curator_model* model,
                                                 const char* text, int32_t* out_label,
                                                 double* probabilities);
CURATOR_API void curator_model_free(curator_model* model);

CURATOR_API void curator_string_free(char* str);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CURATOR_CURATOR_H */
