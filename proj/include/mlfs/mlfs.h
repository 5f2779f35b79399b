/* C interface to the mlfs library.
 *
 * All functions return an mlfs_status. On failure the message of the most
 * recent error on the calling thread is available from mlfs_last_error().
 * Objects are opaque and owned by the caller once returned; release them with
 * the matching *_free function (NULL is accepted).
 */
#ifndef MLFS_MLFS_H
#define MLFS_MLFS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MLFS_BUILDING)
#    define MLFS_API __declspec(dllexport)
#  else
#    define MLFS_API __declspec(dllimport)
#  endif
#else
#  define MLFS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mlfs_status {
    MLFS_OK = 0,
    MLFS_ERR_ARGUMENT = 1,
    MLFS_ERR_PARSE = 2,
    MLFS_ERR_CONFIG = 3,
    MLFS_ERR_DATA = 4,
    MLFS_ERR_STATE = 5,
    MLFS_ERR_IO = 6,
    MLFS_ERR_EMPTY_AFTER_PRUNING = 7,
    MLFS_ERR_UNDEFINED_METRIC = 8,
    MLFS_ERR_INTERNAL = 9
} mlfs_status;

typedef struct mlfs_dataset mlfs_dataset;
typedef struct mlfs_ranking mlfs_ranking;
typedef struct mlfs_model mlfs_model;
typedef struct mlfs_config mlfs_config;
typedef struct mlfs_bench mlfs_bench;

MLFS_API const char* mlfs_version(void);
MLFS_API const char* mlfs_status_string(mlfs_status status);
/* Empty string when no error has occurred on this thread. */
MLFS_API const char* mlfs_last_error(void);

/* ---- datasets ---- */

/* label_count < 0 reads the label count from the relation name ("-C n"),
 * otherwise the last label_count attributes are labels. */
MLFS_API mlfs_status mlfs_dataset_load_arff(const char* path, int label_count, mlfs_dataset** out);
MLFS_API mlfs_status mlfs_dataset_read_normalized(const char* path, mlfs_dataset** out);
MLFS_API mlfs_status mlfs_dataset_write_normalized(const mlfs_dataset* ds, const char* path);
MLFS_API void mlfs_dataset_free(mlfs_dataset* ds);

MLFS_API mlfs_status mlfs_dataset_shape(const mlfs_dataset* ds, size_t* instances, size_t* features,
                                        size_t* labels);
MLFS_API const char* mlfs_dataset_name(const mlfs_dataset* ds);
MLFS_API const char* mlfs_dataset_feature_name(const mlfs_dataset* ds, size_t j);
MLFS_API const char* mlfs_dataset_label_name(const mlfs_dataset* ds, size_t k);

/* strategy: "equal-width" or "equal-frequency". */
MLFS_API mlfs_status mlfs_dataset_discretize(const mlfs_dataset* ds, int bins, const char* strategy,
                                             mlfs_dataset** out);
MLFS_API mlfs_status mlfs_dataset_split(const mlfs_dataset* ds, double test_fraction, uint64_t seed,
                                        mlfs_dataset** train, mlfs_dataset** test);

/* Resolves a dataset entry the way the benchmark does (a -train/-test pair,
 * <entry>.arff or an .arff path), discretizes and splits it using cfg. */
MLFS_API mlfs_status mlfs_dataset_prepare(const mlfs_config* cfg, const char* entry, mlfs_dataset** train,
                                          mlfs_dataset** test);

/* ---- ranking ---- */

typedef struct mlfs_rank_options {
    const char* method;        /* "ATR", "PPT_MI", "IGMF", ... */
    size_t tau;
    size_t n_select;
    const char* atr_sign_mode; /* "paper-literal" or "always-add" */
    double time_budget_seconds; /* <= 0 means unlimited */
} mlfs_rank_options;

MLFS_API void mlfs_rank_options_default(mlfs_rank_options* opts);
MLFS_API mlfs_status mlfs_rank(const mlfs_dataset* train, const mlfs_rank_options* opts, mlfs_ranking** out);
/* Takes tau, n_max, atr_sign_mode and time budget from cfg. */
MLFS_API mlfs_status mlfs_rank_with_config(const mlfs_dataset* train, const mlfs_config* cfg, const char* method,
                                           mlfs_ranking** out);
MLFS_API void mlfs_ranking_free(mlfs_ranking* r);

MLFS_API size_t mlfs_ranking_size(const mlfs_ranking* r);
MLFS_API mlfs_status mlfs_ranking_entry(const mlfs_ranking* r, size_t i, size_t* feature, double* score);
MLFS_API double mlfs_ranking_elapsed(const mlfs_ranking* r);
MLFS_API double mlfs_ranking_cache_seconds(const mlfs_ranking* r);
MLFS_API size_t mlfs_ranking_mi_evaluations(const mlfs_ranking* r);
MLFS_API int mlfs_ranking_timed_out(const mlfs_ranking* r);
MLFS_API size_t mlfs_ranking_warning_count(const mlfs_ranking* r);
MLFS_API const char* mlfs_ranking_warning(const mlfs_ranking* r, size_t i);

/* ---- ML-KNN ---- */

/* distance: "euclidean" or "hamming". */
MLFS_API mlfs_status mlfs_mlknn_fit(const mlfs_dataset* train, const size_t* subset, size_t subset_size, size_t k,
                                    double s, const char* distance, mlfs_model** out);
/* predicted and scores are caller-allocated row-major arrays of
 * instances x labels; either may be NULL. */
MLFS_API mlfs_status mlfs_mlknn_predict(const mlfs_model* model, const mlfs_dataset* test, const size_t* subset,
                                        size_t subset_size, uint8_t* predicted, double* scores);
MLFS_API void mlfs_model_free(mlfs_model* model);

/* ---- metrics ---- */

/* metric: "hamming_loss", "ranking_loss", "coverage_error", "f1", "jaccard",
 * "accuracy". Arrays are row-major rows x labels; scores may be NULL for
 * metrics that do not read it, predicted may be NULL for those that do not. */
MLFS_API mlfs_status mlfs_metric_compute(const char* metric, size_t rows, size_t labels, const uint8_t* truth,
                                         const uint8_t* predicted, const double* scores, double* out);

/* ---- run configuration ---- */

MLFS_API mlfs_status mlfs_config_create(mlfs_config** out);
MLFS_API mlfs_status mlfs_config_load(const char* path, mlfs_config** out);
MLFS_API void mlfs_config_free(mlfs_config* cfg);
MLFS_API mlfs_status mlfs_config_set(mlfs_config* cfg, const char* key, const char* value);
/* Copies the value (NUL-terminated) into buf if it fits; *needed receives the
 * required size including the terminator. */
MLFS_API mlfs_status mlfs_config_get(const mlfs_config* cfg, const char* key, char* buf, size_t size,
                                     size_t* needed);
MLFS_API size_t mlfs_config_key_count(void);
MLFS_API const char* mlfs_config_key(size_t i);

/* ---- benchmark ---- */

typedef void (*mlfs_log_fn)(const char* line, void* user);

MLFS_API mlfs_status mlfs_bench_run(const mlfs_config* cfg, mlfs_log_fn log, void* user, mlfs_bench** out);
MLFS_API mlfs_status mlfs_bench_emit_csv(const mlfs_bench* bench, const char* dir);
MLFS_API size_t mlfs_bench_cell_count(const mlfs_bench* bench);
/* status: 0 ok, 1 timeout, 2 error. */
MLFS_API mlfs_status mlfs_bench_cell(const mlfs_bench* bench, size_t i, const char** dataset, const char** method,
                                     int* status, double* ranking_seconds);
/* Mean and std over N of a metric for cell i; MLFS_ERR_STATE unless the cell is ok. */
MLFS_API mlfs_status mlfs_bench_cell_metric(const mlfs_bench* bench, size_t i, const char* metric, double* mean,
                                            double* std);
MLFS_API int mlfs_bench_has_errors(const mlfs_bench* bench);
MLFS_API void mlfs_bench_free(mlfs_bench* bench);

/* Mean wall-clock of cfg's `repeats` rankings of the full feature space of
 * the training part of `entry`. */
MLFS_API mlfs_status mlfs_time_ranking(const mlfs_config* cfg, const char* entry, const char* method,
                                       double* mean_seconds, double* mean_cache_seconds, int* timed_out);

#ifdef __cplusplus
}
#endif

#endif
