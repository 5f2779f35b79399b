#include "mlfs/mlfs.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <new>
#include <string>

#include "mlfs/bench.hpp"
#include "mlfs/error.hpp"
#include "mlfs/metrics.hpp"
#include "mlfs/mlknn.hpp"
#include "mlfs/selectors.hpp"

struct mlfs_dataset {
    mlfs::MultiLabelDataset ds;
};

struct mlfs_ranking {
    mlfs::RankingResult result;
};

struct mlfs_model {
    mlfs::MLKNNModel model;
};

struct mlfs_config {
    mlfs::RunConfig cfg;
};

struct mlfs_bench {
    std::vector<mlfs::EvaluationReport> reports;
};

namespace {

thread_local std::string last_error;

mlfs_status to_status(mlfs::ErrorCode code) {
    switch (code) {
        case mlfs::ErrorCode::argument: return MLFS_ERR_ARGUMENT;
        case mlfs::ErrorCode::parse: return MLFS_ERR_PARSE;
        case mlfs::ErrorCode::config: return MLFS_ERR_CONFIG;
        case mlfs::ErrorCode::data: return MLFS_ERR_DATA;
        case mlfs::ErrorCode::state: return MLFS_ERR_STATE;
        case mlfs::ErrorCode::io: return MLFS_ERR_IO;
        case mlfs::ErrorCode::empty_after_pruning: return MLFS_ERR_EMPTY_AFTER_PRUNING;
        case mlfs::ErrorCode::undefined_metric: return MLFS_ERR_UNDEFINED_METRIC;
        case mlfs::ErrorCode::internal: return MLFS_ERR_INTERNAL;
    }
    return MLFS_ERR_INTERNAL;
}

template <typename F>
mlfs_status guard(F&& body) {
    try {
        body();
        return MLFS_OK;
    } catch (const mlfs::Error& e) {
        last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return MLFS_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return MLFS_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown failure";
        return MLFS_ERR_INTERNAL;
    }
}

void need(const void* p, const char* what) {
    mlfs::require(p != nullptr, mlfs::ErrorCode::argument, std::string(what) + " is NULL");
}

mlfs::Matrix<std::uint8_t> copy_bits(const uint8_t* src, size_t rows, size_t cols) {
    mlfs::Matrix<std::uint8_t> m(rows, cols);
    std::memcpy(m.data().data(), src, rows * cols);
    return m;
}

}  // namespace

extern "C" {

const char* mlfs_version(void) { return "1.0.0"; }

const char* mlfs_status_string(mlfs_status status) {
    switch (status) {
        case MLFS_OK: return "ok";
        case MLFS_ERR_ARGUMENT: return "argument error";
        case MLFS_ERR_PARSE: return "parse error";
        case MLFS_ERR_CONFIG: return "configuration error";
        case MLFS_ERR_DATA: return "data error";
        case MLFS_ERR_STATE: return "state error";
        case MLFS_ERR_IO: return "I/O error";
        case MLFS_ERR_EMPTY_AFTER_PRUNING: return "empty after pruning";
        case MLFS_ERR_UNDEFINED_METRIC: return "undefined metric";
        case MLFS_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* mlfs_last_error(void) { return last_error.c_str(); }

mlfs_status mlfs_dataset_load_arff(const char* path, int label_count, mlfs_dataset** out) {
    return guard([&] {
        need(path, "path");
        need(out, "out");
        const auto spec = label_count < 0 ? mlfs::LabelSpec::from_relation()
                                          : mlfs::LabelSpec::last(static_cast<std::size_t>(label_count));
        *out = new mlfs_dataset{mlfs::load_arff(path, spec)};
    });
}

mlfs_status mlfs_dataset_read_normalized(const char* path, mlfs_dataset** out) {
    return guard([&] {
        need(path, "path");
        need(out, "out");
        *out = new mlfs_dataset{mlfs::read_normalized(std::filesystem::path(path))};
    });
}

mlfs_status mlfs_dataset_write_normalized(const mlfs_dataset* ds, const char* path) {
    return guard([&] {
        need(ds, "dataset");
        need(path, "path");
        mlfs::write_normalized(ds->ds, std::filesystem::path(path));
    });
}

void mlfs_dataset_free(mlfs_dataset* ds) { delete ds; }

mlfs_status mlfs_dataset_shape(const mlfs_dataset* ds, size_t* instances, size_t* features, size_t* labels) {
    return guard([&] {
        need(ds, "dataset");
        if (instances) *instances = ds->ds.num_instances();
        if (features) *features = ds->ds.num_features();
        if (labels) *labels = ds->ds.num_labels();
    });
}

const char* mlfs_dataset_name(const mlfs_dataset* ds) { return ds ? ds->ds.name().c_str() : ""; }

const char* mlfs_dataset_feature_name(const mlfs_dataset* ds, size_t j) {
    if (!ds || j >= ds->ds.num_features()) return nullptr;
    return ds->ds.feature_names()[j].c_str();
}

const char* mlfs_dataset_label_name(const mlfs_dataset* ds, size_t k) {
    if (!ds || k >= ds->ds.num_labels()) return nullptr;
    return ds->ds.label_names()[k].c_str();
}

mlfs_status mlfs_dataset_discretize(const mlfs_dataset* ds, int bins, const char* strategy, mlfs_dataset** out) {
    return guard([&] {
        need(ds, "dataset");
        need(out, "out");
        auto how = mlfs::Discretization::equal_width;
        if (strategy) {
            const auto parsed = mlfs::parse_discretization(strategy);
            mlfs::require(parsed.has_value(), mlfs::ErrorCode::argument,
                          std::string("unknown discretization '") + strategy + "'");
            how = *parsed;
        }
        *out = new mlfs_dataset{mlfs::discretize(ds->ds, bins, how)};
    });
}

mlfs_status mlfs_dataset_split(const mlfs_dataset* ds, double test_fraction, uint64_t seed, mlfs_dataset** train,
                               mlfs_dataset** test) {
    return guard([&] {
        need(ds, "dataset");
        need(train, "train");
        need(test, "test");
        auto parts = mlfs::split(ds->ds, test_fraction, seed);
        auto* a = new mlfs_dataset{std::move(parts.train)};
        *test = new mlfs_dataset{std::move(parts.test)};
        *train = a;
    });
}

mlfs_status mlfs_dataset_prepare(const mlfs_config* cfg, const char* entry, mlfs_dataset** train,
                                 mlfs_dataset** test) {
    return guard([&] {
        need(cfg, "config");
        need(entry, "entry");
        need(train, "train");
        auto parts = mlfs::prepare_dataset(mlfs::resolve_dataset(entry), cfg->cfg);
        auto* a = new mlfs_dataset{std::move(parts.train)};
        if (test) *test = new mlfs_dataset{std::move(parts.test)};
        *train = a;
    });
}

void mlfs_rank_options_default(mlfs_rank_options* opts) {
    if (!opts) return;
    opts->method = "ATR";
    opts->tau = 6;
    opts->n_select = 50;
    opts->atr_sign_mode = "paper-literal";
    opts->time_budget_seconds = 0.0;
}

mlfs_status mlfs_rank(const mlfs_dataset* train, const mlfs_rank_options* opts, mlfs_ranking** out) {
    return guard([&] {
        need(train, "dataset");
        need(opts, "options");
        need(out, "out");
        mlfs::SelectorConfig sc;
        if (opts->method) sc.method = mlfs::parse_method(opts->method);
        sc.tau = opts->tau;
        sc.n_select = opts->n_select;
        if (opts->atr_sign_mode) sc.atr_sign_mode = mlfs::parse_atr_sign_mode(opts->atr_sign_mode);
        if (opts->time_budget_seconds > 0.0) sc.time_budget_seconds = opts->time_budget_seconds;
        *out = new mlfs_ranking{mlfs::rank_features(train->ds, sc)};
    });
}

mlfs_status mlfs_rank_with_config(const mlfs_dataset* train, const mlfs_config* cfg, const char* method,
                                  mlfs_ranking** out) {
    return guard([&] {
        need(train, "dataset");
        need(cfg, "config");
        need(method, "method");
        need(out, "out");
        cfg->cfg.validate();
        *out = new mlfs_ranking{
            mlfs::rank_features(train->ds, mlfs::selector_config(cfg->cfg, mlfs::parse_method(method)))};
    });
}

void mlfs_ranking_free(mlfs_ranking* r) { delete r; }

size_t mlfs_ranking_size(const mlfs_ranking* r) { return r ? r->result.order.size() : 0; }

mlfs_status mlfs_ranking_entry(const mlfs_ranking* r, size_t i, size_t* feature, double* score) {
    return guard([&] {
        need(r, "ranking");
        mlfs::require(i < r->result.order.size(), mlfs::ErrorCode::argument, "ranking index out of range");
        if (feature) *feature = r->result.order[i];
        if (score) *score = r->result.scores[i];
    });
}

double mlfs_ranking_elapsed(const mlfs_ranking* r) { return r ? r->result.elapsed : 0.0; }
double mlfs_ranking_cache_seconds(const mlfs_ranking* r) { return r ? r->result.cache_seconds : 0.0; }
size_t mlfs_ranking_mi_evaluations(const mlfs_ranking* r) { return r ? r->result.mi_evaluations : 0; }

int mlfs_ranking_timed_out(const mlfs_ranking* r) {
    return r && r->result.status == mlfs::RankStatus::timeout ? 1 : 0;
}

size_t mlfs_ranking_warning_count(const mlfs_ranking* r) { return r ? r->result.warnings.size() : 0; }

const char* mlfs_ranking_warning(const mlfs_ranking* r, size_t i) {
    if (!r || i >= r->result.warnings.size()) return nullptr;
    return r->result.warnings[i].c_str();
}

mlfs_status mlfs_mlknn_fit(const mlfs_dataset* train, const size_t* subset, size_t subset_size, size_t k, double s,
                           const char* distance, mlfs_model** out) {
    return guard([&] {
        need(train, "dataset");
        need(subset, "subset");
        need(out, "out");
        auto d = mlfs::Distance::euclidean;
        if (distance) {
            const auto parsed = mlfs::parse_distance(distance);
            mlfs::require(parsed.has_value(), mlfs::ErrorCode::argument,
                          std::string("unknown distance '") + distance + "'");
            d = *parsed;
        }
        *out = new mlfs_model{mlfs::fit(train->ds, {subset, subset_size}, k, s, d)};
    });
}

mlfs_status mlfs_mlknn_predict(const mlfs_model* model, const mlfs_dataset* test, const size_t* subset,
                               size_t subset_size, uint8_t* predicted, double* scores) {
    return guard([&] {
        need(model, "model");
        need(test, "dataset");
        need(subset, "subset");
        const auto pred = mlfs::predict(model->model, test->ds, {subset, subset_size});
        if (predicted) std::memcpy(predicted, pred.predicted.data().data(), pred.predicted.data().size());
        if (scores) std::memcpy(scores, pred.scores.data().data(), pred.scores.data().size() * sizeof(double));
    });
}

void mlfs_model_free(mlfs_model* model) { delete model; }

mlfs_status mlfs_metric_compute(const char* metric, size_t rows, size_t labels, const uint8_t* truth,
                                const uint8_t* predicted, const double* scores, double* out) {
    return guard([&] {
        need(metric, "metric");
        need(truth, "truth");
        need(out, "out");
        const auto m = mlfs::parse_metric(metric);
        mlfs::require(m.has_value(), mlfs::ErrorCode::argument, std::string("unknown metric '") + metric + "'");
        const bool ranking = *m == mlfs::Metric::ranking_loss || *m == mlfs::Metric::coverage_error;
        mlfs::PredictionBatch b;
        b.truth = copy_bits(truth, rows, labels);
        if (ranking) {
            need(scores, "scores");
            b.scores = mlfs::Matrix<double>(rows, labels);
            std::memcpy(b.scores.data().data(), scores, rows * labels * sizeof(double));
        } else {
            need(predicted, "predicted");
            b.predicted = copy_bits(predicted, rows, labels);
        }
        *out = mlfs::compute(*m, b);
    });
}

mlfs_status mlfs_config_create(mlfs_config** out) {
    return guard([&] {
        need(out, "out");
        *out = new mlfs_config{};
    });
}

mlfs_status mlfs_config_load(const char* path, mlfs_config** out) {
    return guard([&] {
        need(path, "path");
        need(out, "out");
        *out = new mlfs_config{mlfs::load_run_config(path)};
    });
}

void mlfs_config_free(mlfs_config* cfg) { delete cfg; }

mlfs_status mlfs_config_set(mlfs_config* cfg, const char* key, const char* value) {
    return guard([&] {
        need(cfg, "config");
        need(key, "key");
        need(value, "value");
        cfg->cfg.set(key, value);
    });
}

mlfs_status mlfs_config_get(const mlfs_config* cfg, const char* key, char* buf, size_t size, size_t* needed) {
    return guard([&] {
        need(cfg, "config");
        need(key, "key");
        const std::string value = cfg->cfg.get(key);
        if (needed) *needed = value.size() + 1;
        if (buf && size > 0) {
            mlfs::require(size > value.size(), mlfs::ErrorCode::argument, "buffer too small");
            std::memcpy(buf, value.c_str(), value.size() + 1);
        }
    });
}

size_t mlfs_config_key_count(void) { return mlfs::RunConfig::keys().size(); }

const char* mlfs_config_key(size_t i) {
    const auto& keys = mlfs::RunConfig::keys();
    return i < keys.size() ? keys[i].c_str() : nullptr;
}

mlfs_status mlfs_bench_run(const mlfs_config* cfg, mlfs_log_fn log, void* user, mlfs_bench** out) {
    return guard([&] {
        need(cfg, "config");
        need(out, "out");
        mlfs::LogFn fn;
        if (log) fn = [log, user](const std::string& line) { log(line.c_str(), user); };
        *out = new mlfs_bench{mlfs::run_benchmark(cfg->cfg, fn)};
    });
}

mlfs_status mlfs_bench_emit_csv(const mlfs_bench* bench, const char* dir) {
    return guard([&] {
        need(bench, "bench");
        need(dir, "dir");
        mlfs::emit_csv(bench->reports, dir);
    });
}

size_t mlfs_bench_cell_count(const mlfs_bench* bench) { return bench ? bench->reports.size() : 0; }

mlfs_status mlfs_bench_cell(const mlfs_bench* bench, size_t i, const char** dataset, const char** method, int* status,
                            double* ranking_seconds) {
    return guard([&] {
        need(bench, "bench");
        mlfs::require(i < bench->reports.size(), mlfs::ErrorCode::argument, "cell index out of range");
        const auto& rep = bench->reports[i];
        if (dataset) *dataset = rep.dataset.c_str();
        if (method) *method = mlfs::to_string(rep.method);
        if (status) *status = static_cast<int>(rep.status);
        if (ranking_seconds) *ranking_seconds = rep.ranking_seconds;
    });
}

mlfs_status mlfs_bench_cell_metric(const mlfs_bench* bench, size_t i, const char* metric, double* mean,
                                   double* std) {
    return guard([&] {
        need(bench, "bench");
        need(metric, "metric");
        mlfs::require(i < bench->reports.size(), mlfs::ErrorCode::argument, "cell index out of range");
        const auto& rep = bench->reports[i];
        mlfs::require(rep.status == mlfs::CellStatus::ok, mlfs::ErrorCode::state, "cell has no metrics");
        const auto m = mlfs::parse_metric(metric);
        mlfs::require(m.has_value(), mlfs::ErrorCode::argument, std::string("unknown metric '") + metric + "'");
        const auto idx = static_cast<std::size_t>(*m);
        if (mean) *mean = rep.mean[idx];
        if (std) *std = rep.std[idx];
    });
}

int mlfs_bench_has_errors(const mlfs_bench* bench) {
    if (!bench) return 0;
    for (const auto& rep : bench->reports) {
        if (rep.status == mlfs::CellStatus::error) return 1;
    }
    return 0;
}

void mlfs_bench_free(mlfs_bench* bench) { delete bench; }

mlfs_status mlfs_time_ranking(const mlfs_config* cfg, const char* entry, const char* method, double* mean_seconds,
                              double* mean_cache_seconds, int* timed_out) {
    return guard([&] {
        need(cfg, "config");
        need(entry, "entry");
        need(method, "method");
        cfg->cfg.validate();
        const auto parts = mlfs::prepare_dataset(mlfs::resolve_dataset(entry), cfg->cfg);
        const auto t = mlfs::time_ranking(mlfs::parse_method(method), parts.train, cfg->cfg.repeats, cfg->cfg);
        const bool late = t.status == mlfs::CellStatus::timeout;
        const double nan = std::numeric_limits<double>::quiet_NaN();
        if (mean_seconds) *mean_seconds = late ? nan : t.mean_seconds;
        if (mean_cache_seconds) *mean_cache_seconds = late ? nan : t.mean_cache_seconds;
        if (timed_out) *timed_out = late ? 1 : 0;
    });
}

}  // extern "C"
