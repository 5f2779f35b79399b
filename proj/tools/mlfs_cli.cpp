// mlfs command-line front end: rank, bench and time.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mlfs/mlfs.h"

namespace {

struct ConfigDeleter {
    void operator()(mlfs_config* c) const { mlfs_config_free(c); }
};
struct DatasetDeleter {
    void operator()(mlfs_dataset* d) const { mlfs_dataset_free(d); }
};
struct RankingDeleter {
    void operator()(mlfs_ranking* r) const { mlfs_ranking_free(r); }
};
struct BenchDeleter {
    void operator()(mlfs_bench* b) const { mlfs_bench_free(b); }
};

using ConfigPtr = std::unique_ptr<mlfs_config, ConfigDeleter>;

class Failure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void check(mlfs_status st, const std::string& what) {
    if (st != MLFS_OK) throw Failure(what + ": " + mlfs_status_string(st) + ": " + mlfs_last_error());
}

std::string config_value(const mlfs_config* cfg, const char* key) {
    size_t needed = 0;
    check(mlfs_config_get(cfg, key, nullptr, 0, &needed), key);
    std::string buf(needed, '\0');
    check(mlfs_config_get(cfg, key, buf.data(), buf.size(), &needed), key);
    buf.resize(needed - 1);
    return buf;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    for (char c : s + ",") {
        if (c == ',') {
            const auto a = item.find_first_not_of(" \t");
            if (a != std::string::npos) out.push_back(item.substr(a, item.find_last_not_of(" \t") - a + 1));
            item.clear();
        } else {
            item += c;
        }
    }
    return out;
}

// Config file first, then MLFS_OUTPUT_DIR, then flags.
struct Settings {
    std::string config_path;
    std::map<std::string, std::optional<std::string>> flags;

    void add_flags(CLI::App* app) {
        app->add_option("-c,--config", config_path, "key = value run configuration file");
        for (size_t i = 0; i < mlfs_config_key_count(); ++i) {
            const std::string key = mlfs_config_key(i);
            app->add_option("--" + key, flags[key], "overrides '" + key + "' from the config file");
        }
    }

    ConfigPtr build() const {
        mlfs_config* raw = nullptr;
        if (config_path.empty()) {
            check(mlfs_config_create(&raw), "config");
        } else {
            check(mlfs_config_load(config_path.c_str(), &raw), config_path);
        }
        ConfigPtr cfg(raw);
        if (const char* env = std::getenv("MLFS_OUTPUT_DIR"); env && *env) {
            check(mlfs_config_set(cfg.get(), "output_dir", env), "MLFS_OUTPUT_DIR");
        }
        for (const auto& [key, value] : flags) {
            if (value) check(mlfs_config_set(cfg.get(), key.c_str(), value->c_str()), "--" + key);
        }
        return cfg;
    }
};

void log_line(const char* line, void*) { std::fprintf(stderr, "%s\n", line); }

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

int run_rank(const Settings& settings, const std::string& method_flag, const std::string& out_path) {
    const auto cfg = settings.build();
    const auto datasets = split_list(config_value(cfg.get(), "datasets"));
    if (datasets.size() != 1) throw Failure("rank needs exactly one dataset (--datasets)");
    std::string method = method_flag;
    if (method.empty()) {
        const auto methods = split_list(config_value(cfg.get(), "methods"));
        if (methods.size() != 1 || methods[0] == "all") throw Failure("rank needs exactly one method (--method)");
        method = methods[0];
    }

    mlfs_dataset* train_raw = nullptr;
    check(mlfs_dataset_prepare(cfg.get(), datasets[0].c_str(), &train_raw, nullptr), datasets[0]);
    std::unique_ptr<mlfs_dataset, DatasetDeleter> train(train_raw);
    mlfs_ranking* rank_raw = nullptr;
    check(mlfs_rank_with_config(train.get(), cfg.get(), method.c_str(), &rank_raw), "rank");
    std::unique_ptr<mlfs_ranking, RankingDeleter> ranking(rank_raw);

    for (size_t i = 0; i < mlfs_ranking_warning_count(ranking.get()); ++i) {
        std::fprintf(stderr, "warning: %s\n", mlfs_ranking_warning(ranking.get(), i));
    }
    if (mlfs_ranking_timed_out(ranking.get())) {
        std::fprintf(stderr, "%s: timeout after %s s\n", method.c_str(), fmt(mlfs_ranking_elapsed(ranking.get())).c_str());
        return 0;
    }

    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw Failure("cannot write " + out_path);
    }
    std::ostream& out = out_path.empty() ? std::cout : file;
    out << "rank,feature,name,score\n";
    for (size_t i = 0; i < mlfs_ranking_size(ranking.get()); ++i) {
        size_t f = 0;
        double score = 0.0;
        check(mlfs_ranking_entry(ranking.get(), i, &f, &score), "ranking");
        out << i + 1 << ',' << f << ',' << mlfs_dataset_feature_name(train.get(), f) << ',' << fmt(score) << '\n';
    }
    std::fprintf(stderr, "%s: %zu features in %s s (tables %s s)\n", method.c_str(), mlfs_ranking_size(ranking.get()),
                 fmt(mlfs_ranking_elapsed(ranking.get())).c_str(),
                 fmt(mlfs_ranking_cache_seconds(ranking.get())).c_str());
    return 0;
}

int run_bench(const Settings& settings) {
    const auto cfg = settings.build();
    mlfs_bench* raw = nullptr;
    check(mlfs_bench_run(cfg.get(), log_line, nullptr, &raw), "bench");
    std::unique_ptr<mlfs_bench, BenchDeleter> bench(raw);
    const std::string dir = config_value(cfg.get(), "output_dir");
    check(mlfs_bench_emit_csv(bench.get(), dir.c_str()), "write results");
    std::fprintf(stderr, "results written to %s\n", dir.c_str());
    return mlfs_bench_has_errors(bench.get()) ? 1 : 0;
}

int run_time(const Settings& settings) {
    const auto cfg = settings.build();
    const auto datasets = split_list(config_value(cfg.get(), "datasets"));
    auto methods = split_list(config_value(cfg.get(), "methods"));
    if (methods.size() == 1 && methods[0] == "all") {
        methods = {"ATR", "PPT_MI", "IGMF", "PMU", "D2F", "MDMR", "LRFS", "LSMFS", "MLSMFS", "SCLS"};
    }
    const std::string dir = config_value(cfg.get(), "output_dir");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    const std::string path = dir + "/timing.csv";
    std::ofstream out(path);
    if (!out) throw Failure("cannot write " + path);
    out << "dataset,method,mean_seconds,cache_seconds,status\n";

    bool errors = false;
    for (const auto& ds : datasets) {
        for (const auto& m : methods) {
            double mean = 0.0, cache = 0.0;
            int late = 0;
            const mlfs_status st = mlfs_time_ranking(cfg.get(), ds.c_str(), m.c_str(), &mean, &cache, &late);
            const std::string name = std::filesystem::path(ds).stem().string();
            if (st != MLFS_OK) {
                errors = true;
                std::fprintf(stderr, "%s %s: error: %s\n", name.c_str(), m.c_str(), mlfs_last_error());
                out << name << ',' << m << ",,,error\n";
            } else if (late) {
                std::fprintf(stderr, "%s %s: timeout\n", name.c_str(), m.c_str());
                out << name << ',' << m << ",,,timeout\n";
            } else {
                std::fprintf(stderr, "%s %s: %s s (tables %s s)\n", name.c_str(), m.c_str(), fmt(mean).c_str(),
                             fmt(cache).c_str());
                out << name << ',' << m << ',' << fmt(mean) << ',' << fmt(cache) << ",ok\n";
            }
        }
    }
    std::fprintf(stderr, "timings written to %s\n", path.c_str());
    return errors ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Information-theoretic multi-label feature selection benchmark"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(mlfs_version()));

    Settings rank_settings, bench_settings, time_settings;
    std::string method, out_path;

    auto* rank = app.add_subcommand("rank", "rank the features of one dataset with one method");
    rank_settings.add_flags(rank);
    rank->add_option("-m,--method", method, "selection method (ATR, PPT_MI, IGMF, PMU, D2F, MDMR, LRFS, LSMFS, MLSMFS, SCLS)");
    rank->add_option("-o,--output", out_path, "write the ranking CSV here instead of stdout");

    auto* bench = app.add_subcommand("bench", "rank, evaluate every prefix with ML-KNN and write CSV reports");
    bench_settings.add_flags(bench);

    auto* time = app.add_subcommand("time", "time full rankings (mean of `repeats` runs)");
    time_settings.add_flags(time);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*rank) return run_rank(rank_settings, method, out_path);
        if (*bench) return run_bench(bench_settings);
        if (*time) return run_time(time_settings);
    } catch (const Failure& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
