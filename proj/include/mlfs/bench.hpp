#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlfs/dataset.hpp"
#include "mlfs/metrics.hpp"
#include "mlfs/mlknn.hpp"
#include "mlfs/selectors.hpp"

namespace mlfs {

// Flat key = value run description. Keys are the member names.
struct RunConfig {
    std::vector<std::string> datasets;
    std::vector<Method> methods;  // empty means all ten
    std::size_t n_max = 50;
    std::size_t tau = 6;
    int bins = 5;
    Discretization discretization = Discretization::equal_width;
    std::size_t knn_k = 10;
    double knn_s = 1.0;
    std::uint64_t seed = 1;
    double time_budget_seconds = 14400.0;
    std::string output_dir = "results";
    AtrSignMode atr_sign_mode = AtrSignMode::paper_literal;
    double test_fraction = 0.4;
    std::optional<std::size_t> label_count;  // unset: read "-C n" from the relation
    Distance distance = Distance::euclidean;
    std::size_t repeats = 3;

    static const std::vector<std::string>& keys();
    // Throws ErrorCode::config on an unknown key or a malformed value.
    void set(std::string_view key, std::string_view value);
    std::string get(std::string_view key) const;
    void validate() const;
    std::vector<Method> effective_methods() const;
};

// '#' starts a comment; blank lines are ignored.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);

// A dataset entry is either an .arff file (split with the seed) or a stem:
// <stem>-train.arff + <stem>-test.arff when both exist, else <stem>.arff.
struct ResolvedDataset {
    std::string name;
    std::filesystem::path train_path;
    std::optional<std::filesystem::path> test_path;
};

ResolvedDataset resolve_dataset(std::string_view entry);

// Loads, discretizes (train and test together) and splits.
DatasetSplit prepare_dataset(const ResolvedDataset& ds, const RunConfig& cfg);

SelectorConfig selector_config(const RunConfig& cfg, Method method);

using MetricValues = std::array<double, kAllMetrics.size()>;

// Metrics of ML-KNN on the test part for every prefix N = 1..n of `order`.
std::vector<MetricValues> evaluate_prefixes(const DatasetSplit& split, std::span<const std::size_t> order,
                                            std::size_t n, const RunConfig& cfg);

enum class CellStatus { ok, timeout, error };
const char* to_string(CellStatus s) noexcept;

struct EvaluationReport {
    std::string dataset;
    Method method = Method::atr;
    CellStatus status = CellStatus::ok;
    std::string message;
    RankingResult ranking;
    std::vector<MetricValues> per_n;  // index N-1
    MetricValues mean{};
    MetricValues std{};               // population deviation over N
    double ranking_seconds = 0.0;
};

// Ranks on the train part only, then evaluates the prefixes.
EvaluationReport run_cell(const DatasetSplit& split, const std::string& dataset, Method method, const RunConfig& cfg);

using LogFn = std::function<void(const std::string&)>;

std::vector<EvaluationReport> run_benchmark(const RunConfig& cfg, const LogFn& log = {});

// Writes metrics.csv, timings.csv and curves/<dataset>_<method>.csv.
void emit_csv(const std::vector<EvaluationReport>& reports, const std::filesystem::path& dir);

struct TimingResult {
    std::vector<double> seconds;
    std::vector<double> cache_seconds;
    double mean_seconds = 0.0;
    double mean_cache_seconds = 0.0;
    CellStatus status = CellStatus::ok;
};

// Mean over `repeats` rankings of the whole feature space.
TimingResult time_ranking(Method method, const MultiLabelDataset& train, std::size_t repeats, const RunConfig& cfg);

std::string format_number(double v);

}  // namespace mlfs
