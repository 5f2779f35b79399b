#include "mlfs/bench.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mlfs/error.hpp"

namespace mlfs {
namespace {

namespace fs = std::filesystem;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    while (!s.empty()) {
        const auto comma = s.find(',');
        const auto item = trim(s.substr(0, comma));
        if (!item.empty()) out.emplace_back(item);
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
    text = trim(text);
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        fail(ErrorCode::config, "bad value '" + std::string(text) + "' for " + std::string(key));
    }
    return value;
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        out += items[i];
    }
    return out;
}

}  // namespace

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

const std::vector<std::string>& RunConfig::keys() {
    static const std::vector<std::string> k = {
        "datasets", "methods",        "n_max",       "tau",           "bins",          "discretization",
        "knn_k",    "knn_s",          "seed",        "time_budget_seconds", "output_dir", "atr_sign_mode",
        "test_fraction", "label_count", "distance",  "repeats"};
    return k;
}

void RunConfig::set(std::string_view key, std::string_view value) {
    value = trim(value);
    if (key == "datasets") {
        datasets = split_list(value);
    } else if (key == "methods") {
        methods.clear();
        if (value != "all") {
            for (const auto& m : split_list(value)) methods.push_back(parse_method(m));
        }
    } else if (key == "n_max") {
        n_max = parse_number<std::size_t>(key, value);
    } else if (key == "tau") {
        tau = parse_number<std::size_t>(key, value);
    } else if (key == "bins") {
        bins = parse_number<int>(key, value);
    } else if (key == "discretization") {
        const auto d = parse_discretization(value);
        if (!d) fail(ErrorCode::config, "unknown discretization '" + std::string(value) + "'");
        discretization = *d;
    } else if (key == "knn_k") {
        knn_k = parse_number<std::size_t>(key, value);
    } else if (key == "knn_s") {
        knn_s = parse_number<double>(key, value);
    } else if (key == "seed") {
        seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "time_budget_seconds") {
        time_budget_seconds = parse_number<double>(key, value);
    } else if (key == "output_dir") {
        output_dir = std::string(value);
    } else if (key == "atr_sign_mode") {
        atr_sign_mode = parse_atr_sign_mode(value);
    } else if (key == "test_fraction") {
        test_fraction = parse_number<double>(key, value);
    } else if (key == "label_count") {
        if (value.empty() || value == "auto") {
            label_count.reset();
        } else {
            label_count = parse_number<std::size_t>(key, value);
        }
    } else if (key == "distance") {
        const auto d = parse_distance(value);
        if (!d) fail(ErrorCode::config, "unknown distance '" + std::string(value) + "'");
        distance = *d;
    } else if (key == "repeats") {
        repeats = parse_number<std::size_t>(key, value);
    } else {
        fail(ErrorCode::config, "unknown key '" + std::string(key) + "'");
    }
}

std::string RunConfig::get(std::string_view key) const {
    if (key == "datasets") return join(datasets);
    if (key == "methods") {
        if (methods.empty()) return "all";
        std::vector<std::string> names;
        for (Method m : methods) names.emplace_back(to_string(m));
        return join(names);
    }
    if (key == "n_max") return std::to_string(n_max);
    if (key == "tau") return std::to_string(tau);
    if (key == "bins") return std::to_string(bins);
    if (key == "discretization") return to_string(discretization);
    if (key == "knn_k") return std::to_string(knn_k);
    if (key == "knn_s") return format_number(knn_s);
    if (key == "seed") return std::to_string(seed);
    if (key == "time_budget_seconds") return format_number(time_budget_seconds);
    if (key == "output_dir") return output_dir;
    if (key == "atr_sign_mode") return to_string(atr_sign_mode);
    if (key == "test_fraction") return format_number(test_fraction);
    if (key == "label_count") return label_count ? std::to_string(*label_count) : "auto";
    if (key == "distance") return to_string(distance);
    if (key == "repeats") return std::to_string(repeats);
    fail(ErrorCode::config, "unknown key '" + std::string(key) + "'");
}

void RunConfig::validate() const {
    require(n_max >= 1, ErrorCode::config, "n_max must be at least 1");
    require(bins >= 2, ErrorCode::config, "bins must be at least 2");
    require(knn_k >= 1, ErrorCode::config, "knn_k must be at least 1");
    require(knn_s >= 0.0, ErrorCode::config, "knn_s must be non-negative");
    require(time_budget_seconds > 0.0, ErrorCode::config, "time_budget_seconds must be positive");
    require(test_fraction > 0.0 && test_fraction < 1.0, ErrorCode::config, "test_fraction must lie in (0, 1)");
    require(repeats >= 1, ErrorCode::config, "repeats must be at least 1");
}

std::vector<Method> RunConfig::effective_methods() const {
    if (!methods.empty()) return methods;
    const auto all = all_methods();
    return {all.begin(), all.end()};
}

RunConfig parse_run_config(std::string_view text) {
    RunConfig cfg;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
        const auto key = trim(line.substr(0, eq));
        try {
            cfg.set(key, line.substr(eq + 1));
        } catch (const Error& e) {
            throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return cfg;
}

RunConfig load_run_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io, "cannot open config " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_run_config(text.str());
}

ResolvedDataset resolve_dataset(std::string_view entry) {
    const fs::path p{std::string(entry)};
    if (p.extension() == ".arff") {
        if (!fs::exists(p)) fail(ErrorCode::io, "dataset not found: " + p.string());
        return {p.stem().string(), p, std::nullopt};
    }
    const fs::path train = p.string() + "-train.arff";
    const fs::path test = p.string() + "-test.arff";
    if (fs::exists(train) && fs::exists(test)) return {p.filename().string(), train, test};
    const fs::path whole = p.string() + ".arff";
    if (fs::exists(whole)) return {p.filename().string(), whole, std::nullopt};
    fail(ErrorCode::io, "dataset not found: " + std::string(entry) + " (looked for -train/-test pair and .arff)");
}

DatasetSplit prepare_dataset(const ResolvedDataset& ds, const RunConfig& cfg) {
    const LabelSpec spec = cfg.label_count ? LabelSpec::last(*cfg.label_count) : LabelSpec::from_relation();
    if (!ds.test_path) {
        const auto all = discretize(load_arff(ds.train_path, spec), cfg.bins, cfg.discretization);
        return split(all, cfg.test_fraction, cfg.seed);
    }
    // Bin edges come from train and test together, as for a single file.
    const auto train = load_arff(ds.train_path, spec);
    const auto test = load_arff(*ds.test_path, spec);
    const auto all = discretize(concatenate(train, test, ds.name), cfg.bins, cfg.discretization);
    std::vector<std::size_t> train_rows(train.num_instances());
    std::vector<std::size_t> test_rows(test.num_instances());
    for (std::size_t i = 0; i < train_rows.size(); ++i) train_rows[i] = i;
    for (std::size_t i = 0; i < test_rows.size(); ++i) test_rows[i] = train_rows.size() + i;
    return provided_split(all.select_rows(train_rows, ds.name), all.select_rows(test_rows, ds.name));
}

SelectorConfig selector_config(const RunConfig& cfg, Method method) {
    SelectorConfig sc;
    sc.method = method;
    sc.tau = cfg.tau;
    sc.n_select = cfg.n_max;
    sc.atr_sign_mode = cfg.atr_sign_mode;
    sc.time_budget_seconds = cfg.time_budget_seconds;
    return sc;
}

std::vector<MetricValues> evaluate_prefixes(const DatasetSplit& split, std::span<const std::size_t> order,
                                            std::size_t n, const RunConfig& cfg) {
    require(n <= order.size(), ErrorCode::argument, "prefix longer than the ranking");
    const auto& train = split.train;
    const auto& test = split.test;
    const auto train_labels = train.label_matrix();
    PredictionBatch batch;
    batch.truth = test.label_matrix();

    DistanceMatrix train_train = zero_distances(train.num_instances(), train.num_instances());
    DistanceMatrix test_train = zero_distances(test.num_instances(), train.num_instances());
    std::vector<MetricValues> out;
    out.reserve(n);
    for (std::size_t step = 0; step < n; ++step) {
        const std::size_t f = order[step];
        add_feature_distance(train_train, train.feature_codes(f), train.feature_codes(f), cfg.distance);
        add_feature_distance(test_train, test.feature_codes(f), train.feature_codes(f), cfg.distance);
        const MLKNNModel model = fit_from_distances(train_train, train_labels, cfg.knn_k, cfg.knn_s);
        Prediction pred = predict_from_distances(model, test_train);
        batch.predicted = std::move(pred.predicted);
        batch.scores = std::move(pred.scores);
        MetricValues values{};
        for (std::size_t m = 0; m < kAllMetrics.size(); ++m) values[m] = compute(kAllMetrics[m], batch);
        out.push_back(values);
    }
    return out;
}

const char* to_string(CellStatus s) noexcept {
    switch (s) {
        case CellStatus::ok: return "ok";
        case CellStatus::timeout: return "timeout";
        case CellStatus::error: return "error";
    }
    return "?";
}

EvaluationReport run_cell(const DatasetSplit& split, const std::string& dataset, Method method,
                          const RunConfig& cfg) {
    EvaluationReport rep;
    rep.dataset = dataset;
    rep.method = method;
    try {
        rep.ranking = rank_features(split.train, selector_config(cfg, method));
        rep.ranking_seconds = rep.ranking.elapsed;
        if (rep.ranking.status == RankStatus::timeout) {
            rep.status = CellStatus::timeout;
            return rep;
        }
        rep.per_n = evaluate_prefixes(split, rep.ranking.order, rep.ranking.order.size(), cfg);
        const auto count = static_cast<double>(rep.per_n.size());
        for (std::size_t m = 0; m < kAllMetrics.size(); ++m) {
            double sum = 0.0;
            for (const auto& v : rep.per_n) sum += v[m];
            const double mean = sum / count;
            double sq = 0.0;
            for (const auto& v : rep.per_n) sq += (v[m] - mean) * (v[m] - mean);
            rep.mean[m] = mean;
            rep.std[m] = std::sqrt(sq / count);
        }
    } catch (const Error& e) {
        rep.status = CellStatus::error;
        rep.message = e.what();
        rep.per_n.clear();
    }
    return rep;
}

std::vector<EvaluationReport> run_benchmark(const RunConfig& cfg, const LogFn& log) {
    cfg.validate();
    require(!cfg.datasets.empty(), ErrorCode::config, "no datasets configured");
    const auto methods = cfg.effective_methods();
    std::vector<EvaluationReport> reports;
    for (const auto& entry : cfg.datasets) {
        std::optional<DatasetSplit> split;
        std::string name = fs::path(entry).stem().string();
        std::string load_error;
        try {
            const auto resolved = resolve_dataset(entry);
            name = resolved.name;
            split = prepare_dataset(resolved, cfg);
        } catch (const Error& e) {
            load_error = e.what();
        }
        for (Method m : methods) {
            if (!split) {
                EvaluationReport rep;
                rep.dataset = name;
                rep.method = m;
                rep.status = CellStatus::error;
                rep.message = load_error;
                if (log) log(name + " " + to_string(m) + ": error: " + load_error);
                reports.push_back(std::move(rep));
                continue;
            }
            auto rep = run_cell(*split, name, m, cfg);
            if (log) {
                std::string line = name + " " + to_string(m) + ": " + to_string(rep.status);
                if (rep.status == CellStatus::ok) {
                    line += ", ranking " + format_number(rep.ranking_seconds) + " s, hamming_loss " +
                            format_number(rep.mean[0]);
                } else if (rep.status == CellStatus::error) {
                    line += ": " + rep.message;
                }
                log(line);
            }
            reports.push_back(std::move(rep));
        }
    }
    return reports;
}

void emit_csv(const std::vector<EvaluationReport>& reports, const fs::path& dir) {
    require(!reports.empty(), ErrorCode::argument, "no reports to write");
    std::error_code ec;
    fs::create_directories(dir / "curves", ec);
    if (ec) fail(ErrorCode::io, "cannot create " + (dir / "curves").string() + ": " + ec.message());

    auto open = [](const fs::path& p) {
        std::ofstream out(p, std::ios::binary);
        if (!out) fail(ErrorCode::io, "cannot write " + p.string());
        return out;
    };

    auto metrics = open(dir / "metrics.csv");
    metrics << "dataset,method,metric,mean,std,status\n";
    auto timings = open(dir / "timings.csv");
    timings << "dataset,method,ranking_seconds,status\n";
    for (const auto& rep : reports) {
        const char* method = to_string(rep.method);
        const char* status = to_string(rep.status);
        for (std::size_t m = 0; m < kAllMetrics.size(); ++m) {
            metrics << rep.dataset << ',' << method << ',' << to_string(kAllMetrics[m]) << ',';
            if (rep.status == CellStatus::ok) metrics << format_number(rep.mean[m]) << ',' << format_number(rep.std[m]);
            else metrics << ',';
            metrics << ',' << status << '\n';
        }
        timings << rep.dataset << ',' << method << ',';
        if (rep.status != CellStatus::error) timings << format_number(rep.ranking_seconds);
        timings << ',' << status << '\n';

        if (rep.status != CellStatus::ok) continue;
        auto curve = open(dir / "curves" / (rep.dataset + "_" + method + ".csv"));
        curve << 'n';
        for (Metric m : kAllMetrics) curve << ',' << to_string(m);
        curve << '\n';
        for (std::size_t n = 0; n < rep.per_n.size(); ++n) {
            curve << n + 1;
            for (double v : rep.per_n[n]) curve << ',' << format_number(v);
            curve << '\n';
        }
        if (!curve) fail(ErrorCode::io, "write failed for curve file");
    }
    if (!metrics || !timings) fail(ErrorCode::io, "write failed in " + dir.string());
}

TimingResult time_ranking(Method method, const MultiLabelDataset& train, std::size_t repeats, const RunConfig& cfg) {
    require(repeats >= 1, ErrorCode::argument, "repeats must be at least 1");
    SelectorConfig sc = selector_config(cfg, method);
    sc.n_select = train.num_features();
    TimingResult out;
    for (std::size_t r = 0; r < repeats; ++r) {
        const auto res = rank_features(train, sc);
        if (res.status == RankStatus::timeout) {
            out.status = CellStatus::timeout;
            out.seconds.clear();
            out.cache_seconds.clear();
            return out;
        }
        out.seconds.push_back(res.elapsed);
        out.cache_seconds.push_back(res.cache_seconds);
    }
    for (std::size_t r = 0; r < repeats; ++r) {
        out.mean_seconds += out.seconds[r] / static_cast<double>(repeats);
        out.mean_cache_seconds += out.cache_seconds[r] / static_cast<double>(repeats);
    }
    return out;
}

}  // namespace mlfs
