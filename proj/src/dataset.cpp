#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

#include "mlfs/dataset.hpp"
#include "mlfs/error.hpp"

namespace mlfs {

FeatureColumn FeatureColumn::categorical(std::vector<Code> codes, Code arity) {
    FeatureColumn col;
    col.codes = std::move(codes);
    col.arity = arity;
    return col;
}

FeatureColumn FeatureColumn::numeric(std::vector<double> values) {
    FeatureColumn col;
    col.raw = std::move(values);
    col.arity = 0;
    return col;
}

MultiLabelDataset::MultiLabelDataset(std::string name,
                                     std::vector<FeatureColumn> features,
                                     std::vector<std::vector<std::uint8_t>> labels,
                                     std::vector<std::string> feature_names,
                                     std::vector<std::string> label_names)
    : name_(std::move(name)),
      features_(std::move(features)),
      labels_(std::move(labels)),
      feature_names_(std::move(feature_names)),
      label_names_(std::move(label_names)) {
    require(!features_.empty(), ErrorCode::argument, "dataset needs at least one feature");
    require(!labels_.empty(), ErrorCode::argument, "dataset needs at least one label");
    rows_ = labels_.front().size();
    require(rows_ >= 1, ErrorCode::argument, "dataset needs at least one instance");

    for (std::size_t k = 0; k < labels_.size(); ++k) {
        require(labels_[k].size() == rows_, ErrorCode::argument, "label column row count mismatch");
        for (auto v : labels_[k]) {
            require(v <= 1, ErrorCode::data, "label column " + std::to_string(k) + " is not binary");
        }
    }
    for (std::size_t j = 0; j < features_.size(); ++j) {
        const auto& col = features_[j];
        require(col.arity >= 0, ErrorCode::argument, "negative arity");
        require(col.size() == rows_, ErrorCode::argument,
                "feature column " + std::to_string(j) + " row count mismatch");
        if (col.is_discrete()) {
            for (auto c : col.codes) {
                require(c >= 0 && c < col.arity, ErrorCode::data,
                        "feature column " + std::to_string(j) + " has code outside [0, arity)");
            }
        }
    }

    if (feature_names_.empty()) {
        for (std::size_t j = 0; j < features_.size(); ++j) feature_names_.push_back("f" + std::to_string(j));
    }
    if (label_names_.empty()) {
        for (std::size_t k = 0; k < labels_.size(); ++k) label_names_.push_back("l" + std::to_string(k));
    }
    require(feature_names_.size() == features_.size(), ErrorCode::argument, "feature name count mismatch");
    require(label_names_.size() == labels_.size(), ErrorCode::argument, "label name count mismatch");
}

std::span<const Code> MultiLabelDataset::feature_codes(std::size_t j) const {
    const auto& col = features_.at(j);
    require(col.is_discrete(), ErrorCode::state,
            "feature '" + feature_names_[j] + "' has not been discretized");
    return col.codes;
}

bool MultiLabelDataset::is_discrete() const noexcept {
    return std::all_of(features_.begin(), features_.end(),
                       [](const FeatureColumn& c) { return c.is_discrete(); });
}

Matrix<std::uint8_t> MultiLabelDataset::label_matrix() const {
    Matrix<std::uint8_t> out(rows_, labels_.size());
    for (std::size_t k = 0; k < labels_.size(); ++k) {
        for (std::size_t i = 0; i < rows_; ++i) out(i, k) = labels_[k][i];
    }
    return out;
}

MultiLabelDataset MultiLabelDataset::select_rows(std::span<const std::size_t> rows, std::string name) const {
    std::vector<FeatureColumn> features;
    features.reserve(features_.size());
    for (const auto& col : features_) {
        FeatureColumn out;
        out.arity = col.arity;
        if (col.is_discrete()) {
            out.codes.reserve(rows.size());
            for (auto r : rows) out.codes.push_back(col.codes.at(r));
        } else {
            out.raw.reserve(rows.size());
            for (auto r : rows) out.raw.push_back(col.raw.at(r));
        }
        features.push_back(std::move(out));
    }
    std::vector<std::vector<std::uint8_t>> labels(labels_.size());
    for (std::size_t k = 0; k < labels_.size(); ++k) {
        labels[k].reserve(rows.size());
        for (auto r : rows) labels[k].push_back(labels_[k].at(r));
    }
    return MultiLabelDataset(name.empty() ? name_ : std::move(name), std::move(features),
                             std::move(labels), feature_names_, label_names_);
}

const char* to_string(Discretization d) noexcept {
    switch (d) {
        case Discretization::equal_width: return "equal-width";
        case Discretization::equal_frequency: return "equal-frequency";
    }
    return "?";
}

std::optional<Discretization> parse_discretization(std::string_view text) {
    if (text == "equal-width") return Discretization::equal_width;
    if (text == "equal-frequency") return Discretization::equal_frequency;
    return std::nullopt;
}

namespace {

void check_finite(std::span<const double> values) {
    for (double v : values) {
        require(std::isfinite(v), ErrorCode::data, "non-finite feature value");
    }
}

}  // namespace

// Bins are [lo + i*w, lo + (i+1)*w) except the last, which is closed.
std::vector<Code> equal_width_codes(std::span<const double> values, int bins) {
    require(bins >= 2, ErrorCode::argument, "bins must be >= 2");
    check_finite(values);
    std::vector<Code> codes(values.size(), 0);
    if (values.empty()) return codes;
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (!(hi > lo)) return codes;
    const double width = (hi - lo) / bins;
    for (std::size_t i = 0; i < values.size(); ++i) {
        auto bin = static_cast<long>(std::floor((values[i] - lo) / width));
        codes[i] = static_cast<Code>(std::clamp<long>(bin, 0, bins - 1));
    }
    return codes;
}

// Rank-based quantile bins; equal values always share a bin.
std::vector<Code> equal_frequency_codes(std::span<const double> values, int bins) {
    require(bins >= 2, ErrorCode::argument, "bins must be >= 2");
    check_finite(values);
    std::vector<Code> codes(values.size(), 0);
    if (values.empty()) return codes;
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<long double>(sorted.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto rank = std::lower_bound(sorted.begin(), sorted.end(), values[i]) - sorted.begin();
        const auto bin = static_cast<long>(std::floor(static_cast<long double>(rank) * bins / n));
        codes[i] = static_cast<Code>(std::clamp<long>(bin, 0, bins - 1));
    }
    return codes;
}

MultiLabelDataset discretize(const MultiLabelDataset& ds, int bins, Discretization strategy) {
    require(bins >= 2, ErrorCode::argument, "bins must be >= 2");
    std::vector<FeatureColumn> features;
    features.reserve(ds.num_features());
    for (const auto& col : ds.features()) {
        if (col.is_discrete()) {
            features.push_back(col);
            continue;
        }
        auto codes = strategy == Discretization::equal_width ? equal_width_codes(col.raw, bins)
                                                             : equal_frequency_codes(col.raw, bins);
        const bool constant = std::all_of(codes.begin(), codes.end(), [](Code c) { return c == 0; });
        features.push_back(FeatureColumn::categorical(std::move(codes), constant ? 1 : bins));
    }
    return MultiLabelDataset(ds.name(), std::move(features), ds.labels(), ds.feature_names(),
                             ds.label_names());
}

namespace {

// Unbiased draw in [0, n) from the raw 64-bit engine output. std::uniform_int_distribution
// differs between standard libraries, this does not.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

}  // namespace

DatasetSplit split(const MultiLabelDataset& ds, double fraction_test, std::uint64_t seed) {
    require(fraction_test > 0.0 && fraction_test < 1.0, ErrorCode::argument,
            "test fraction must lie in (0, 1)");
    const std::size_t m = ds.num_instances();
    const auto n_test = static_cast<std::size_t>(std::llround(fraction_test * static_cast<double>(m)));
    require(n_test >= 1 && n_test < m, ErrorCode::argument,
            "test fraction leaves an empty train or test part");

    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(seed);
    for (std::size_t i = m - 1; i > 0; --i) {
        std::swap(perm[i], perm[uniform_below(rng, i + 1)]);
    }
    std::vector<std::size_t> test_rows(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_test));
    std::vector<std::size_t> train_rows(perm.begin() + static_cast<std::ptrdiff_t>(n_test), perm.end());
    std::sort(test_rows.begin(), test_rows.end());
    std::sort(train_rows.begin(), train_rows.end());

    DatasetSplit out{ds.select_rows(train_rows, ds.name()), ds.select_rows(test_rows, ds.name()),
                     DatasetSplit::Origin::seeded_random, seed, std::move(train_rows),
                     std::move(test_rows)};
    return out;
}

DatasetSplit provided_split(MultiLabelDataset train, MultiLabelDataset test) {
    require(train.feature_names() == test.feature_names(), ErrorCode::data,
            "train and test feature names differ");
    require(train.label_names() == test.label_names(), ErrorCode::data, "train and test label names differ");
    for (std::size_t j = 0; j < train.num_features(); ++j) {
        require(train.arity(j) == test.arity(j), ErrorCode::data,
                "train and test arity differ for '" + train.feature_names()[j] + "'");
    }
    return DatasetSplit{std::move(train), std::move(test), DatasetSplit::Origin::provided_split,
                        std::nullopt, {}, {}};
}

MultiLabelDataset concatenate(const MultiLabelDataset& a, const MultiLabelDataset& b, std::string name) {
    require(a.feature_names() == b.feature_names() && a.label_names() == b.label_names(),
            ErrorCode::data, "cannot concatenate datasets with different schemas");
    std::vector<FeatureColumn> features;
    for (std::size_t j = 0; j < a.num_features(); ++j) {
        const auto& x = a.feature(j);
        const auto& y = b.feature(j);
        require(x.arity == y.arity, ErrorCode::data, "cannot concatenate columns with different arity");
        FeatureColumn col = x;
        col.codes.insert(col.codes.end(), y.codes.begin(), y.codes.end());
        col.raw.insert(col.raw.end(), y.raw.begin(), y.raw.end());
        features.push_back(std::move(col));
    }
    auto labels = a.labels();
    for (std::size_t k = 0; k < labels.size(); ++k) {
        labels[k].insert(labels[k].end(), b.label(k).begin(), b.label(k).end());
    }
    return MultiLabelDataset(name.empty() ? a.name() : std::move(name), std::move(features),
                             std::move(labels), a.feature_names(), a.label_names());
}

void write_normalized(const MultiLabelDataset& ds, std::ostream& out) {
    require(ds.is_discrete(), ErrorCode::state, "normalized format needs a discretized dataset");
    const std::size_t m = ds.num_instances();
    out << m << ' ' << ds.num_features() << ' ' << ds.num_labels() << '\n';
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < ds.num_features(); ++j) {
            out << ds.feature(j).codes[i] << ' ';
        }
        for (std::size_t k = 0; k < ds.num_labels(); ++k) {
            out << static_cast<int>(ds.label(k)[i]) << (k + 1 == ds.num_labels() ? '\n' : ' ');
        }
    }
    require(static_cast<bool>(out), ErrorCode::io, "write failed");
}

void write_normalized(const MultiLabelDataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path);
    require(static_cast<bool>(out), ErrorCode::io, "cannot open '" + path.string() + "' for writing");
    write_normalized(ds, out);
}

MultiLabelDataset read_normalized(std::istream& in, std::string name) {
    long long m = 0, f = 0, l = 0;
    if (!(in >> m >> f >> l)) throw ParseError(1, "expected header 'M F L'");
    require(m >= 1 && f >= 1 && l >= 1, ErrorCode::data, "header dimensions must be positive");

    std::vector<std::vector<Code>> codes(static_cast<std::size_t>(f), std::vector<Code>(static_cast<std::size_t>(m)));
    std::vector<std::vector<std::uint8_t>> labels(static_cast<std::size_t>(l),
                                                  std::vector<std::uint8_t>(static_cast<std::size_t>(m)));
    for (long long i = 0; i < m; ++i) {
        for (long long j = 0; j < f + l; ++j) {
            long long v = 0;
            if (!(in >> v)) throw ParseError(static_cast<std::size_t>(i + 2), "truncated row");
            if (j < f) {
                require(v >= 0, ErrorCode::data, "negative feature code");
                codes[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = static_cast<Code>(v);
            } else {
                require(v == 0 || v == 1, ErrorCode::data, "label value must be 0 or 1");
                labels[static_cast<std::size_t>(j - f)][static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v);
            }
        }
    }
    std::vector<FeatureColumn> features;
    for (auto& col : codes) {
        const Code arity = *std::max_element(col.begin(), col.end()) + 1;
        features.push_back(FeatureColumn::categorical(std::move(col), arity));
    }
    return MultiLabelDataset(std::move(name), std::move(features), std::move(labels));
}

MultiLabelDataset read_normalized(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorCode::io, "cannot open '" + path.string() + "'");
    return read_normalized(in, path.stem().string());
}

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::argument: return "argument error";
        case ErrorCode::parse: return "parse error";
        case ErrorCode::config: return "configuration error";
        case ErrorCode::data: return "data error";
        case ErrorCode::state: return "state error";
        case ErrorCode::io: return "I/O error";
        case ErrorCode::empty_after_pruning: return "empty after pruning";
        case ErrorCode::undefined_metric: return "undefined metric";
        case ErrorCode::internal: return "internal consistency error";
    }
    return "unknown error";
}

}  // namespace mlfs
