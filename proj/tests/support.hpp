#pragma once

#include <algorithm>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "mlfs/dataset.hpp"
#include "mlfs/infotheory.hpp"
#include "mlfs/metrics.hpp"
#include "oracle.hpp"

namespace testing {

inline mlfs::Variable var(std::vector<int> codes) {
    return mlfs::Variable::from_codes(std::vector<mlfs::Code>(codes.begin(), codes.end()));
}

inline mlfs::MultiLabelDataset to_dataset(const oracle::Instance& d, std::string name = "synthetic") {
    std::vector<mlfs::FeatureColumn> features;
    for (const auto& c : d.features) {
        const int arity = c.empty() ? 1 : *std::max_element(c.begin(), c.end()) + 1;
        features.push_back(mlfs::FeatureColumn::categorical(std::vector<mlfs::Code>(c.begin(), c.end()), arity));
    }
    std::vector<std::vector<std::uint8_t>> labels;
    for (const auto& c : d.labels) labels.emplace_back(c.begin(), c.end());
    return mlfs::MultiLabelDataset(std::move(name), std::move(features), std::move(labels));
}

inline std::filesystem::path data_dir() { return std::filesystem::path(MLFS_SOURCE_DIR) / "data"; }

inline std::filesystem::path temp_dir(const std::string& tag) {
    auto p = std::filesystem::temp_directory_path() / ("mlfs_test_" + tag);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

inline mlfs::PredictionBatch random_batch(std::mt19937_64& rng, std::size_t rows, std::size_t labels) {
    std::uniform_int_distribution<int> bit(0, 1);
    std::uniform_int_distribution<int> level(0, 4);
    mlfs::PredictionBatch b{mlfs::Matrix<std::uint8_t>(rows, labels), mlfs::Matrix<std::uint8_t>(rows, labels),
                            mlfs::Matrix<double>(rows, labels)};
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t l = 0; l < labels; ++l) {
            b.truth(i, l) = static_cast<std::uint8_t>(bit(rng));
            b.predicted(i, l) = static_cast<std::uint8_t>(bit(rng));
            // coarse levels so that ties occur
            b.scores(i, l) = level(rng) / 4.0;
        }
    }
    return b;
}

}  // namespace testing

namespace testing {

// Deterministic stand-in with the shape of the birds data (645 x 260, 19 sparse labels).
inline mlfs::MultiLabelDataset birds_like(std::uint64_t seed = 645) {
    constexpr std::size_t rows = 645, features = 260, labels = 19;
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution positive(0.053);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, labels - 1);
    std::vector<std::vector<std::uint8_t>> y(labels, std::vector<std::uint8_t>(rows));
    for (auto& l : y)
        for (auto& v : l) v = positive(rng);
    std::vector<mlfs::FeatureColumn> cols;
    for (std::size_t f = 0; f < features; ++f) {
        const std::size_t a = pick(rng), b = pick(rng);
        std::vector<double> x(rows);
        for (std::size_t i = 0; i < rows; ++i) x[i] = 2.0 * y[a][i] + y[b][i] + noise(rng);
        cols.push_back(mlfs::FeatureColumn::numeric(std::move(x)));
    }
    return mlfs::discretize(mlfs::MultiLabelDataset("birds-surrogate", std::move(cols), std::move(y)), 5);
}

}  // namespace testing
