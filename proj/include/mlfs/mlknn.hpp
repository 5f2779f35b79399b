#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mlfs/dataset.hpp"
#include "mlfs/matrix.hpp"

namespace mlfs {

enum class Distance { euclidean, hamming };

const char* to_string(Distance d) noexcept;
std::optional<Distance> parse_distance(std::string_view text);

// Squared Euclidean or Hamming distances between code rows. Squared
// distances order neighbours the same way as Euclidean ones.
using DistanceMatrix = Matrix<std::int64_t>;

struct MLKNNModel {
    std::size_t k = 10;
    double s = 1.0;
    Distance distance = Distance::euclidean;
    std::vector<std::size_t> feature_subset;
    std::vector<double> priors;  // P(H1) per label
    Matrix<double> cond1;        // label x (k+1): P(E_c | H1)
    Matrix<double> cond0;        // label x (k+1): P(E_c | H0)
    Matrix<Code> train_points;   // M x |subset|; empty for models fitted from distances
    Matrix<std::uint8_t> train_labels;
};

struct Prediction {
    Matrix<std::uint8_t> predicted;
    Matrix<double> scores;
};

// Leave-one-out neighbour counting on the discretized codes of `subset`.
MLKNNModel fit(const MultiLabelDataset& train, std::span<const std::size_t> subset, std::size_t k = 10,
               double s = 1.0, Distance distance = Distance::euclidean);

Prediction predict(const MLKNNModel& model, const MultiLabelDataset& test, std::span<const std::size_t> subset);

// Distance-matrix route, used to evaluate nested feature prefixes without
// recomputing distances from scratch.
DistanceMatrix zero_distances(std::size_t rows, std::size_t cols);
// Adds the contribution of one feature column (query codes a, reference codes b).
void add_feature_distance(DistanceMatrix& d, std::span<const Code> a, std::span<const Code> b, Distance distance);

// `train_train` is the M x M matrix of the training set against itself.
MLKNNModel fit_from_distances(const DistanceMatrix& train_train, const Matrix<std::uint8_t>& train_labels,
                              std::size_t k = 10, double s = 1.0);
// `test_train` is M' x M.
Prediction predict_from_distances(const MLKNNModel& model, const DistanceMatrix& test_train);

// Indices of the k nearest reference rows, ties broken by lower index;
// `exclude` (if any) is skipped.
std::vector<std::size_t> nearest_neighbors(std::span<const std::int64_t> distances, std::size_t k,
                                           std::optional<std::size_t> exclude = std::nullopt);

}  // namespace mlfs
