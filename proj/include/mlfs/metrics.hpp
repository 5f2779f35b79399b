#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "mlfs/matrix.hpp"

namespace mlfs {

struct PredictionBatch {
    Matrix<std::uint8_t> truth;
    Matrix<std::uint8_t> predicted;
    Matrix<double> scores;  // may be empty when ranking metrics are not needed
};

double hamming_loss(const PredictionBatch& b);
// Rows whose truth is all 0 or all 1 are skipped; ties count as misordered.
double ranking_loss(const PredictionBatch& b);
// Competition ranking with the worst shared rank for ties.
double coverage_error(const PredictionBatch& b);
double f1_example(const PredictionBatch& b);
double jaccard_example(const PredictionBatch& b);
double accuracy_example(const PredictionBatch& b);

enum class Metric { hamming_loss, ranking_loss, coverage_error, f1, jaccard, accuracy };

inline constexpr std::array<Metric, 6> kAllMetrics = {Metric::hamming_loss, Metric::ranking_loss,
                                                      Metric::coverage_error, Metric::f1,
                                                      Metric::jaccard, Metric::accuracy};

const char* to_string(Metric m) noexcept;
std::optional<Metric> parse_metric(std::string_view name);
double compute(Metric m, const PredictionBatch& b);

}  // namespace mlfs
