#include "mlfs/metrics.hpp"

#include <algorithm>

#include "mlfs/error.hpp"

namespace mlfs {
namespace {

void check_shapes(const PredictionBatch& b, bool need_predicted, bool need_scores) {
    require(b.truth.rows() >= 1 && b.truth.cols() >= 1, ErrorCode::argument, "empty batch");
    if (need_predicted) {
        require(b.predicted.rows() == b.truth.rows() && b.predicted.cols() == b.truth.cols(),
                ErrorCode::argument, "predicted and truth differ in shape");
    }
    if (need_scores) {
        require(b.scores.rows() == b.truth.rows() && b.scores.cols() == b.truth.cols(), ErrorCode::argument,
                "scores and truth differ in shape");
    }
}

struct Overlap {
    std::size_t truth = 0, predicted = 0, both = 0;
};

Overlap overlap(const PredictionBatch& b, std::size_t i) {
    Overlap o;
    for (std::size_t l = 0; l < b.truth.cols(); ++l) {
        const bool y = b.truth(i, l) != 0;
        const bool p = b.predicted(i, l) != 0;
        o.truth += y;
        o.predicted += p;
        o.both += y && p;
    }
    return o;
}

}  // namespace

double hamming_loss(const PredictionBatch& b) {
    check_shapes(b, true, false);
    double total = 0.0;
    for (std::size_t i = 0; i < b.truth.rows(); ++i) {
        std::size_t wrong = 0;
        for (std::size_t l = 0; l < b.truth.cols(); ++l) wrong += (b.truth(i, l) != 0) != (b.predicted(i, l) != 0);
        total += static_cast<double>(wrong) / static_cast<double>(b.truth.cols());
    }
    return total / static_cast<double>(b.truth.rows());
}

double ranking_loss(const PredictionBatch& b) {
    check_shapes(b, false, true);
    const std::size_t nl = b.truth.cols();
    double total = 0.0;
    std::size_t eligible = 0;
    for (std::size_t i = 0; i < b.truth.rows(); ++i) {
        std::size_t pos = 0;
        for (std::size_t l = 0; l < nl; ++l) pos += b.truth(i, l) != 0;
        if (pos == 0 || pos == nl) continue;
        std::size_t bad = 0;
        for (std::size_t j = 0; j < nl; ++j) {
            if (!b.truth(i, j)) continue;
            for (std::size_t k = 0; k < nl; ++k) {
                if (!b.truth(i, k) && b.scores(i, j) <= b.scores(i, k)) ++bad;
            }
        }
        total += static_cast<double>(bad) / static_cast<double>(pos * (nl - pos));
        ++eligible;
    }
    if (eligible == 0) fail(ErrorCode::undefined_metric, "ranking loss: no row has both positive and negative labels");
    return total / static_cast<double>(eligible);
}

double coverage_error(const PredictionBatch& b) {
    check_shapes(b, false, true);
    const std::size_t nl = b.truth.cols();
    double total = 0.0;
    for (std::size_t i = 0; i < b.truth.rows(); ++i) {
        std::size_t worst = 0;
        for (std::size_t j = 0; j < nl; ++j) {
            if (!b.truth(i, j)) continue;
            // rank = number of labels scoring at least as high (ties share the worst rank)
            std::size_t rank = 0;
            for (std::size_t k = 0; k < nl; ++k) rank += b.scores(i, k) >= b.scores(i, j);
            worst = std::max(worst, rank);
        }
        if (worst > 0) total += static_cast<double>(worst - 1);
    }
    return total / static_cast<double>(b.truth.rows());
}

double f1_example(const PredictionBatch& b) {
    check_shapes(b, true, false);
    double total = 0.0;
    for (std::size_t i = 0; i < b.truth.rows(); ++i) {
        const Overlap o = overlap(b, i);
        // both sets empty is a perfect answer
        if (o.truth == 0 && o.predicted == 0) {
            total += 1.0;
            continue;
        }
        const double precision = o.predicted == 0 ? 0.0 : static_cast<double>(o.both) / static_cast<double>(o.predicted);
        const double recall = o.truth == 0 ? 0.0 : static_cast<double>(o.both) / static_cast<double>(o.truth);
        if (precision + recall > 0.0) total += 2.0 * precision * recall / (precision + recall);
    }
    return total / static_cast<double>(b.truth.rows());
}

double jaccard_example(const PredictionBatch& b) {
    check_shapes(b, true, false);
    double total = 0.0;
    for (std::size_t i = 0; i < b.truth.rows(); ++i) {
        const Overlap o = overlap(b, i);
        const std::size_t uni = o.truth + o.predicted - o.both;
        total += uni == 0 ? 1.0 : static_cast<double>(o.both) / static_cast<double>(uni);
    }
    return total / static_cast<double>(b.truth.rows());
}

double accuracy_example(const PredictionBatch& b) {
    check_shapes(b, true, false);
    double total = 0.0;
    for (std::size_t i = 0; i < b.truth.rows(); ++i) {
        const Overlap o = overlap(b, i);
        const std::size_t uni = o.truth + o.predicted - o.both;
        total += uni == 0 ? 1.0 : static_cast<double>(o.both) / static_cast<double>(uni);
    }
    return total / static_cast<double>(b.truth.rows());
}

const char* to_string(Metric m) noexcept {
    switch (m) {
        case Metric::hamming_loss: return "hamming_loss";
        case Metric::ranking_loss: return "ranking_loss";
        case Metric::coverage_error: return "coverage_error";
        case Metric::f1: return "f1";
        case Metric::jaccard: return "jaccard";
        case Metric::accuracy: return "accuracy";
    }
    return "?";
}

std::optional<Metric> parse_metric(std::string_view name) {
    for (Metric m : kAllMetrics) {
        if (name == to_string(m)) return m;
    }
    return std::nullopt;
}

double compute(Metric m, const PredictionBatch& b) {
    switch (m) {
        case Metric::hamming_loss: return hamming_loss(b);
        case Metric::ranking_loss: return ranking_loss(b);
        case Metric::coverage_error: return coverage_error(b);
        case Metric::f1: return f1_example(b);
        case Metric::jaccard: return jaccard_example(b);
        case Metric::accuracy: return accuracy_example(b);
    }
    fail(ErrorCode::internal, "unhandled metric");
}

}  // namespace mlfs
