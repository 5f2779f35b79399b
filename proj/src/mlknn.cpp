#include "mlfs/mlknn.hpp"

#include <algorithm>
#include <utility>

#include "mlfs/error.hpp"

namespace mlfs {
namespace {

Matrix<Code> gather(const MultiLabelDataset& ds, std::span<const std::size_t> subset) {
    require(ds.is_discrete(), ErrorCode::state, "ML-KNN needs a discretized dataset");
    Matrix<Code> points(ds.num_instances(), subset.size());
    for (std::size_t c = 0; c < subset.size(); ++c) {
        require(subset[c] < ds.num_features(), ErrorCode::argument, "feature index out of range");
        const auto codes = ds.feature_codes(subset[c]);
        for (std::size_t r = 0; r < codes.size(); ++r) points(r, c) = codes[r];
    }
    return points;
}

DistanceMatrix distances(const Matrix<Code>& a, const Matrix<Code>& b, Distance distance) {
    DistanceMatrix d(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto x = a.row(i);
        for (std::size_t j = 0; j < b.rows(); ++j) {
            const auto y = b.row(j);
            std::int64_t sum = 0;
            for (std::size_t c = 0; c < x.size(); ++c) {
                const std::int64_t diff = x[c] - y[c];
                sum += distance == Distance::euclidean ? diff * diff : (diff != 0);
            }
            d(i, j) = sum;
        }
    }
    return d;
}

std::size_t positive_count(const Matrix<std::uint8_t>& labels, std::span<const std::size_t> rows, std::size_t l) {
    std::size_t c = 0;
    for (auto r : rows) c += labels(r, l);
    return c;
}

}  // namespace

const char* to_string(Distance d) noexcept { return d == Distance::euclidean ? "euclidean" : "hamming"; }

std::optional<Distance> parse_distance(std::string_view text) {
    if (text == "euclidean") return Distance::euclidean;
    if (text == "hamming") return Distance::hamming;
    return std::nullopt;
}

std::vector<std::size_t> nearest_neighbors(std::span<const std::int64_t> dist, std::size_t k,
                                           std::optional<std::size_t> exclude) {
    std::vector<std::pair<std::int64_t, std::size_t>> cand;
    cand.reserve(dist.size());
    for (std::size_t j = 0; j < dist.size(); ++j) {
        if (exclude && *exclude == j) continue;
        cand.emplace_back(dist[j], j);
    }
    require(k <= cand.size(), ErrorCode::argument, "k exceeds the number of reference rows");
    std::nth_element(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k) - 1, cand.end());
    std::sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k));
    std::vector<std::size_t> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = cand[i].second;
    return out;
}

DistanceMatrix zero_distances(std::size_t rows, std::size_t cols) { return DistanceMatrix(rows, cols, 0); }

void add_feature_distance(DistanceMatrix& d, std::span<const Code> a, std::span<const Code> b, Distance distance) {
    require(a.size() == d.rows() && b.size() == d.cols(), ErrorCode::argument, "distance matrix shape mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto row = d.row(i);
        const std::int64_t x = a[i];
        if (distance == Distance::euclidean) {
            for (std::size_t j = 0; j < b.size(); ++j) {
                const std::int64_t diff = x - b[j];
                row[j] += diff * diff;
            }
        } else {
            for (std::size_t j = 0; j < b.size(); ++j) row[j] += (x != b[j]);
        }
    }
}

MLKNNModel fit_from_distances(const DistanceMatrix& train_train, const Matrix<std::uint8_t>& train_labels,
                              std::size_t k, double s) {
    const std::size_t m = train_labels.rows();
    const std::size_t nl = train_labels.cols();
    require(train_train.rows() == m && train_train.cols() == m, ErrorCode::argument,
            "distance matrix does not match the training labels");
    require(k >= 1, ErrorCode::argument, "k must be at least 1");
    require(k < m, ErrorCode::argument, "k must be smaller than the number of training rows");
    require(s >= 0.0, ErrorCode::argument, "smoothing must be non-negative");

    MLKNNModel model;
    model.k = k;
    model.s = s;
    model.train_labels = train_labels;
    model.priors.resize(nl);
    for (std::size_t l = 0; l < nl; ++l) {
        std::size_t count = 0;
        for (std::size_t i = 0; i < m; ++i) count += train_labels(i, l);
        model.priors[l] = (s + static_cast<double>(count)) / (2.0 * s + static_cast<double>(m));
    }

    Matrix<std::size_t> c1(nl, k + 1, 0);
    Matrix<std::size_t> c0(nl, k + 1, 0);
    for (std::size_t i = 0; i < m; ++i) {
        const auto nb = nearest_neighbors(train_train.row(i), k, i);
        for (std::size_t l = 0; l < nl; ++l) {
            const std::size_t c = positive_count(train_labels, nb, l);
            if (train_labels(i, l)) ++c1(l, c); else ++c0(l, c);
        }
    }

    model.cond1 = Matrix<double>(nl, k + 1);
    model.cond0 = Matrix<double>(nl, k + 1);
    const double denom_scale = s * static_cast<double>(k + 1);
    for (std::size_t l = 0; l < nl; ++l) {
        std::size_t t1 = 0, t0 = 0;
        for (std::size_t c = 0; c <= k; ++c) {
            t1 += c1(l, c);
            t0 += c0(l, c);
        }
        for (std::size_t c = 0; c <= k; ++c) {
            const double d1 = denom_scale + static_cast<double>(t1);
            const double d0 = denom_scale + static_cast<double>(t0);
            model.cond1(l, c) = d1 > 0.0 ? (s + static_cast<double>(c1(l, c))) / d1 : 0.0;
            model.cond0(l, c) = d0 > 0.0 ? (s + static_cast<double>(c0(l, c))) / d0 : 0.0;
        }
    }
    return model;
}

Prediction predict_from_distances(const MLKNNModel& model, const DistanceMatrix& test_train) {
    const std::size_t m = model.train_labels.rows();
    const std::size_t nl = model.train_labels.cols();
    require(test_train.cols() == m, ErrorCode::argument, "distance matrix does not match the model");

    Prediction out{Matrix<std::uint8_t>(test_train.rows(), nl), Matrix<double>(test_train.rows(), nl)};
    for (std::size_t i = 0; i < test_train.rows(); ++i) {
        const auto nb = nearest_neighbors(test_train.row(i), model.k);
        for (std::size_t l = 0; l < nl; ++l) {
            const std::size_t c = positive_count(model.train_labels, nb, l);
            const double p1 = model.priors[l] * model.cond1(l, c);
            const double p0 = (1.0 - model.priors[l]) * model.cond0(l, c);
            out.scores(i, l) = p1 + p0 > 0.0 ? p1 / (p1 + p0) : 0.0;
            out.predicted(i, l) = p1 > p0 ? 1 : 0;
        }
    }
    return out;
}

MLKNNModel fit(const MultiLabelDataset& train, std::span<const std::size_t> subset, std::size_t k, double s,
               Distance distance) {
    require(!subset.empty(), ErrorCode::argument, "empty feature subset");
    Matrix<Code> points = gather(train, subset);
    MLKNNModel model = fit_from_distances(distances(points, points, distance), train.label_matrix(), k, s);
    model.distance = distance;
    model.feature_subset.assign(subset.begin(), subset.end());
    model.train_points = std::move(points);
    return model;
}

Prediction predict(const MLKNNModel& model, const MultiLabelDataset& test, std::span<const std::size_t> subset) {
    require(std::equal(subset.begin(), subset.end(), model.feature_subset.begin(), model.feature_subset.end()),
            ErrorCode::argument, "feature subset differs from the fitted one");
    require(!model.train_points.empty(), ErrorCode::state, "model holds no training points");
    require(test.num_labels() == model.train_labels.cols(), ErrorCode::argument, "label count mismatch");
    const Matrix<Code> points = gather(test, subset);
    return predict_from_distances(model, distances(points, model.train_points, model.distance));
}

}  // namespace mlfs
