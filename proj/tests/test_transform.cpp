#include "doctest.h"

#include <map>

#include "mlfs/error.hpp"
#include "mlfs/transform.hpp"
#include "support.hpp"

using namespace mlfs;

namespace {

Matrix<std::uint8_t> rows(const std::vector<std::vector<std::uint8_t>>& r) {
    Matrix<std::uint8_t> m(r.size(), r.front().size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        for (std::size_t j = 0; j < r[i].size(); ++j) m(i, j) = r[i][j];
    }
    return m;
}

// rows with subset frequencies A:5, B:7, C:1, interleaved
Matrix<std::uint8_t> abc() {
    const std::vector<std::uint8_t> a{1, 0, 0}, b{0, 1, 0}, c{0, 0, 1};
    std::vector<std::vector<std::uint8_t>> r;
    for (int i = 0; i < 7; ++i) {
        r.push_back(b);
        if (i < 5) r.push_back(a);
    }
    r.push_back(c);
    return rows(r);
}

}  // namespace

TEST_CASE("label powerset examples") {
    CHECK(label_powerset(rows({{1, 0}, {1, 0}, {0, 1}})).codes == std::vector<Code>{0, 0, 1});
    const auto same = label_powerset(rows({{1, 1}, {1, 1}, {1, 1}}));
    CHECK(same.codes == std::vector<Code>{0, 0, 0});
    CHECK(same.arity() == 1);
    CHECK(label_powerset(rows({{0, 0}, {0, 1}, {1, 0}, {1, 1}})).codes == std::vector<Code>{0, 1, 2, 3});
}

TEST_CASE("ppt keeps only combinations seen at least tau times") {
    const auto labels = abc();
    const auto p = ppt(labels, 6);
    CHECK(p.retained_count() == 7);
    CHECK(p.arity() == 1);
    for (auto r : p.retained_rows()) CHECK(labels(r, 1) == 1);
    CHECK(ppt(labels, 0).retained_count() == labels.rows());
    CHECK(ppt(labels, 1).retained_count() == labels.rows());
}

TEST_CASE("ppt reports an empty result") {
    try {
        ppt(abc(), 100);
        FAIL("expected empty_after_pruning");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::empty_after_pruning);
    }
}

TEST_CASE("ppt and label powerset induce the same partition") {
    const auto labels = abc();
    const auto a = ppt(labels, 0);
    const auto b = label_powerset(labels);
    CHECK(a.codes == b.codes);
    CHECK(a.retained == b.retained);
}

TEST_CASE("pruning is monotone in tau") {
    const auto labels = abc();
    // the largest combination count is 7
    for (std::size_t tau = 0; tau < 7; ++tau) {
        const auto lo = ppt(labels, tau);
        const auto hi = ppt(labels, tau + 1);
        for (std::size_t i = 0; i < labels.rows(); ++i) {
            if (hi.retained[i]) CHECK(lo.retained[i]);
        }
    }
}

TEST_CASE("ppt on emotions training labels matches a direct frequency count") {
    const auto ds = load_arff(testing::data_dir() / "emotions-train.arff");
    const auto labels = ds.label_matrix();
    std::map<std::vector<std::uint8_t>, std::size_t> freq;
    for (std::size_t i = 0; i < labels.rows(); ++i) {
        const auto r = labels.row(i);
        ++freq[std::vector<std::uint8_t>(r.begin(), r.end())];
    }
    std::size_t kept = 0, kept_combos = 0;
    for (const auto& [combo, n] : freq) {
        if (n >= 6) {
            kept += n;
            ++kept_combos;
        }
    }
    const auto p = ppt(ds, 6);
    const auto lp = label_powerset(ds);
    CHECK(p.retained_count() == kept);
    CHECK(p.retained_count() < labels.rows());
    CHECK(static_cast<std::size_t>(p.arity()) == kept_combos);
    CHECK(p.arity() < lp.arity());
    CHECK(static_cast<std::size_t>(lp.arity()) == freq.size());
}

TEST_CASE("labels beyond 64 columns are distinguished") {
    Matrix<std::uint8_t> m(2, 130, 0);
    m(1, 129) = 1;
    CHECK(label_powerset(m).arity() == 2);
}
