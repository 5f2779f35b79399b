#include "doctest.h"

#include <random>

#include "mlfs/error.hpp"
#include "mlfs/infotheory.hpp"
#include "support.hpp"

using namespace mlfs;
using testing::var;

namespace {

oracle::Column col(const Variable& v) { return {v.codes.begin(), v.codes.end()}; }

Variable random_var(std::mt19937_64& rng, std::size_t m, int arity) {
    std::uniform_int_distribution<int> code(0, arity - 1);
    std::vector<Code> c(m);
    for (auto& x : c) x = code(rng);
    return Variable(std::move(c), arity);
}

}  // namespace

TEST_CASE("entropy examples") {
    CHECK(entropy(var({0, 1, 0, 1})) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(entropy(var({2, 2, 2})) == 0.0);
    CHECK(entropy(var({0, 0, 0, 1})) == doctest::Approx(0.8112781244591328).epsilon(1e-12));
    CHECK_THROWS_AS(entropy(Variable({}, 1)), Error);
}

TEST_CASE("joint entropy examples") {
    const auto x = var({0, 1});
    CHECK(joint_entropy({x.view()}) == doctest::Approx(entropy(x)));
    CHECK(joint_entropy({x, var({0, 1})}) == doctest::Approx(1.0));
    CHECK(joint_entropy({var({0, 0, 1, 1}), var({0, 1, 0, 1})}) == doctest::Approx(2.0));
    CHECK_THROWS_AS(joint_entropy({var({0, 1}), var({0, 1, 1})}), Error);
}

TEST_CASE("conditional entropy examples") {
    const auto x = var({0, 0, 1, 1});
    CHECK(conditional_entropy(x, {x.view()}) == doctest::Approx(0.0));
    CHECK(conditional_entropy(x, {var({0, 1, 0, 1})}) == doctest::Approx(1.0));
    CHECK(conditional_entropy(var({0, 1, 1, 1}), {var({0, 0, 1, 1})}) == doctest::Approx(0.5));
}

TEST_CASE("mutual information examples") {
    CHECK(mutual_information(var({0, 0, 1, 1}), var({0, 1, 0, 1})) == doctest::Approx(0.0));
    const auto x = var({0, 1, 2, 2, 1});
    CHECK(mutual_information(x, x) == doctest::Approx(entropy(x)).epsilon(1e-12));
    CHECK(mutual_information(var({0, 0, 1, 1}), var({0, 1, 1, 1})) == doctest::Approx(0.3112781244591328));
}

TEST_CASE("conditional mutual information examples") {
    const auto x = var({0, 0, 1, 1, 0, 1});
    const auto y = var({1, 0, 1, 1, 0, 0});
    CHECK(conditional_mi(x, y, x) == doctest::Approx(0.0));
    CHECK(conditional_mi(x, y, var({0, 0, 0, 0, 0, 0})) == doctest::Approx(mutual_information(x, y)));
    CHECK(conditional_mi(var({0, 0, 1, 1}), var({0, 1, 0, 1}), var({0, 1, 1, 0})) == doctest::Approx(1.0));
}

TEST_CASE("interaction information examples") {
    const auto x = var({0, 0, 1, 1});
    const auto y = var({0, 1, 0, 1});
    const auto z = var({0, 1, 1, 0});
    CHECK(interaction_information({x, y}) == doctest::Approx(mutual_information(x, y)));
    CHECK(interaction_information({x, y, z}) == doctest::Approx(-1.0));
    CHECK(interaction_information({x, y, var({0, 0, 0, 0})}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(interaction_information({x.view()}), Error);
}

TEST_CASE("estimators agree with the brute-force oracle on random variables") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> len(1, 64);
    std::uniform_int_distribution<int> ar(1, 4);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = len(rng);
        const auto x = random_var(rng, m, ar(rng));
        const auto y = random_var(rng, m, ar(rng));
        const auto z = random_var(rng, m, ar(rng));
        const auto ox = col(x), oy = col(y), oz = col(z);
        CHECK(entropy(x) == doctest::Approx(oracle::H({ox})).epsilon(1e-12));
        CHECK(joint_entropy({x, y, z}) == doctest::Approx(oracle::H({ox, oy, oz})).epsilon(1e-12));
        CHECK(std::abs(mutual_information(x, y) - oracle::I(ox, oy)) < 1e-9);
        CHECK(std::abs(conditional_mi(x, y, z) - oracle::CI(ox, oy, oz)) < 1e-9);
        CHECK(std::abs(interaction_information({x, y, z}) - oracle::interaction({ox, oy, oz})) < 1e-9);
        const auto w = random_var(rng, m, ar(rng));
        CHECK(std::abs(interaction_information({x, y, z, w}) - oracle::interaction({ox, oy, oz, col(w)})) < 1e-9);
    }
}

TEST_CASE("joint variable compacts codes in first-occurrence order") {
    const auto j = joint_variable({var({1, 1, 0, 1}), var({2, 0, 2, 2})});
    CHECK(j.codes == std::vector<Code>{0, 1, 2, 0});
    CHECK(j.arity == 3);
}

TEST_CASE("large products go through the sparse path") {
    // arities whose product exceeds the dense table limit
    std::vector<Code> a(50), b(50);
    for (Code i = 0; i < 50; ++i) {
        a[i] = i * 40000;
        b[i] = (i * 7919) % 3000;
    }
    const Variable x(a, 2000000), y(b, 3000);
    CHECK(joint_entropy({x, y}) == doctest::Approx(std::log2(50.0)));
    CHECK(mutual_information(x, y) == doctest::Approx(entropy(y)));
}

TEST_CASE("codes outside the arity are rejected") {
    CHECK_THROWS_AS(entropy(Variable({0, 3}, 2)), Error);
    CHECK_THROWS_AS(mutual_information(Variable({0, 1}, 2), Variable({0, -1}, 2)), Error);
}

TEST_CASE("clamp_information") {
    CHECK(clamp_information(-1e-14, "x") == 0.0);
    CHECK(clamp_information(0.25, "x") == 0.25);
    try {
        clamp_information(-1e-6, "x");
        FAIL("expected an internal error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::internal);
    }
}

TEST_CASE("cache on duplicate columns and counting") {
    const std::vector<Code> c{0, 1, 2, 1, 0, 2};
    MultiLabelDataset ds("dup",
                         {FeatureColumn::categorical(c, 3), FeatureColumn::categorical(c, 3),
                          FeatureColumn::categorical({0, 0, 1, 1, 0, 1}, 2)},
                         {{0, 1, 1, 0, 0, 1}});
    const auto cache = build_cache(ds);
    CHECK(cache.feature_feature(0, 1) == doctest::Approx(cache.feature_entropy(0)));
    CHECK(cache.num_features() == 3);
    CHECK(cache.mi_evaluations() == 3 + 3);  // 3 feature-label, 3 pairs
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(cache.feature_feature(i, i) == doctest::Approx(cache.feature_entropy(i)));
        for (std::size_t j = 0; j < 3; ++j) CHECK(cache.feature_feature(i, j) == cache.feature_feature(j, i));
    }
}

TEST_CASE("cache on emotions is symmetric, finite and bounded") {
    const auto raw = load_arff(testing::data_dir() / "emotions-train.arff");
    const auto ds = discretize(raw, 5);
    const auto cache = build_cache(ds);
    REQUIRE(cache.num_features() == 72);
    for (std::size_t i = 0; i < 72; ++i) {
        for (std::size_t j = 0; j < 72; ++j) {
            const double v = cache.feature_feature(i, j);
            CHECK(std::isfinite(v));
            CHECK(v == cache.feature_feature(j, i));
            CHECK(v >= 0.0);
            CHECK(v <= std::min(cache.feature_entropy(i), cache.feature_entropy(j)) + 1e-9);
        }
        for (std::size_t k = 0; k < ds.num_labels(); ++k) {
            CHECK(cache.feature_label(i, k) <= std::min(cache.feature_entropy(i), cache.label_entropy(k)) + 1e-9);
        }
    }
}

TEST_CASE("cache refuses raw numeric columns and missing tables") {
    MultiLabelDataset raw("raw", {FeatureColumn::numeric({0.1, 0.2})}, {{0, 1}});
    CHECK_THROWS_AS(build_cache(raw), Error);
    MultiLabelDataset ds("d", {FeatureColumn::categorical({0, 1}, 2)}, {{0, 1}});
    const auto partial = build_cache(ds, {false, true});
    CHECK_FALSE(partial.has_feature_feature());
    CHECK_THROWS_AS(partial.feature_feature(0, 0), Error);
}
