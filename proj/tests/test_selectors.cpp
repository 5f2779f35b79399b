#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <random>

#include "mlfs/error.hpp"
#include "mlfs/selectors.hpp"
#include "support.hpp"

using namespace mlfs;
using oracle::Column;
using oracle::Instance;

namespace {

SelectorConfig config(Method m, std::size_t tau = 0, AtrSignMode sign = AtrSignMode::paper_literal) {
    SelectorConfig c;
    c.method = m;
    c.tau = tau;
    c.atr_sign_mode = sign;
    return c;
}

double oracle_score(Method m, const Instance& d, std::size_t f, const std::vector<std::size_t>& s, std::size_t tau,
                    AtrSignMode sign) {
    switch (m) {
        case Method::atr: return oracle::atr(d, f, s, tau, sign == AtrSignMode::always_add);
        case Method::ppt_mi: return oracle::ppt_mi(d, f, tau);
        case Method::igmf: return oracle::igmf(d, f);
        case Method::pmu: return oracle::pmu(d, f, s);
        case Method::d2f: return oracle::d2f(d, f, s);
        case Method::mdmr: return oracle::mdmr(d, f, s);
        case Method::lrfs: return oracle::lrfs(d, f, s);
        case Method::lsmfs: return oracle::lsmfs(d, f, s);
        case Method::mlsmfs: return oracle::mlsmfs(d, f, s);
        case Method::scls: return oracle::scls(d, f, s);
    }
    return 0.0;
}

double score_with(Method m, const Instance& d, std::size_t f, const std::vector<std::size_t>& s = {},
                  std::size_t tau = 0, AtrSignMode sign = AtrSignMode::paper_literal) {
    const auto ds = testing::to_dataset(d);
    SelectorContext ctx(ds, config(m, tau, sign));
    for (auto j : s) ctx.select(j);
    return score(f, ctx);
}

// 8 rows, l1 and l2 independent fair bits
const Column kL1{0, 1, 0, 1, 0, 1, 0, 1};
const Column kL2{0, 0, 1, 1, 0, 0, 1, 1};
const Column kL3{0, 0, 0, 0, 1, 1, 1, 1};
const Column kConst(8, 0);

// XOR triple over 4 rows: f, l1, l2 = f xor l1
Instance xor_instance() { return {{{0, 0, 1, 1}}, {{0, 1, 0, 1}, {0, 1, 1, 0}}}; }

}  // namespace

TEST_CASE("method names") {
    for (Method m : all_methods()) CHECK(parse_method(to_string(m)) == m);
    CHECK(parse_method("ppt-mi") == Method::ppt_mi);
    CHECK_THROWS_AS(parse_method("mrmr"), Error);
    CHECK(parse_atr_sign_mode("always-add") == AtrSignMode::always_add);
}

TEST_CASE("single feature ranks first for every method") {
    const Instance d{{{0, 1, 1, 0, 1, 0}}, {{0, 1, 1, 0, 0, 0}, {1, 1, 0, 0, 1, 0}}};
    const auto ds = testing::to_dataset(d);
    for (Method m : all_methods()) {
        auto c = config(m);
        c.n_select = 5;
        const auto r = rank_features(ds, c);
        CHECK(r.order == std::vector<std::size_t>{0});
        CHECK(r.scores.size() == 1);
    }
}

TEST_CASE("a feature duplicating a label is picked first") {
    for (const auto& labels : {std::vector<Column>{kL1}, std::vector<Column>{kL1, kL2, kL3}}) {
        const Instance d{{kConst, kConst, kConst, kL1}, labels};
        const auto ds = testing::to_dataset(d);
        for (Method m : all_methods()) {
            // LRFS sums over distinct label pairs, so one label gives nothing
            if (m == Method::lrfs && labels.size() == 1) continue;
            const std::string method_name = to_string(m);
            CAPTURE(method_name);
            // brute force: the duplicate strictly beats every constant
            for (std::size_t f = 0; f < 3; ++f) {
                CHECK(oracle_score(m, d, f, {}, 0, AtrSignMode::paper_literal) <
                      oracle_score(m, d, 3, {}, 0, AtrSignMode::paper_literal));
            }
            auto c = config(m);
            c.n_select = 1;
            CHECK(rank_features(ds, c).order.front() == 3);
        }
    }
}

TEST_CASE("redundancy-aware methods skip a duplicate feature") {
    const Instance d{{kL1, kL1, kL2}, {kL1, kL2}};
    const auto ds = testing::to_dataset(d);
    for (Method m : {Method::atr, Method::scls, Method::lrfs, Method::lsmfs, Method::mlsmfs, Method::d2f,
                     Method::pmu, Method::mdmr}) {
        const std::string method_name = to_string(m);
        CAPTURE(method_name);
        CHECK(oracle_score(m, d, 2, {0}, 0, AtrSignMode::paper_literal) >
              oracle_score(m, d, 1, {0}, 0, AtrSignMode::paper_literal));
        auto c = config(m);
        c.n_select = 2;
        const auto r = rank_features(ds, c);
        REQUIRE(r.order.size() == 2);
        CHECK(r.order[0] == 0);
        CHECK(r.order[1] == 2);
    }
}

TEST_CASE("ATR examples") {
    const Column indep{0, 0, 0, 0, 1, 1, 1, 1};
    CHECK(score_with(Method::atr, {{indep}, {kL1, kL2}}, 0) == doctest::Approx(0.0));
    // one label: the PPT class is the label itself
    const Instance one{{{0, 1, 1, 1, 0, 1, 0, 0}}, {kL1}};
    const double i = oracle::I(one.features[0], kL1);
    CHECK(score_with(Method::atr, one, 0) == doctest::Approx(2.0 * i));
    // f = l1 with an independent second label
    const Instance two{{kL1}, {kL1, kL2}};
    CHECK(score_with(Method::atr, two, 0, {}, 0, AtrSignMode::paper_literal) == doctest::Approx(0.0));
    CHECK(score_with(Method::atr, two, 0, {}, 0, AtrSignMode::always_add) == doctest::Approx(2.0));
}

TEST_CASE("PPT-MI examples") {
    CHECK(score_with(Method::ppt_mi, {{kConst}, {kL1, kL2}}, 0) == doctest::Approx(0.0));
    // feature equal to the LP code of (l1, l2)
    Column code(8);
    for (int r = 0; r < 8; ++r) code[r] = kL1[r] + 2 * kL2[r];
    CHECK(score_with(Method::ppt_mi, {{code}, {kL1, kL2}}, 0) == doctest::Approx(oracle::H({code})));
    CHECK(score_with(Method::ppt_mi, {{kL1}, {kL1, kL2}}, 0) == doctest::Approx(1.0));
}

TEST_CASE("IGMF examples") {
    CHECK(score_with(Method::igmf, {{kConst}, {kL1, kL2}}, 0) == doctest::Approx(0.0));
    CHECK(score_with(Method::igmf, {{kL1}, {kL1}}, 0) == doctest::Approx(1.0));
    CHECK(score_with(Method::igmf, {{kL2}, {kL1}}, 0) == doctest::Approx(0.0));
    // everything constant: 0 by convention
    CHECK(score_with(Method::igmf, {{kConst}, {Column(8, 1)}}, 0) == 0.0);
}

TEST_CASE("PMU and D2F examples") {
    const Instance one{{{0, 1, 1, 1, 0, 1, 0, 0}}, {kL1}};
    CHECK(score_with(Method::pmu, one, 0) == doctest::Approx(oracle::I(one.features[0], kL1)));
    CHECK(score_with(Method::pmu, {{kL3}, {kL1, kL2}}, 0) == doctest::Approx(0.0));
    CHECK(score_with(Method::d2f, {{kL1, kL2}, {kL1, kL2}}, 0) == doctest::Approx(1.0));
    CHECK(score_with(Method::d2f, {{kConst}, {kL1}}, 0) == doctest::Approx(0.0));
    // the selected feature is a copy of f and I(f; l) = 1
    CHECK(score_with(Method::d2f, {{kL1, kL1}, {kL1}}, 1, {0}) == doctest::Approx(0.0));
    // PMU on a random-ish triple against the entropy sums
    const Instance tri{{{0, 1, 1, 0, 1, 1, 0, 0}}, {{0, 1, 1, 1, 0, 1, 0, 0}, {1, 1, 0, 1, 0, 1, 1, 0}}};
    CHECK(score_with(Method::pmu, tri, 0) == doctest::Approx(oracle::pmu(tri, 0, {})).epsilon(1e-12));
}

TEST_CASE("MDMR examples") {
    CHECK(score_with(Method::mdmr, {{kL1}, {kL1, kL2}}, 0) == doctest::Approx(1.0));
    CHECK(score_with(Method::mdmr, {{kConst, kL1}, {kL1}}, 0, {1}) == doctest::Approx(0.0));
    // |S| = 1, |L| = 1: I(f; l) - I(f; l; s) by hand
    const Column f{0, 1, 1, 0, 1, 0, 0, 1};
    const Column s{0, 1, 0, 0, 1, 1, 0, 1};
    const Column l{0, 1, 1, 0, 1, 1, 0, 0};
    const double hand = oracle::I(f, l) -
                        (oracle::H({f}) + oracle::H({l}) + oracle::H({s}) - oracle::H({f, l}) - oracle::H({f, s}) -
                         oracle::H({l, s}) + oracle::H({f, l, s}));
    CHECK(score_with(Method::mdmr, {{f, s}, {l}}, 0, {1}) == doctest::Approx(hand).epsilon(1e-12));
}

TEST_CASE("LRFS examples") {
    const Instance one{{{0, 1, 1, 1, 0, 1, 0, 0}}, {kL1}};
    CHECK(score_with(Method::lrfs, one, 0) == doctest::Approx(0.0));
    CHECK(score_with(Method::lrfs, {{kL3}, {kL1, kL2}}, 0) == doctest::Approx(0.0));
    CHECK(score_with(Method::lrfs, {{kL2}, {kL1, kL2}}, 0) == doctest::Approx(1.0));
}

TEST_CASE("LSMFS and MLSMFS examples") {
    const Instance one{{{0, 1, 1, 1, 0, 1, 0, 0}}, {kL1}};
    const double i = oracle::I(one.features[0], kL1);
    CHECK(score_with(Method::lsmfs, one, 0) == doctest::Approx(i));
    CHECK(score_with(Method::mlsmfs, one, 0) == doctest::Approx(i));
    CHECK(score_with(Method::lsmfs, {{kConst}, {kL1, kL2}}, 0) == doctest::Approx(0.0));
    CHECK(score_with(Method::mlsmfs, {{kConst}, {kL1, kL2}}, 0) == doctest::Approx(0.0));
    CHECK(score_with(Method::lsmfs, xor_instance(), 0) == doctest::Approx(0.0));
    CHECK(score_with(Method::mlsmfs, xor_instance(), 0) == doctest::Approx(2.0));
}

TEST_CASE("SCLS examples") {
    const Instance d{{kL1, kL1}, {kL1, {0, 1, 0, 1, 0, 0, 0, 1}}};
    const double r = oracle::rel(d, 0);
    CHECK(score_with(Method::scls, d, 0) == doctest::Approx(r));
    CHECK(score_with(Method::scls, {{kConst}, {kL1}}, 0) == 0.0);
    CHECK(score_with(Method::scls, d, 1, {0}) == doctest::Approx(0.0));
}

TEST_CASE("every score matches the brute-force oracle on random instances") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> rows(4, 16), nf(1, 4), nl(1, 3);
    std::uniform_int_distribution<int> arity(1, 3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto d = oracle::random_instance(rng, rows(rng), nf(rng), nl(rng), arity(rng) + 1);
        const auto ds = testing::to_dataset(d);
        const std::size_t n = d.features.size();
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        const std::size_t s_size = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
        const std::vector<std::size_t> s(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(s_size));
        for (std::size_t tau : {std::size_t{0}, std::size_t{2}}) {
            for (auto sign : {AtrSignMode::paper_literal, AtrSignMode::always_add}) {
                for (Method m : all_methods()) {
                    SelectorContext ctx(ds, config(m, tau, sign));
                    for (auto j : s) ctx.select(j);
                    for (std::size_t f = 0; f < n; ++f) {
                        if (ctx.is_selected(f)) continue;
                        CAPTURE(trial);
                        const std::string method_name = to_string(m);
            CAPTURE(method_name);
                        CHECK(std::abs(score(f, ctx) - oracle_score(m, d, f, s, tau, sign)) < 1e-9);
                    }
                }
            }
        }
    }
}

TEST_CASE("scores and order are invariant to relabeling codes") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        auto d = oracle::random_instance(rng, 24, 5, 3, 4);
        auto relabeled = d;
        for (auto& c : relabeled.features) {
            std::vector<int> map{0, 1, 2, 3};
            std::shuffle(map.begin(), map.end(), rng);
            for (auto& v : c) v = map[v];
        }
        const auto a = testing::to_dataset(d);
        const auto b = testing::to_dataset(relabeled);
        for (Method m : all_methods()) {
            auto c = config(m, 2);
            c.n_select = 5;
            const auto ra = rank_features(a, c);
            const auto rb = rank_features(b, c);
            CHECK(ra.order == rb.order);
            for (std::size_t i = 0; i < ra.scores.size(); ++i) CHECK(std::abs(ra.scores[i] - rb.scores[i]) < 1e-9);
        }
    }
}

TEST_CASE("incremental state matches a fresh recomputation") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const auto d = oracle::random_instance(rng, 16, 4, 3, 3);
        const auto ds = testing::to_dataset(d);
        for (Method m : all_methods()) {
            auto c = config(m, 2);
            c.n_select = 4;
            const auto r = rank_features(ds, c);
            // replay each step from scratch with the oracle
            std::vector<std::size_t> s;
            for (std::size_t step = 0; step < r.order.size(); ++step) {
                CHECK(std::abs(r.scores[step] - oracle_score(m, d, r.order[step], s, 2, c.atr_sign_mode)) < 1e-9);
                s.push_back(r.order[step]);
            }
        }
    }
}

TEST_CASE("ranking is deterministic") {
    const auto ds = discretize(load_arff(testing::data_dir() / "emotions-train.arff"), 5);
    for (Method m : all_methods()) {
        auto c = config(m, 6);
        c.n_select = 10;
        const auto a = rank_features(ds, c);
        const auto b = rank_features(ds, c);
        CHECK(a.order == b.order);
        CHECK(a.scores == b.scores);
    }
}

TEST_CASE("ATR and SCLS stay within the pairwise evaluation budget") {
    const auto ds = discretize(load_arff(testing::data_dir() / "emotions-train.arff"), 5);
    const std::size_t f = ds.num_features(), l = ds.num_labels();
    for (Method m : {Method::atr, Method::scls}) {
        auto c = config(m, 6);
        c.n_select = f;
        const auto r = rank_features(ds, c);
        CHECK(r.order.size() == f);
        CHECK(r.mi_evaluations <= f * f + (l + 1) * f);
    }
    // D2F pays per selected feature and label
    auto c = config(Method::d2f, 6);
    c.n_select = 10;
    const auto small = rank_features(ds, c);
    c.n_select = 20;
    const auto large = rank_features(ds, c);
    CHECK(large.mi_evaluations > small.mi_evaluations);
}

TEST_CASE("relevance-only methods agree on the first pick") {
    std::mt19937_64 rng(9);
    int checked = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto d = oracle::random_instance(rng, 16, 4, 1, 3);
        std::vector<double> rel;
        for (std::size_t f = 0; f < d.features.size(); ++f) rel.push_back(oracle::rel(d, f));
        const auto best = std::max_element(rel.begin(), rel.end());
        if (std::count_if(rel.begin(), rel.end(), [&](double v) { return std::abs(v - *best) < 1e-9; }) != 1) continue;
        const auto expected = static_cast<std::size_t>(best - rel.begin());
        const auto ds = testing::to_dataset(d);
        for (Method m : {Method::atr, Method::d2f, Method::pmu, Method::scls, Method::mdmr}) {
            auto c = config(m, 0, AtrSignMode::always_add);
            c.n_select = 1;
            CHECK(rank_features(ds, c).order.front() == expected);
        }
        ++checked;
    }
    CHECK(checked > 10);
}

TEST_CASE("empty PPT falls back with a warning") {
    const Instance d{{kL1, kL2}, {kL1, kL2}};
    const auto ds = testing::to_dataset(d);
    SelectorContext ctx(ds, config(Method::atr, 100));
    CHECK_FALSE(ctx.ppt_label().has_value());
    CHECK(ctx.warnings().size() == 1);
    CHECK(score(0, ctx) == doctest::Approx(oracle::rel(d, 0)));
    auto c = config(Method::ppt_mi, 100);
    const auto r = rank_features(ds, c);
    CHECK(r.warnings.size() == 1);
    CHECK(r.order.size() == 2);
}

TEST_CASE("argument checks, clamping and timeout") {
    const Instance d{{kL1, kL2, kL3}, {kL1}};
    const auto ds = testing::to_dataset(d);
    auto c = config(Method::scls);
    c.n_select = 0;
    CHECK_THROWS_AS(rank_features(ds, c), Error);
    c.n_select = 10;
    CHECK(rank_features(ds, c).order.size() == 3);
    c.time_budget_seconds = 1e-12;
    const auto r = rank_features(ds, c);
    CHECK(r.status == RankStatus::timeout);
    CHECK(r.order.empty());

    SelectorContext ctx(ds, config(Method::scls));
    ctx.select(1);
    CHECK_THROWS_AS(ctx.select(1), Error);
    CHECK_THROWS_AS(ctx.select(9), Error);

    MultiLabelDataset raw("raw", {FeatureColumn::numeric({1.0, 2.0})}, {{0, 1}});
    CHECK_THROWS_AS(SelectorContext(raw, config(Method::atr)), Error);
}
