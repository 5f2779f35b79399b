#include "mlfs/selectors.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cctype>
#include <cmath>

#include "mlfs/error.hpp"

namespace mlfs {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Scores this close to the best are treated as tied, so that round-off from
// summation order cannot reorder exact ties.
constexpr double kTieTolerance = 1e-10;

constexpr std::array<Method, 10> kMethods = {Method::atr,  Method::ppt_mi, Method::igmf,  Method::pmu,
                                             Method::d2f,  Method::mdmr,   Method::lrfs,  Method::lsmfs,
                                             Method::mlsmfs, Method::scls};

std::string normalize_name(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '-') c = '_';
        out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
    return out;
}

bool uses_label_pairs(Method m) {
    return m == Method::pmu || m == Method::lrfs || m == Method::lsmfs || m == Method::mlsmfs;
}

bool uses_feature_label_interaction(Method m) {
    return m == Method::pmu || m == Method::d2f || m == Method::mdmr;
}

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

const char* to_string(Method m) noexcept {
    switch (m) {
        case Method::atr: return "ATR";
        case Method::ppt_mi: return "PPT_MI";
        case Method::igmf: return "IGMF";
        case Method::pmu: return "PMU";
        case Method::d2f: return "D2F";
        case Method::mdmr: return "MDMR";
        case Method::lrfs: return "LRFS";
        case Method::lsmfs: return "LSMFS";
        case Method::mlsmfs: return "MLSMFS";
        case Method::scls: return "SCLS";
    }
    return "?";
}

Method parse_method(std::string_view name) {
    const std::string key = normalize_name(name);
    for (Method m : kMethods) {
        if (key == to_string(m)) return m;
    }
    fail(ErrorCode::config, "unknown method '" + std::string(name) + "'");
}

std::span<const Method> all_methods() noexcept { return kMethods; }

const char* to_string(AtrSignMode m) noexcept {
    return m == AtrSignMode::paper_literal ? "paper-literal" : "always-add";
}

AtrSignMode parse_atr_sign_mode(std::string_view name) {
    const std::string key = normalize_name(name);
    if (key == "PAPER_LITERAL") return AtrSignMode::paper_literal;
    if (key == "ALWAYS_ADD") return AtrSignMode::always_add;
    fail(ErrorCode::config, "unknown atr_sign_mode '" + std::string(name) + "'");
}

CacheParts cache_parts(Method m) noexcept {
    if (m == Method::ppt_mi || m == Method::igmf) return {false, false};
    return {true, true};
}

bool needs_ppt(Method m) noexcept { return m == Method::atr || m == Method::ppt_mi; }

SelectorContext::SelectorContext(const MultiLabelDataset& train, SelectorConfig config)
    : train_(&train), config_(config) {
    const auto t0 = Clock::now();
    require(train.is_discrete(), ErrorCode::state, "feature selection needs a discretized dataset");
    require(train.num_features() >= 1, ErrorCode::argument, "dataset has no features");
    require(train.num_labels() >= 1, ErrorCode::argument, "dataset has no labels");
    const std::size_t nf = train.num_features();
    const std::size_t nl = train.num_labels();

    cache_ = build_cache(train, cache_parts(config_.method));
    cache_seconds_ = seconds_since(t0);

    labels_.reserve(nl);
    for (std::size_t k = 0; k < nl; ++k) labels_.push_back(label_variable(train, k));

    if (needs_ppt(config_.method)) {
        try {
            ppt_ = ppt(train, config_.tau);
            ppt_all_rows_ = ppt_->retained_count() == train.num_instances();
            if (!ppt_all_rows_) ppt_rows_ = ppt_->retained_rows();
        } catch (const Error& e) {
            if (e.code() != ErrorCode::empty_after_pruning) throw;
            warnings_.push_back(std::string(e.what()) + "; PPT term set to 0");
        }
    }
    if (config_.method == Method::igmf) {
        std::vector<VariableView> views(labels_.begin(), labels_.end());
        label_joint_ = joint_variable(views);
        label_joint_entropy_ = entropy(label_joint_);
    }
    if (uses_label_pairs(config_.method)) {
        for (std::size_t i = 0; i < nl; ++i) {
            for (std::size_t j = i + 1; j < nl; ++j) {
                label_pairs_.push_back(joint_variable({labels_[i], labels_[j]}));
                label_pair_entropy_.push_back(entropy(label_pairs_.back()));
            }
        }
        pair_mi_ = Matrix<double>(nf, label_pairs_.size());
        pair_mi_ready_.assign(nf, false);
    }
    track_interaction_ = uses_feature_label_interaction(config_.method);

    in_s_.assign(nf, false);
    redundancy_.assign(nf, 0.0);
    interaction_.assign(nf, 0.0);
    ppt_mi_.assign(nf, nan());
    igmf_.assign(nf, nan());
    setup_seconds_ = seconds_since(t0);
}

double SelectorContext::joint_with(std::size_t f, VariableView v) const {
    const VariableView a = feature(f);
    const auto cells = static_cast<std::uint64_t>(a.arity) * static_cast<std::uint64_t>(v.arity);
    if (cells > (1u << 20)) return joint_entropy({a, v});
    scratch_.assign(static_cast<std::size_t>(cells), 0);
    const auto width = static_cast<std::size_t>(v.arity);
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++scratch_[static_cast<std::size_t>(a.codes[i]) * width + static_cast<std::size_t>(v.codes[i])];
    }
    return entropy_from_counts(scratch_, a.size());
}

void SelectorContext::select(std::size_t f) {
    require(f < in_s_.size(), ErrorCode::argument, "feature index out of range");
    require(!in_s_[f], ErrorCode::argument, "feature already selected");
    selected_.push_back(f);
    in_s_[f] = true;

    const std::size_t nf = in_s_.size();
    if (cache_.has_feature_feature()) {
        for (std::size_t c = 0; c < nf; ++c) {
            if (!in_s_[c]) redundancy_[c] += cache_.feature_feature(c, f);
        }
    }
    if (track_interaction_) {
        // I(c; f; l) = I(c; f) + I(c; l) - I(c; f, l)
        for (std::size_t k = 0; k < labels_.size(); ++k) {
            const Variable pair = joint_variable({feature(f), labels_[k]});
            const double h_pair = entropy(pair);
            for (std::size_t c = 0; c < nf; ++c) {
                if (in_s_[c]) continue;
                const double joint_mi =
                    clamp_information(cache_.feature_entropy(c) + h_pair - joint_with(c, pair), "I(f; s, l)");
                interaction_[c] += cache_.feature_feature(c, f) + cache_.feature_label(c, k) - joint_mi;
                ++extra_evaluations_;
            }
        }
    }
}

double SelectorContext::ppt_feature_mi(std::size_t f) const {
    double& slot = ppt_mi_.at(f);
    if (!std::isnan(slot)) return slot;
    if (!ppt_) {
        slot = 0.0;
        return slot;
    }
    const VariableView x = feature(f);
    if (ppt_all_rows_) {
        slot = mutual_information(x, ppt_->variable());
    } else {
        std::vector<Code> codes;
        codes.reserve(ppt_rows_.size());
        for (auto r : ppt_rows_) codes.push_back(x.codes[r]);
        slot = mutual_information(VariableView{codes, x.arity}, ppt_->variable());
    }
    ++extra_evaluations_;
    return slot;
}

double SelectorContext::relevance(std::size_t f) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < labels_.size(); ++k) sum += cache_.feature_label(f, k);
    return sum;
}

double SelectorContext::feature_label_interaction(std::size_t f) const {
    require(track_interaction_, ErrorCode::state, "interaction sums are not tracked for this method");
    return interaction_.at(f);
}

double SelectorContext::igmf(std::size_t f) const {
    require(config_.method == Method::igmf, ErrorCode::state, "label joint not prepared");
    double& slot = igmf_.at(f);
    if (!std::isnan(slot)) return slot;
    const double hf = cache_.feature_entropy(f);
    const double denom = hf + label_joint_entropy_;
    if (denom <= 0.0) {
        slot = 0.0;
    } else {
        const double gain = clamp_information(hf + label_joint_entropy_ - joint_with(f, label_joint_), "I(f; L)");
        slot = 2.0 * gain / denom;
        ++extra_evaluations_;
    }
    return slot;
}

std::size_t SelectorContext::pair_index(std::size_t i, std::size_t j) const {
    // row-major index into the strict upper triangle
    const std::size_t n = labels_.size();
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

void SelectorContext::ensure_label_pairs(std::size_t f) const {
    require(uses_label_pairs(config_.method), ErrorCode::state, "label pairs not prepared");
    if (pair_mi_ready_.at(f)) return;
    const double hf = cache_.feature_entropy(f);
    for (std::size_t p = 0; p < label_pairs_.size(); ++p) {
        pair_mi_(f, p) = clamp_information(hf + label_pair_entropy_[p] - joint_with(f, label_pairs_[p]), "I(f; li, lj)");
        ++extra_evaluations_;
    }
    pair_mi_ready_[f] = true;
}

double SelectorContext::pair_mi(std::size_t f, std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    ensure_label_pairs(f);
    return pair_mi_(f, pair_index(i, j));
}

double SelectorContext::label_pair_interaction(std::size_t f) const {
    const std::size_t nl = labels_.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < nl; ++i) {
        for (std::size_t j = i + 1; j < nl; ++j) {
            sum += cache_.feature_label(f, i) + cache_.feature_label(f, j) - pair_mi(f, i, j);
        }
    }
    return sum;
}

double SelectorContext::lrfs_relevance(std::size_t f) const {
    const std::size_t nl = labels_.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < nl; ++i) {
        for (std::size_t j = 0; j < nl; ++j) {
            if (i == j) continue;
            // I(f; lj | li) = I(f; li, lj) - I(f; li)
            sum += clamp_information(pair_mi(f, i, j) - cache_.feature_label(f, i), "I(f; lj | li)");
        }
    }
    return sum;
}

double SelectorContext::lsmfs_relevance(std::size_t f) const {
    const std::size_t nl = labels_.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < nl; ++i) {
        double term = cache_.feature_label(f, i);
        for (std::size_t j = 0; j < nl; ++j) {
            if (i == j) continue;
            const double inter = cache_.feature_label(f, i) + cache_.feature_label(f, j) - pair_mi(f, i, j);
            term += std::max(0.0, inter);
        }
        sum += term;
    }
    return sum;
}

double SelectorContext::mlsmfs_relevance(std::size_t f) const {
    const std::size_t nl = labels_.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < nl; ++i) {
        double best = 0.0;
        for (std::size_t j = 0; j < nl; ++j) {
            if (i == j) continue;
            // I(f; li | lj)
            best = std::max(best, pair_mi(f, i, j) - cache_.feature_label(f, j));
        }
        sum += cache_.feature_label(f, i) + best;
    }
    return sum;
}

double score_atr(std::size_t f, const SelectorContext& ctx) {
    const std::size_t nl = ctx.train().num_labels();
    double sign = 1.0;
    if (ctx.config().atr_sign_mode == AtrSignMode::paper_literal && nl % 2 == 0) sign = -1.0;
    return ctx.relevance(f) + sign * ctx.ppt_feature_mi(f) - ctx.redundancy(f);
}

double score_ppt_mi(std::size_t f, const SelectorContext& ctx) { return ctx.ppt_feature_mi(f); }

double score_igmf(std::size_t f, const SelectorContext& ctx) { return ctx.igmf(f); }

double score_pmu(std::size_t f, const SelectorContext& ctx) {
    return ctx.relevance(f) - ctx.feature_label_interaction(f) - ctx.label_pair_interaction(f);
}

double score_d2f(std::size_t f, const SelectorContext& ctx) {
    return ctx.relevance(f) - ctx.feature_label_interaction(f);
}

double score_mdmr(std::size_t f, const SelectorContext& ctx) {
    const auto s = ctx.selected().size();
    if (s == 0) return ctx.relevance(f);
    return static_cast<double>(s) * ctx.relevance(f) - ctx.feature_label_interaction(f);
}

double score_lrfs(std::size_t f, const SelectorContext& ctx) {
    const auto s = ctx.selected().size();
    const double penalty = s == 0 ? 0.0 : ctx.redundancy(f) / static_cast<double>(s);
    return ctx.lrfs_relevance(f) - penalty;
}

double score_lsmfs(std::size_t f, const SelectorContext& ctx) {
    return ctx.lsmfs_relevance(f) - ctx.redundancy(f);
}

double score_mlsmfs(std::size_t f, const SelectorContext& ctx) {
    return ctx.mlsmfs_relevance(f) - ctx.redundancy(f);
}

double score_scls(std::size_t f, const SelectorContext& ctx) {
    const double hf = ctx.cache().feature_entropy(f);
    if (hf <= 0.0) return 0.0;
    const double rel = ctx.relevance(f);
    return rel - ctx.redundancy(f) / hf * rel;
}

double score(std::size_t f, const SelectorContext& ctx) {
    switch (ctx.config().method) {
        case Method::atr: return score_atr(f, ctx);
        case Method::ppt_mi: return score_ppt_mi(f, ctx);
        case Method::igmf: return score_igmf(f, ctx);
        case Method::pmu: return score_pmu(f, ctx);
        case Method::d2f: return score_d2f(f, ctx);
        case Method::mdmr: return score_mdmr(f, ctx);
        case Method::lrfs: return score_lrfs(f, ctx);
        case Method::lsmfs: return score_lsmfs(f, ctx);
        case Method::mlsmfs: return score_mlsmfs(f, ctx);
        case Method::scls: return score_scls(f, ctx);
    }
    fail(ErrorCode::internal, "unhandled method");
}

RankingResult greedy_rank(SelectorContext& ctx) {
    const auto t0 = Clock::now();
    const auto& cfg = ctx.config();
    require(cfg.n_select >= 1, ErrorCode::argument, "n_select must be positive");
    require(cfg.time_budget_seconds > 0.0, ErrorCode::argument, "time budget must be positive");

    RankingResult result;
    result.method = cfg.method;
    result.cache_seconds = ctx.cache_seconds();
    const std::size_t nf = ctx.train().num_features();
    const std::size_t n = std::min(cfg.n_select, nf);
    auto elapsed = [&] { return ctx.setup_seconds() + seconds_since(t0); };

    std::vector<double> scores(nf);
    for (std::size_t step = 0; step < n; ++step) {
        if (elapsed() > cfg.time_budget_seconds) {
            result.status = RankStatus::timeout;
            result.order.clear();
            result.scores.clear();
            break;
        }
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t f = 0; f < nf; ++f) {
            if (ctx.is_selected(f)) continue;
            scores[f] = score(f, ctx);
            best = std::max(best, scores[f]);
        }
        std::size_t pick = nf;
        for (std::size_t f = 0; f < nf; ++f) {
            if (!ctx.is_selected(f) && scores[f] >= best - kTieTolerance) {
                pick = f;
                break;
            }
        }
        require(pick < nf, ErrorCode::internal, "no candidate could be scored");
        result.order.push_back(pick);
        result.scores.push_back(scores[pick]);
        ctx.select(pick);
    }
    result.elapsed = elapsed();
    result.warnings = ctx.warnings();
    result.mi_evaluations = ctx.mi_evaluations();
    return result;
}

RankingResult rank_features(const MultiLabelDataset& train, const SelectorConfig& config) {
    SelectorContext ctx(train, config);
    return greedy_rank(ctx);
}

}  // namespace mlfs
