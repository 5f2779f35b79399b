#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlfs/dataset.hpp"
#include "mlfs/infotheory.hpp"
#include "mlfs/transform.hpp"

namespace mlfs {

enum class Method { atr, ppt_mi, igmf, pmu, d2f, mdmr, lrfs, lsmfs, mlsmfs, scls };

const char* to_string(Method m) noexcept;
// Case-insensitive; '-' and '_' are interchangeable ("ppt-mi", "PPT_MI").
Method parse_method(std::string_view name);
std::span<const Method> all_methods() noexcept;

enum class AtrSignMode { paper_literal, always_add };

const char* to_string(AtrSignMode m) noexcept;
AtrSignMode parse_atr_sign_mode(std::string_view name);

enum class TieBreak { lowest_index };

struct SelectorConfig {
    Method method = Method::atr;
    std::size_t tau = 6;
    std::size_t n_select = 50;
    AtrSignMode atr_sign_mode = AtrSignMode::paper_literal;
    TieBreak tie_break = TieBreak::lowest_index;
    double time_budget_seconds = std::numeric_limits<double>::infinity();
};

// Which precomputed tables a method reads.
CacheParts cache_parts(Method m) noexcept;
bool needs_ppt(Method m) noexcept;

// Greedy state for one ranking run over a discretized training set. The
// dataset must outlive the context. Score functions only read the cache, the
// PPT label, the selected set and the candidate column; S-independent terms
// are memoized per candidate and the sums over S are kept incrementally.
class SelectorContext {
public:
    SelectorContext(const MultiLabelDataset& train, SelectorConfig config);

    const MultiLabelDataset& train() const noexcept { return *train_; }
    const SelectorConfig& config() const noexcept { return config_; }
    const MICache& cache() const noexcept { return cache_; }
    const std::optional<PowersetLabel>& ppt_label() const noexcept { return ppt_; }

    std::span<const std::size_t> selected() const noexcept { return selected_; }
    bool is_selected(std::size_t f) const { return in_s_.at(f); }
    void select(std::size_t f);

    // I(f; PPT(L, tau)) over the retained rows; 0 when pruning left nothing.
    double ppt_feature_mi(std::size_t f) const;

    // Sum of I(f; l) over all labels.
    double relevance(std::size_t f) const;
    // Sum over S of I(f; s).
    double redundancy(std::size_t f) const { return redundancy_.at(f); }
    // Sum over S and labels of I(f; s; l).
    double feature_label_interaction(std::size_t f) const;

    // S-independent parts of the baseline scores.
    double igmf(std::size_t f) const;
    double label_pair_interaction(std::size_t f) const;   // sum_{i<j} I(f; li; lj)
    double lrfs_relevance(std::size_t f) const;           // sum_{i!=j} I(f; lj | li)
    double lsmfs_relevance(std::size_t f) const;
    double mlsmfs_relevance(std::size_t f) const;

    // Estimator calls made so far: cache tables plus everything computed
    // during scoring.
    std::size_t mi_evaluations() const noexcept { return cache_.mi_evaluations() + extra_evaluations_; }
    double setup_seconds() const noexcept { return setup_seconds_; }
    double cache_seconds() const noexcept { return cache_seconds_; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

private:
    VariableView feature(std::size_t f) const { return feature_variable(*train_, f); }
    // H(f, v) counted densely into scratch_.
    double joint_with(std::size_t f, VariableView v) const;
    // I(f; li, lj) for every label pair i < j.
    void ensure_label_pairs(std::size_t f) const;
    double pair_mi(std::size_t f, std::size_t i, std::size_t j) const;
    std::size_t pair_index(std::size_t i, std::size_t j) const;

    const MultiLabelDataset* train_;
    SelectorConfig config_;
    MICache cache_;
    std::optional<PowersetLabel> ppt_;
    std::vector<std::size_t> ppt_rows_;
    bool ppt_all_rows_ = false;

    std::vector<Variable> labels_;
    Variable label_joint_;
    double label_joint_entropy_ = 0.0;
    std::vector<Variable> label_pairs_;  // li x lj for i < j
    std::vector<double> label_pair_entropy_;

    std::vector<std::size_t> selected_;
    std::vector<bool> in_s_;
    std::vector<double> redundancy_;
    std::vector<double> interaction_;
    bool track_interaction_ = false;

    // Lazily filled, NaN = not yet computed.
    mutable std::vector<double> ppt_mi_;
    mutable std::vector<double> igmf_;
    mutable Matrix<double> pair_mi_;  // candidate x label pair
    mutable std::vector<bool> pair_mi_ready_;
    mutable std::vector<std::size_t> scratch_;
    mutable std::size_t extra_evaluations_ = 0;

    double setup_seconds_ = 0.0;
    double cache_seconds_ = 0.0;
    std::vector<std::string> warnings_;
};

double score_atr(std::size_t f, const SelectorContext& ctx);
double score_ppt_mi(std::size_t f, const SelectorContext& ctx);
double score_igmf(std::size_t f, const SelectorContext& ctx);
double score_pmu(std::size_t f, const SelectorContext& ctx);
double score_d2f(std::size_t f, const SelectorContext& ctx);
double score_mdmr(std::size_t f, const SelectorContext& ctx);
double score_lrfs(std::size_t f, const SelectorContext& ctx);
double score_lsmfs(std::size_t f, const SelectorContext& ctx);
double score_mlsmfs(std::size_t f, const SelectorContext& ctx);
double score_scls(std::size_t f, const SelectorContext& ctx);

// Dispatches on ctx.config().method.
double score(std::size_t f, const SelectorContext& ctx);

enum class RankStatus { ok, timeout };

struct RankingResult {
    std::vector<std::size_t> order;
    std::vector<double> scores;
    double elapsed = 0.0;        // setup (cache, PPT) plus the greedy loop
    double cache_seconds = 0.0;  // share of elapsed spent building tables
    Method method = Method::atr;
    RankStatus status = RankStatus::ok;
    std::vector<std::string> warnings;
    std::size_t mi_evaluations = 0;
};

// Runs min(n_select, |F|) greedy iterations. On timeout the partial ranking is
// dropped and status is set to timeout.
RankingResult greedy_rank(SelectorContext& ctx);

// Builds a context on `train` and ranks.
RankingResult rank_features(const MultiLabelDataset& train, const SelectorConfig& config);

}  // namespace mlfs
