#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "mlfs/dataset.hpp"
#include "mlfs/matrix.hpp"

namespace mlfs {

// Non-owning categorical variable: M codes, each in [0, arity).
struct VariableView {
    std::span<const Code> codes;
    Code arity = 0;

    std::size_t size() const noexcept { return codes.size(); }
};

// Owning categorical variable.
struct Variable {
    std::vector<Code> codes;
    Code arity = 0;

    Variable() = default;
    Variable(std::vector<Code> c, Code a) : codes(std::move(c)), arity(a) {}

    // Arity is max(code) + 1; codes must be non-negative.
    static Variable from_codes(std::vector<Code> codes);
    static Variable from_bits(std::span<const std::uint8_t> bits);

    VariableView view() const noexcept { return {codes, arity}; }
    operator VariableView() const noexcept { return view(); }
    std::size_t size() const noexcept { return codes.size(); }
};

// All estimators are plug-in (empirical frequency) estimates in bits.
// 0 log 0 is taken as 0.

double entropy(VariableView x);
double joint_entropy(std::span<const VariableView> vars);
double joint_entropy(std::initializer_list<VariableView> vars);
double conditional_entropy(VariableView x, std::span<const VariableView> given);
double conditional_entropy(VariableView x, std::initializer_list<VariableView> given);
double mutual_information(VariableView x, VariableView y);
double conditional_mi(VariableView x, VariableView y, VariableView given);

// McGill convention: the two-variable case is mutual information and
// I(X1..Xn) = I(X1..Xn-1) - I(X1..Xn-1 | Xn), the conditional term being the
// stratum-weighted average over the values of Xn. XOR triples give -1 bit.
double interaction_information(std::span<const VariableView> vars);
double interaction_information(std::initializer_list<VariableView> vars);

// Product variable of the inputs, with codes compacted to 0..k-1 in order of
// first appearance.
Variable joint_variable(std::span<const VariableView> vars);
Variable joint_variable(std::initializer_list<VariableView> vars);

// Entropy of a histogram with the given total.
double entropy_from_counts(std::span<const std::size_t> counts, std::size_t total);

// Clamps tiny negative round-off to zero; anything below -1e-12 is a bug.
double clamp_information(double value, const char* what);

struct CacheParts {
    bool feature_feature = true;
    bool feature_label = true;
};

// Precomputed entropies and pairwise mutual information of a discretized
// dataset. Immutable once built.
class MICache {
public:
    MICache() = default;

    std::size_t num_features() const noexcept { return feature_entropy_.size(); }
    std::size_t num_labels() const noexcept { return label_entropy_.size(); }

    bool has_feature_feature() const noexcept { return !feature_feature_.empty(); }
    bool has_feature_label() const noexcept { return !feature_label_.empty(); }

    // I(f_i; f_j); the diagonal holds H(f_i).
    double feature_feature(std::size_t i, std::size_t j) const;
    double feature_label(std::size_t i, std::size_t k) const;
    double feature_entropy(std::size_t i) const { return feature_entropy_.at(i); }
    double label_entropy(std::size_t k) const { return label_entropy_.at(k); }

    // Number of mutual-information estimates computed while building.
    std::size_t mi_evaluations() const noexcept { return mi_evaluations_; }

    friend MICache build_cache(const MultiLabelDataset& ds, CacheParts parts);

private:
    Matrix<double> feature_feature_;
    Matrix<double> feature_label_;
    std::vector<double> feature_entropy_;
    std::vector<double> label_entropy_;
    std::size_t mi_evaluations_ = 0;
};

MICache build_cache(const MultiLabelDataset& ds, CacheParts parts = {});

// Views over dataset columns.
VariableView feature_variable(const MultiLabelDataset& ds, std::size_t j);
Variable label_variable(const MultiLabelDataset& ds, std::size_t k);

}  // namespace mlfs
