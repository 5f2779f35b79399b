#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlfs/matrix.hpp"

namespace mlfs {

using Code = std::int32_t;

// One feature column. A column is categorical once arity > 0; arity == 0 marks
// a raw numeric column that still needs discretize().
struct FeatureColumn {
    std::vector<Code> codes;
    std::vector<double> raw;
    Code arity = 0;

    static FeatureColumn categorical(std::vector<Code> codes, Code arity);
    static FeatureColumn numeric(std::vector<double> values);

    bool is_discrete() const noexcept { return arity > 0; }
    std::size_t size() const noexcept { return is_discrete() ? codes.size() : raw.size(); }
    bool operator==(const FeatureColumn&) const = default;
};

// Immutable multi-label dataset: M instances, |F| feature columns and |L|
// binary label columns, stored column-major.
class MultiLabelDataset {
public:
    MultiLabelDataset(std::string name,
                      std::vector<FeatureColumn> features,
                      std::vector<std::vector<std::uint8_t>> labels,
                      std::vector<std::string> feature_names = {},
                      std::vector<std::string> label_names = {});

    const std::string& name() const noexcept { return name_; }
    std::size_t num_instances() const noexcept { return rows_; }
    std::size_t num_features() const noexcept { return features_.size(); }
    std::size_t num_labels() const noexcept { return labels_.size(); }

    const FeatureColumn& feature(std::size_t j) const { return features_.at(j); }
    std::span<const Code> feature_codes(std::size_t j) const;
    Code arity(std::size_t j) const { return features_.at(j).arity; }
    std::span<const std::uint8_t> label(std::size_t k) const { return labels_.at(k); }

    const std::vector<FeatureColumn>& features() const noexcept { return features_; }
    const std::vector<std::vector<std::uint8_t>>& labels() const noexcept { return labels_; }
    const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
    const std::vector<std::string>& label_names() const noexcept { return label_names_; }

    bool is_discrete() const noexcept;

    // Row-major M x |L| copy of the label columns.
    Matrix<std::uint8_t> label_matrix() const;

    // New dataset made of the given rows, in the given order.
    MultiLabelDataset select_rows(std::span<const std::size_t> rows, std::string name = {}) const;

    bool operator==(const MultiLabelDataset&) const = default;

private:
    std::string name_;
    std::size_t rows_ = 0;
    std::vector<FeatureColumn> features_;
    std::vector<std::vector<std::uint8_t>> labels_;
    std::vector<std::string> feature_names_;
    std::vector<std::string> label_names_;
};

// Which attributes of an ARFF file are labels.
struct LabelSpec {
    enum class Kind { from_relation, last, first, names };

    Kind kind = Kind::from_relation;
    std::size_t count = 0;
    std::vector<std::string> names;

    // MEKA-style "-C n" in the @relation name: n > 0 means the first n
    // attributes, n < 0 the last |n|.
    static LabelSpec from_relation() { return {}; }
    static LabelSpec last(std::size_t n) { return {Kind::last, n, {}}; }
    static LabelSpec first(std::size_t n) { return {Kind::first, n, {}}; }
    static LabelSpec named(std::vector<std::string> label_names) {
        return {Kind::names, 0, std::move(label_names)};
    }
};

// Reads dense and sparse ARFF (Mulan/MEKA flavour). Nominal attributes get
// codes in declaration order, numeric attributes stay raw until discretized.
MultiLabelDataset load_arff(const std::filesystem::path& path, const LabelSpec& labels = {});
MultiLabelDataset parse_arff(std::string_view text, const LabelSpec& labels = {},
                             std::string name = {});

enum class Discretization { equal_width, equal_frequency };

const char* to_string(Discretization d) noexcept;
std::optional<Discretization> parse_discretization(std::string_view text);

// Bins every raw numeric column; categorical columns pass through.
MultiLabelDataset discretize(const MultiLabelDataset& ds, int bins,
                             Discretization strategy = Discretization::equal_width);

// Single-column helpers used by discretize().
std::vector<Code> equal_width_codes(std::span<const double> values, int bins);
std::vector<Code> equal_frequency_codes(std::span<const double> values, int bins);

struct DatasetSplit {
    enum class Origin { provided_split, seeded_random };

    MultiLabelDataset train;
    MultiLabelDataset test;
    Origin origin = Origin::seeded_random;
    std::optional<std::uint64_t> seed;
    // Row indices into the source dataset (seeded splits only).
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
};

// Seeded random split. |test| = round(fraction_test * M); both parts keep the
// original relative row order.
DatasetSplit split(const MultiLabelDataset& ds, double fraction_test, std::uint64_t seed);

// Wraps an existing train/test pair after checking that names and arities agree.
DatasetSplit provided_split(MultiLabelDataset train, MultiLabelDataset test);

// Concatenates rows of two datasets with the same schema.
MultiLabelDataset concatenate(const MultiLabelDataset& a, const MultiLabelDataset& b,
                              std::string name = {});

// Normalized text format: "M F L" header, then M rows of integer codes
// (features, then labels).
void write_normalized(const MultiLabelDataset& ds, std::ostream& out);
void write_normalized(const MultiLabelDataset& ds, const std::filesystem::path& path);
MultiLabelDataset read_normalized(std::istream& in, std::string name = {});
MultiLabelDataset read_normalized(const std::filesystem::path& path);

}  // namespace mlfs
