#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "mlfs/dataset.hpp"
#include "mlfs/infotheory.hpp"
#include "mlfs/matrix.hpp"

namespace mlfs {

// Label subset of one instance, packed 64 labels per word.
using LabelSet = std::vector<std::uint64_t>;

LabelSet label_set(std::span<const std::uint8_t> row);

// A label space collapsed into one categorical variable. Codes cover the
// retained instances only, in original row order.
struct PowersetLabel {
    std::vector<Code> codes;
    std::map<LabelSet, Code> combo_map;
    std::vector<bool> retained;
    std::size_t tau = 0;

    Code arity() const noexcept { return static_cast<Code>(combo_map.size()); }
    std::size_t retained_count() const noexcept { return codes.size(); }
    std::vector<std::size_t> retained_rows() const;
    VariableView variable() const noexcept { return {codes, arity()}; }
};

// Every distinct label subset becomes one class, numbered by first occurrence.
PowersetLabel label_powerset(const Matrix<std::uint8_t>& labels);
PowersetLabel label_powerset(const MultiLabelDataset& ds);

// Label powerset after dropping the instances whose label subset occurs fewer
// than tau times in `labels`. Dropped instances are not reintroduced.
// Throws ErrorCode::empty_after_pruning when nothing survives.
PowersetLabel ppt(const Matrix<std::uint8_t>& labels, std::size_t tau);
PowersetLabel ppt(const MultiLabelDataset& ds, std::size_t tau);

}  // namespace mlfs
