#include "mlfs/transform.hpp"

#include "mlfs/error.hpp"

namespace mlfs {

LabelSet label_set(std::span<const std::uint8_t> row) {
    LabelSet words((row.size() + 63) / 64, 0);
    for (std::size_t k = 0; k < row.size(); ++k) {
        if (row[k]) words[k / 64] |= std::uint64_t{1} << (k % 64);
    }
    return words;
}

std::vector<std::size_t> PowersetLabel::retained_rows() const {
    std::vector<std::size_t> rows;
    rows.reserve(codes.size());
    for (std::size_t i = 0; i < retained.size(); ++i) {
        if (retained[i]) rows.push_back(i);
    }
    return rows;
}

PowersetLabel ppt(const Matrix<std::uint8_t>& labels, std::size_t tau) {
    const std::size_t m = labels.rows();
    std::vector<LabelSet> sets;
    sets.reserve(m);
    std::map<LabelSet, std::size_t> frequency;
    for (std::size_t i = 0; i < m; ++i) {
        for (auto v : labels.row(i)) require(v <= 1, ErrorCode::data, "labels must be binary");
        sets.push_back(label_set(labels.row(i)));
        ++frequency[sets.back()];
    }

    PowersetLabel out;
    out.tau = tau;
    out.retained.assign(m, false);
    for (std::size_t i = 0; i < m; ++i) {
        if (frequency[sets[i]] < tau) continue;
        out.retained[i] = true;
        auto [it, inserted] = out.combo_map.try_emplace(sets[i], static_cast<Code>(out.combo_map.size()));
        out.codes.push_back(it->second);
    }
    if (out.codes.empty()) {
        fail(ErrorCode::empty_after_pruning,
             "pruning with tau=" + std::to_string(tau) + " removed every instance");
    }
    return out;
}

PowersetLabel ppt(const MultiLabelDataset& ds, std::size_t tau) {
    return ppt(ds.label_matrix(), tau);
}

PowersetLabel label_powerset(const Matrix<std::uint8_t>& labels) {
    require(labels.rows() >= 1, ErrorCode::argument, "empty label matrix");
    return ppt(labels, 0);
}

PowersetLabel label_powerset(const MultiLabelDataset& ds) {
    return label_powerset(ds.label_matrix());
}

}  // namespace mlfs
