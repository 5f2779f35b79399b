#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "mlfs/error.hpp"
#include "mlfs/infotheory.hpp"

namespace mlfs {
namespace {

// Product tables up to this many cells are counted densely; larger products
// go through a hash of the code pair.
constexpr std::uint64_t kDenseCells = 1u << 22;

std::size_t common_length(std::span<const VariableView> vars) {
    require(!vars.empty(), ErrorCode::argument, "need at least one variable");
    const std::size_t m = vars.front().size();
    for (const auto& v : vars) {
        require(v.size() == m, ErrorCode::argument, "variables differ in length");
        require(v.arity > 0, ErrorCode::argument, "variable arity must be positive");
    }
    require(m >= 1, ErrorCode::argument, "empty variable");
    return m;
}

inline void check_code(Code c, Code arity) {
    if (c < 0 || c >= arity) fail(ErrorCode::argument, "code outside [0, arity)");
}

std::vector<std::size_t> histogram(VariableView x) {
    std::vector<std::size_t> counts(static_cast<std::size_t>(x.arity), 0);
    for (Code c : x.codes) {
        check_code(c, x.arity);
        ++counts[static_cast<std::size_t>(c)];
    }
    return counts;
}

Variable combine(VariableView a, VariableView b) {
    const std::size_t m = a.size();
    Variable out;
    out.codes.resize(m);
    Code next = 0;
    const auto cells = static_cast<std::uint64_t>(a.arity) * static_cast<std::uint64_t>(b.arity);
    if (cells <= kDenseCells) {
        std::vector<Code> table(static_cast<std::size_t>(cells), -1);
        for (std::size_t i = 0; i < m; ++i) {
            check_code(a.codes[i], a.arity);
            check_code(b.codes[i], b.arity);
            auto& slot = table[static_cast<std::size_t>(a.codes[i]) * static_cast<std::size_t>(b.arity) +
                               static_cast<std::size_t>(b.codes[i])];
            if (slot < 0) slot = next++;
            out.codes[i] = slot;
        }
    } else {
        std::unordered_map<std::uint64_t, Code> table;
        table.reserve(m);
        for (std::size_t i = 0; i < m; ++i) {
            check_code(a.codes[i], a.arity);
            check_code(b.codes[i], b.arity);
            const auto key = static_cast<std::uint64_t>(a.codes[i]) * static_cast<std::uint64_t>(b.arity) +
                             static_cast<std::uint64_t>(b.codes[i]);
            auto [it, inserted] = table.try_emplace(key, next);
            if (inserted) ++next;
            out.codes[i] = it->second;
        }
    }
    out.arity = next;
    return out;
}

// Renumbers codes 0..k-1 in order of first appearance.
Variable compact(VariableView v) {
    Variable out;
    out.codes.resize(v.size());
    Code next = 0;
    if (static_cast<std::uint64_t>(v.arity) <= kDenseCells) {
        std::vector<Code> table(static_cast<std::size_t>(v.arity), -1);
        for (std::size_t i = 0; i < v.size(); ++i) {
            check_code(v.codes[i], v.arity);
            auto& slot = table[static_cast<std::size_t>(v.codes[i])];
            if (slot < 0) slot = next++;
            out.codes[i] = slot;
        }
    } else {
        std::unordered_map<Code, Code> table;
        for (std::size_t i = 0; i < v.size(); ++i) {
            check_code(v.codes[i], v.arity);
            auto [it, inserted] = table.try_emplace(v.codes[i], next);
            if (inserted) ++next;
            out.codes[i] = it->second;
        }
    }
    out.arity = next;
    return out;
}

Variable restrict_rows(VariableView v, std::span<const std::size_t> rows) {
    Variable out;
    out.codes.reserve(rows.size());
    for (auto r : rows) out.codes.push_back(v.codes[r]);
    out.arity = v.arity;
    return out;
}

double interaction_recursive(std::span<const VariableView> vars) {
    if (vars.size() == 2) return mutual_information(vars[0], vars[1]);

    const auto head = vars.first(vars.size() - 1);
    const VariableView last = vars.back();
    const double unconditioned = interaction_recursive(head);

    std::vector<std::vector<std::size_t>> strata(static_cast<std::size_t>(last.arity));
    for (std::size_t i = 0; i < last.size(); ++i) {
        strata[static_cast<std::size_t>(last.codes[i])].push_back(i);
    }
    const auto m = static_cast<double>(last.size());
    double conditioned = 0.0;
    for (const auto& rows : strata) {
        if (rows.empty()) continue;
        std::vector<Variable> restricted;
        restricted.reserve(head.size());
        for (const auto& v : head) restricted.push_back(restrict_rows(v, rows));
        std::vector<VariableView> views(restricted.begin(), restricted.end());
        conditioned += static_cast<double>(rows.size()) / m * interaction_recursive(views);
    }
    return unconditioned - conditioned;
}

}  // namespace

Variable Variable::from_codes(std::vector<Code> codes) {
    Code arity = 0;
    for (Code c : codes) {
        require(c >= 0, ErrorCode::argument, "negative code");
        arity = std::max(arity, c + 1);
    }
    return Variable(std::move(codes), std::max<Code>(arity, 1));
}

Variable Variable::from_bits(std::span<const std::uint8_t> bits) {
    std::vector<Code> codes(bits.begin(), bits.end());
    return Variable(std::move(codes), 2);
}

double clamp_information(double value, const char* what) {
    if (value >= 0.0) return value;
    if (value > -1e-12) return 0.0;
    fail(ErrorCode::internal, std::string(what) + " came out negative (" + std::to_string(value) + ")");
}

double entropy_from_counts(std::span<const std::size_t> counts, std::size_t total) {
    require(total > 0, ErrorCode::argument, "empty histogram");
    const auto n = static_cast<double>(total);
    double h = 0.0;
    for (auto c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    return h;
}

double entropy(VariableView x) {
    require(x.size() >= 1, ErrorCode::argument, "entropy of an empty variable");
    require(x.arity > 0, ErrorCode::argument, "variable arity must be positive");
    if (static_cast<std::uint64_t>(x.arity) <= kDenseCells) {
        return entropy_from_counts(histogram(x), x.size());
    }
    std::unordered_map<Code, std::size_t> counts;
    for (Code c : x.codes) {
        check_code(c, x.arity);
        ++counts[c];
    }
    std::vector<std::size_t> flat;
    flat.reserve(counts.size());
    for (const auto& [code, n] : counts) flat.push_back(n);
    return entropy_from_counts(flat, x.size());
}

Variable joint_variable(std::span<const VariableView> vars) {
    common_length(vars);
    Variable acc = compact(vars[0]);
    for (std::size_t i = 1; i < vars.size(); ++i) acc = combine(acc, vars[i]);
    return acc;
}

Variable joint_variable(std::initializer_list<VariableView> vars) {
    return joint_variable(std::span<const VariableView>(vars.begin(), vars.size()));
}

double joint_entropy(std::span<const VariableView> vars) {
    common_length(vars);
    if (vars.size() == 1) return entropy(vars[0]);
    return entropy(joint_variable(vars));
}

double joint_entropy(std::initializer_list<VariableView> vars) {
    return joint_entropy(std::span<const VariableView>(vars.begin(), vars.size()));
}

double conditional_entropy(VariableView x, std::span<const VariableView> given) {
    if (given.empty()) return entropy(x);
    std::vector<VariableView> all{x};
    all.insert(all.end(), given.begin(), given.end());
    common_length(all);
    const double h = joint_entropy(all) - joint_entropy(given);
    return h < 0.0 && h > -1e-12 ? 0.0 : h;
}

double conditional_entropy(VariableView x, std::initializer_list<VariableView> given) {
    return conditional_entropy(x, std::span<const VariableView>(given.begin(), given.size()));
}

double mutual_information(VariableView x, VariableView y) {
    const VariableView pair[] = {x, y};
    const std::size_t m = common_length(pair);

    // Sum p(x,y) log p(x,y) / (p(x) p(y)) straight off the contingency table.
    const auto cells = static_cast<std::uint64_t>(x.arity) * static_cast<std::uint64_t>(y.arity);
    if (cells <= kDenseCells) {
        std::vector<std::size_t> joint(static_cast<std::size_t>(cells), 0);
        for (std::size_t i = 0; i < m; ++i) {
            check_code(x.codes[i], x.arity);
            check_code(y.codes[i], y.arity);
            ++joint[static_cast<std::size_t>(x.codes[i]) * static_cast<std::size_t>(y.arity) +
                    static_cast<std::size_t>(y.codes[i])];
        }
        const auto px = histogram(x);
        const auto py = histogram(y);
        const auto n = static_cast<double>(m);
        double mi = 0.0;
        for (std::size_t a = 0; a < px.size(); ++a) {
            if (px[a] == 0) continue;
            for (std::size_t b = 0; b < py.size(); ++b) {
                const auto c = joint[a * py.size() + b];
                if (c == 0) continue;
                mi += static_cast<double>(c) / n *
                      std::log2(static_cast<double>(c) * n /
                                (static_cast<double>(px[a]) * static_cast<double>(py[b])));
            }
        }
        return clamp_information(mi, "mutual information");
    }
    // Sparse route: compact the marginals first.
    const Variable cx = compact(x);
    const Variable cy = compact(y);
    const Variable cxy = combine(cx, cy);
    const double mi = entropy(cx) + entropy(cy) - entropy(cxy);
    return clamp_information(mi, "mutual information");
}

double conditional_mi(VariableView x, VariableView y, VariableView given) {
    const VariableView triple[] = {x, y, given};
    common_length(triple);
    const double h_x_given_z = joint_entropy({x, given}) - entropy(given);
    const double h_x_given_yz = joint_entropy({x, y, given}) - joint_entropy({y, given});
    return clamp_information(h_x_given_z - h_x_given_yz, "conditional mutual information");
}

double interaction_information(std::span<const VariableView> vars) {
    require(vars.size() >= 2, ErrorCode::argument, "interaction information needs at least two variables");
    common_length(vars);
    return interaction_recursive(vars);
}

double interaction_information(std::initializer_list<VariableView> vars) {
    return interaction_information(std::span<const VariableView>(vars.begin(), vars.size()));
}

double MICache::feature_feature(std::size_t i, std::size_t j) const {
    require(has_feature_feature(), ErrorCode::state, "cache was built without feature-feature table");
    return feature_feature_(i, j);
}

double MICache::feature_label(std::size_t i, std::size_t k) const {
    require(has_feature_label(), ErrorCode::state, "cache was built without feature-label table");
    return feature_label_(i, k);
}

VariableView feature_variable(const MultiLabelDataset& ds, std::size_t j) {
    return {ds.feature_codes(j), ds.arity(j)};
}

Variable label_variable(const MultiLabelDataset& ds, std::size_t k) {
    return Variable::from_bits(ds.label(k));
}

MICache build_cache(const MultiLabelDataset& ds, CacheParts parts) {
    require(ds.is_discrete(), ErrorCode::state, "build_cache needs a discretized dataset");
    const std::size_t nf = ds.num_features();
    const std::size_t nl = ds.num_labels();

    std::vector<VariableView> features;
    features.reserve(nf);
    for (std::size_t j = 0; j < nf; ++j) features.push_back(feature_variable(ds, j));
    std::vector<Variable> labels;
    labels.reserve(nl);
    for (std::size_t k = 0; k < nl; ++k) labels.push_back(label_variable(ds, k));

    MICache cache;
    cache.feature_entropy_.resize(nf);
    for (std::size_t j = 0; j < nf; ++j) cache.feature_entropy_[j] = entropy(features[j]);
    cache.label_entropy_.resize(nl);
    for (std::size_t k = 0; k < nl; ++k) cache.label_entropy_[k] = entropy(labels[k]);

    if (parts.feature_label) {
        cache.feature_label_ = Matrix<double>(nf, nl);
        for (std::size_t j = 0; j < nf; ++j) {
            for (std::size_t k = 0; k < nl; ++k) {
                cache.feature_label_(j, k) = mutual_information(features[j], labels[k]);
                ++cache.mi_evaluations_;
            }
        }
    }
    if (parts.feature_feature) {
        cache.feature_feature_ = Matrix<double>(nf, nf);
        for (std::size_t i = 0; i < nf; ++i) {
            cache.feature_feature_(i, i) = cache.feature_entropy_[i];
            for (std::size_t j = i + 1; j < nf; ++j) {
                const double mi = mutual_information(features[i], features[j]);
                cache.feature_feature_(i, j) = mi;
                cache.feature_feature_(j, i) = mi;
                ++cache.mi_evaluations_;
            }
        }
    }
    return cache;
}

}  // namespace mlfs
