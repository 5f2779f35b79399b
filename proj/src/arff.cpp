#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>
#include <unordered_map>

#include "mlfs/dataset.hpp"
#include "mlfs/error.hpp"

namespace mlfs {
namespace {

struct Attribute {
    std::string name;
    bool nominal = false;
    std::vector<std::string> values;
    std::unordered_map<std::string, Code> index;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string unquote(std::string_view s) {
    s = trim(s);
    if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front()) {
        s = s.substr(1, s.size() - 2);
    }
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && i + 1 < s.size()) ++i;
        out.push_back(s[i]);
    }
    return out;
}

// Reads one (possibly quoted) token from the front of `s`.
std::string next_token(std::string_view& s, std::size_t line) {
    s = trim(s);
    if (s.empty()) throw ParseError(line, "unexpected end of line");
    std::size_t end = 0;
    if (s.front() == '\'' || s.front() == '"') {
        const char q = s.front();
        end = 1;
        while (end < s.size() && s[end] != q) {
            if (s[end] == '\\') ++end;
            ++end;
        }
        if (end >= s.size()) throw ParseError(line, "unterminated quote");
        ++end;
    } else {
        while (end < s.size() && !std::isspace(static_cast<unsigned char>(s[end])) && s[end] != '{') ++end;
    }
    std::string token = unquote(s.substr(0, end));
    s.remove_prefix(end);
    return token;
}

// Splits on commas outside quotes.
std::vector<std::string_view> split_fields(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    char quote = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (quote) {
            if (c == '\\') ++i;
            else if (c == quote) quote = 0;
        } else if (c == '\'' || c == '"') {
            quote = c;
        } else if (c == ',') {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    out.push_back(trim(s.substr(start)));
    return out;
}

double parse_number(std::string_view text, std::size_t line) {
    text = trim(text);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::data, "line " + std::to_string(line) + ": bad numeric value '" +
                                         std::string(text) + "'");
    }
    return value;
}

Attribute parse_attribute(std::string_view rest, std::size_t line) {
    Attribute attr;
    attr.name = next_token(rest, line);
    rest = trim(rest);
    if (rest.empty()) throw ParseError(line, "attribute '" + attr.name + "' has no type");
    if (rest.front() == '{') {
        const auto close = rest.rfind('}');
        if (close == std::string_view::npos) throw ParseError(line, "unterminated nominal list");
        attr.nominal = true;
        for (auto field : split_fields(rest.substr(1, close - 1))) {
            std::string value = unquote(field);
            if (attr.index.count(value)) throw ParseError(line, "duplicate nominal value '" + value + "'");
            attr.index.emplace(value, static_cast<Code>(attr.values.size()));
            attr.values.push_back(std::move(value));
        }
        if (attr.values.empty()) throw ParseError(line, "empty nominal list");
        return attr;
    }
    const std::string type = lower(next_token(rest, line));
    if (type != "numeric" && type != "real" && type != "integer") {
        throw ParseError(line, "unsupported attribute type '" + type + "'");
    }
    return attr;
}

// MEKA encodes the label count in the relation name as "-C n".
std::optional<long> relation_label_count(const std::string& relation) {
    static const std::regex pattern(R"((?:^|\s)-C\s+(-?\d+))");
    std::smatch m;
    if (std::regex_search(relation, m, pattern)) return std::stol(m[1].str());
    return std::nullopt;
}

std::vector<bool> label_mask(const std::vector<Attribute>& attrs, const std::string& relation,
                             const LabelSpec& spec) {
    const std::size_t n = attrs.size();
    std::vector<bool> mask(n, false);
    auto mark_range = [&](std::size_t first, std::size_t count) {
        if (count == 0 || count >= n) {
            fail(ErrorCode::config, "label count " + std::to_string(count) +
                                        " leaves no features among " + std::to_string(n) + " attributes");
        }
        for (std::size_t i = first; i < first + count; ++i) mask[i] = true;
    };
    switch (spec.kind) {
        case LabelSpec::Kind::from_relation: {
            const auto c = relation_label_count(relation);
            if (!c) fail(ErrorCode::config, "no label designation given and relation has no '-C n'");
            if (*c > 0) mark_range(0, static_cast<std::size_t>(*c));
            else mark_range(n - static_cast<std::size_t>(-*c), static_cast<std::size_t>(-*c));
            break;
        }
        case LabelSpec::Kind::first: mark_range(0, spec.count); break;
        case LabelSpec::Kind::last:
            if (spec.count > n) fail(ErrorCode::config, "more labels than attributes");
            mark_range(n - spec.count, spec.count);
            break;
        case LabelSpec::Kind::names:
            for (const auto& name : spec.names) {
                auto it = std::find_if(attrs.begin(), attrs.end(),
                                       [&](const Attribute& a) { return a.name == name; });
                if (it == attrs.end()) fail(ErrorCode::config, "unknown label '" + name + "'");
                mask[static_cast<std::size_t>(it - attrs.begin())] = true;
            }
            if (std::count(mask.begin(), mask.end(), true) == 0 ||
                std::count(mask.begin(), mask.end(), false) == 0) {
                fail(ErrorCode::config, "label names must leave at least one feature and one label");
            }
            break;
    }
    return mask;
}

std::uint8_t label_value(const Attribute& attr, std::string_view text, std::size_t line) {
    const std::string value = unquote(text);
    if (value == "0") return 0;
    if (value == "1") return 1;
    if (!attr.nominal) {
        const double v = parse_number(value, line);
        if (v == 0.0) return 0;
        if (v == 1.0) return 1;
    }
    throw Error(ErrorCode::data, "line " + std::to_string(line) + ": label '" + attr.name +
                                     "' has non-binary value '" + value + "'");
}

}  // namespace

MultiLabelDataset parse_arff(std::string_view text, const LabelSpec& spec, std::string name) {
    std::vector<Attribute> attrs;
    std::string relation;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool in_data = false;

    auto next_line = [&](std::string_view& line) {
        if (pos >= text.size()) return false;
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = end + 1;
        ++line_no;
        return true;
    };

    std::string_view line;
    while (!in_data && next_line(line)) {
        auto body = trim(line);
        if (body.empty() || body.front() == '%') continue;
        if (body.front() != '@') throw ParseError(line_no, "expected a header directive");
        std::string_view rest = body.substr(1);
        const std::string keyword = lower(next_token(rest, line_no));
        if (keyword == "relation") {
            relation = unquote(rest);
        } else if (keyword == "attribute") {
            attrs.push_back(parse_attribute(rest, line_no));
        } else if (keyword == "data") {
            in_data = true;
        } else {
            throw ParseError(line_no, "unknown directive '@" + keyword + "'");
        }
    }
    if (!in_data) throw ParseError(line_no, "missing @data section");
    if (attrs.empty()) throw ParseError(line_no, "no attributes declared");

    const auto is_label = label_mask(attrs, relation, spec);
    const std::size_t n_attr = attrs.size();

    std::vector<std::vector<double>> numeric(n_attr);
    std::vector<std::vector<Code>> nominal(n_attr);
    std::vector<std::vector<std::uint8_t>> label_cols(n_attr);

    std::vector<std::string_view> values(n_attr);
    while (next_line(line)) {
        auto body = trim(line);
        if (body.empty() || body.front() == '%') continue;

        std::fill(values.begin(), values.end(), std::string_view{});
        bool sparse = body.front() == '{';
        if (sparse) {
            if (body.back() != '}') throw ParseError(line_no, "unterminated sparse row");
            auto inner = trim(body.substr(1, body.size() - 2));
            if (!inner.empty()) {
                for (auto field : split_fields(inner)) {
                    const auto space = field.find_first_of(" \t");
                    if (space == std::string_view::npos) throw ParseError(line_no, "bad sparse entry");
                    std::size_t idx = 0;
                    auto key = trim(field.substr(0, space));
                    auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), idx);
                    if (ec != std::errc() || ptr != key.data() + key.size() || idx >= n_attr) {
                        throw ParseError(line_no, "bad sparse index '" + std::string(key) + "'");
                    }
                    values[idx] = trim(field.substr(space));
                }
            }
        } else {
            auto fields = split_fields(body);
            if (fields.size() != n_attr) {
                throw ParseError(line_no, "expected " + std::to_string(n_attr) + " values, got " +
                                              std::to_string(fields.size()));
            }
            std::copy(fields.begin(), fields.end(), values.begin());
        }

        for (std::size_t a = 0; a < n_attr; ++a) {
            std::string_view v = values[a];
            const bool absent = sparse && v.empty();
            if (!absent && (v.empty() || v == "?")) {
                throw Error(ErrorCode::data, "line " + std::to_string(line_no) +
                                                 ": missing value for '" + attrs[a].name + "'");
            }
            if (is_label[a]) {
                label_cols[a].push_back(absent ? 0 : label_value(attrs[a], v, line_no));
            } else if (attrs[a].nominal) {
                if (absent) {
                    nominal[a].push_back(0);
                    continue;
                }
                auto it = attrs[a].index.find(unquote(v));
                if (it == attrs[a].index.end()) {
                    throw Error(ErrorCode::data, "line " + std::to_string(line_no) + ": value '" +
                                                     unquote(v) + "' not in domain of '" + attrs[a].name + "'");
                }
                nominal[a].push_back(it->second);
            } else {
                numeric[a].push_back(absent ? 0.0 : parse_number(v, line_no));
            }
        }
    }

    std::vector<FeatureColumn> features;
    std::vector<std::vector<std::uint8_t>> labels;
    std::vector<std::string> feature_names, label_names;
    for (std::size_t a = 0; a < n_attr; ++a) {
        if (is_label[a]) {
            labels.push_back(std::move(label_cols[a]));
            label_names.push_back(attrs[a].name);
        } else if (attrs[a].nominal) {
            features.push_back(FeatureColumn::categorical(std::move(nominal[a]),
                                                          static_cast<Code>(attrs[a].values.size())));
            feature_names.push_back(attrs[a].name);
        } else {
            features.push_back(FeatureColumn::numeric(std::move(numeric[a])));
            feature_names.push_back(attrs[a].name);
        }
    }
    if (name.empty()) {
        name = relation;
        if (auto colon = name.find(':'); colon != std::string::npos) name = name.substr(0, colon);
    }
    if (labels.front().empty()) fail(ErrorCode::data, "ARFF file has no instances");
    return MultiLabelDataset(std::move(name), std::move(features), std::move(labels),
                             std::move(feature_names), std::move(label_names));
}

MultiLabelDataset load_arff(const std::filesystem::path& path, const LabelSpec& spec) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io, "cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_arff(buffer.str(), spec, path.stem().string());
}

}  // namespace mlfs
