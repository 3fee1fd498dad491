#include "proxdeep/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "proxdeep/rng.hpp"

namespace proxdeep {

namespace {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> row_lines;  // 1-based source line of each row
};

// RFC-4180-style reader: quoted fields may contain commas, doubled quotes
// and newlines; CRLF is tolerated.
CsvTable parse_csv_stream(std::istream& in, const std::string& path, bool header) {
    CsvTable table;
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool row_started = false;
    std::size_t line = 1, row_start_line = 1;

    auto end_field = [&]() {
        fields.push_back(std::move(field));
        field.clear();
    };
    auto end_row = [&]() {
        end_field();
        if (header && table.header.empty()) {
            table.header = std::move(fields);
        } else {
            table.rows.push_back(std::move(fields));
            table.row_lines.push_back(row_start_line);
        }
        fields.clear();
        row_started = false;
    };

    char c;
    while (in.get(c)) {
        if (!row_started) {
            row_started = true;
            row_start_line = line;
        }
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!field.empty()) {
                    throw ParseError(path + ":" + std::to_string(line) +
                                     ": quote inside unquoted field");
                }
                in_quotes = true;
                break;
            case ',':
                end_field();
                break;
            case '\r':
                break;
            case '\n':
                end_row();
                ++line;
                break;
            default:
                field.push_back(c);
        }
    }
    if (in_quotes) {
        throw ParseError(path + ": unterminated quoted field");
    }
    if (row_started || !field.empty()) {
        end_row();  // final row without trailing newline
    }
    return table;
}

// Column reference: header name, or a 0-based index when there is no header
// or the string is an integer.
index_t resolve_column(const CsvTable& table, const std::string& ref, bool header,
                       const std::string& path) {
    if (header && !table.header.empty()) {
        for (std::size_t i = 0; i < table.header.size(); ++i) {
            if (table.header[i] == ref) return static_cast<index_t>(i);
        }
    }
    int idx = -1;
    const auto [p, ec] = std::from_chars(ref.data(), ref.data() + ref.size(), idx);
    if (ec == std::errc() && p == ref.data() + ref.size() && idx >= 0) {
        return static_cast<index_t>(idx);
    }
    throw ParseError(path + ": unknown column '" + ref + "'");
}

double parse_number(const std::string& s, const std::string& where) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    const auto [p, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || p != end || s.empty()) {
        throw ParseError(where + ": non-numeric value '" + s + "'");
    }
    return v;
}

}  // namespace

Dataset load_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open file: " + path);
    }
    const CsvTable table = parse_csv_stream(in, path, schema.header);
    if (table.rows.empty()) {
        throw ParseError(path + ": no data rows");
    }

    const std::size_t width = schema.header && !table.header.empty()
                                  ? table.header.size()
                                  : table.rows.front().size();
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (table.rows[r].size() != width) {
            throw ParseError(path + ":" + std::to_string(table.row_lines[r]) + ": row has " +
                             std::to_string(table.rows[r].size()) + " fields, expected " +
                             std::to_string(width));
        }
    }

    // Empty label column means a feature-only file (prediction input).
    const bool has_label = !schema.label_col.empty();
    index_t label_col = -1;
    if (has_label) {
        label_col = resolve_column(table, schema.label_col, schema.header, path);
        if (label_col >= static_cast<index_t>(width)) {
            throw ParseError(path + ": label column index " + std::to_string(label_col) +
                             " out of range");
        }
    }
    std::vector<index_t> feat_cols;
    if (schema.feature_cols.empty()) {
        for (index_t i = 0; i < static_cast<index_t>(width); ++i) {
            if (i != label_col) feat_cols.push_back(i);
        }
    } else {
        for (const std::string& ref : schema.feature_cols) {
            const index_t c = resolve_column(table, ref, schema.header, path);
            if (c >= static_cast<index_t>(width)) {
                throw ParseError(path + ": feature column '" + ref + "' out of range");
            }
            feat_cols.push_back(c);
        }
    }
    if (feat_cols.empty()) {
        throw ParseError(path + ": no feature columns");
    }

    Dataset ds;
    const index_t n = static_cast<index_t>(table.rows.size());
    const index_t m = static_cast<index_t>(feat_cols.size());
    ds.x.resize(m, n);
    ds.classification = has_label && !schema.numeric_label;

    for (index_t f = 0; f < m; ++f) {
        if (schema.header && !table.header.empty()) {
            ds.feature_names.push_back(table.header[static_cast<std::size_t>(feat_cols[f])]);
        } else {
            ds.feature_names.push_back("f" + std::to_string(feat_cols[f]));
        }
    }

    std::map<std::string, index_t> class_index;
    if (has_label && schema.numeric_label) ds.y.resize(n);

    for (index_t j = 0; j < n; ++j) {
        const auto& row = table.rows[static_cast<std::size_t>(j)];
        const std::string loc = path + ":" + std::to_string(table.row_lines[j]);
        for (index_t f = 0; f < m; ++f) {
            const std::string& cell = row[static_cast<std::size_t>(feat_cols[f])];
            ds.x(f, j) = parse_number(cell, loc + ", column '" + ds.feature_names[f] + "'");
        }
        if (!has_label) continue;
        const std::string& lab = row[static_cast<std::size_t>(label_col)];
        if (schema.numeric_label) {
            ds.y[j] = parse_number(lab, loc + ", label");
        } else {
            auto [it, inserted] = class_index.try_emplace(
                lab, static_cast<index_t>(ds.class_names.size()));
            if (inserted) ds.class_names.push_back(lab);
            ds.labels.push_back(it->second);
        }
    }
    if (!ds.x.allFinite()) {
        throw ParseError(path + ": non-finite feature value");
    }
    return ds;
}

std::pair<Dataset, Scaler> standardize(const Dataset& ds) {
    const index_t m = ds.m(), n = ds.n();
    if (n < 2) throw ValueError("standardize: needs at least two observations");
    Scaler sc;
    sc.mean.resize(m);
    sc.sd.resize(m);
    for (index_t f = 0; f < m; ++f) {
        sc.mean[f] = ds.x.row(f).mean();
        const double ss = (ds.x.row(f).array() - sc.mean[f]).square().sum();
        sc.sd[f] = std::sqrt(ss / static_cast<double>(n - 1));
        if (!(sc.sd[f] > 0.0)) {
            throw ValueError("standardize: feature '" +
                             (f < static_cast<index_t>(ds.feature_names.size())
                                  ? ds.feature_names[f]
                                  : std::to_string(f)) +
                             "' has zero variance");
        }
    }
    Dataset out = ds;
    out.x = apply_scaler(sc, ds.x);
    return {std::move(out), std::move(sc)};
}

Mat apply_scaler(const Scaler& s, const Mat& x) {
    if (x.rows() != s.mean.size()) throw DimError("scaler: feature count mismatch");
    return (x.colwise() - s.mean).array().colwise() / s.sd.array();
}

Mat invert_scaler(const Scaler& s, const Mat& x) {
    if (x.rows() != s.mean.size()) throw DimError("scaler: feature count mismatch");
    return (x.array().colwise() * s.sd.array()).colwise() + s.mean.array();
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& ds, double train_frac,
                                             std::uint64_t seed) {
    if (!ds.classification) {
        throw ValueError("stratified_split: requires a classification dataset");
    }
    if (!(train_frac > 0.0 && train_frac < 1.0)) {
        throw ValueError("stratified_split: train_frac must be in (0,1)");
    }
    const index_t k = ds.k();
    std::vector<std::vector<index_t>> by_class(static_cast<std::size_t>(k));
    for (index_t j = 0; j < ds.n(); ++j) {
        by_class[static_cast<std::size_t>(ds.labels[static_cast<std::size_t>(j)])].push_back(j);
    }

    Rng rng(derive_seed(seed, "split"));
    std::vector<index_t> train_idx, test_idx;
    for (index_t c = 0; c < k; ++c) {
        auto& members = by_class[static_cast<std::size_t>(c)];
        if (members.size() < 2) {
            throw ValueError("stratified_split: class '" + ds.class_names[c] +
                             "' has fewer than 2 members");
        }
        const auto n_train = static_cast<std::size_t>(
            std::llround(train_frac * static_cast<double>(members.size())));
        if (n_train == 0 || n_train == members.size()) {
            throw ValueError("stratified_split: class '" + ds.class_names[c] +
                             "' would land entirely on one side");
        }
        rng.shuffle(members);
        train_idx.insert(train_idx.end(), members.begin(),
                         members.begin() + static_cast<std::ptrdiff_t>(n_train));
        test_idx.insert(test_idx.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train),
                        members.end());
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());

    auto subset = [&](const std::vector<index_t>& idx) {
        Dataset out;
        out.classification = true;
        out.class_names = ds.class_names;
        out.feature_names = ds.feature_names;
        out.x.resize(ds.m(), static_cast<index_t>(idx.size()));
        out.labels.reserve(idx.size());
        for (std::size_t j = 0; j < idx.size(); ++j) {
            out.x.col(static_cast<index_t>(j)) = ds.x.col(idx[j]);
            out.labels.push_back(ds.labels[static_cast<std::size_t>(idx[j])]);
        }
        return out;
    };
    return {subset(train_idx), subset(test_idx)};
}

LabelsOneHot one_hot(const std::vector<index_t>& labels, index_t k) {
    return LabelsOneHot::from_labels(labels, k);
}

}  // namespace proxdeep
