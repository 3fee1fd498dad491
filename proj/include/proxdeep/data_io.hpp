#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "proxdeep/objectives.hpp"
#include "proxdeep/tensor.hpp"

namespace proxdeep {

// Features as M×N with observations in columns. Classification datasets
// carry dense label indices (first-appearance order); regression datasets a
// numeric target.
struct Dataset {
    Mat x;
    std::vector<index_t> labels;
    Vec y;
    bool classification = true;
    std::vector<std::string> class_names;
    std::vector<std::string> feature_names;

    index_t m() const { return x.rows(); }
    index_t n() const { return x.cols(); }
    index_t k() const { return static_cast<index_t>(class_names.size()); }
};

// Columns are addressed by header name, or by 0-based index when there is
// no header row (or the name parses as an integer).
struct CsvSchema {
    std::vector<std::string> feature_cols;  // empty = all columns except label
    std::string label_col;
    bool header = true;
    bool numeric_label = false;
};

Dataset load_csv(const std::string& path, const CsvSchema& schema);

struct Scaler {
    Vec mean;
    Vec sd;
};

// Per-feature zero-mean unit-sd rescaling; rejects zero-variance features.
std::pair<Dataset, Scaler> standardize(const Dataset& ds);

Mat apply_scaler(const Scaler& s, const Mat& x);
Mat invert_scaler(const Scaler& s, const Mat& x);

// Per-class split preserving proportions to within one observation.
// Deterministic in seed; the two sides partition the dataset.
std::pair<Dataset, Dataset> stratified_split(const Dataset& ds, double train_frac,
                                             std::uint64_t seed);

LabelsOneHot one_hot(const std::vector<index_t>& labels, index_t k);

}  // namespace proxdeep
