#include "proxdeep/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace proxdeep {

std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json mat_to_json(const Mat& m) {
    json data = json::array();
    for (index_t i = 0; i < m.size(); ++i) {
        data.push_back(*(m.data() + i));
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Mat mat_from_json(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data")) {
        throw ParseError(where + ": expected {rows, cols, data}");
    }
    const index_t rows = j.at("rows").get<index_t>();
    const index_t cols = j.at("cols").get<index_t>();
    const auto& data = j.at("data");
    if (rows < 0 || cols < 0 || !data.is_array() ||
        static_cast<index_t>(data.size()) != rows * cols) {
        throw ParseError(where + ": data length does not match rows*cols");
    }
    Mat m(rows, cols);
    for (index_t i = 0; i < m.size(); ++i) {
        *(m.data() + i) = data.at(static_cast<std::size_t>(i)).get<double>();
    }
    return m;
}

json arch_to_json(const Architecture& arch) {
    json links = json::array();
    for (LinkId id : arch.links) links.push_back(link_name(id));
    return json{{"input_dim", arch.input_dim},
                {"layer_dims", arch.layer_dims},
                {"links", std::move(links)},
                {"loss", loss_name(arch.loss)}};
}

Architecture arch_from_json(const json& j, const std::string& where) {
    Architecture arch;
    try {
        arch.input_dim = j.at("input_dim").get<index_t>();
        arch.layer_dims = j.at("layer_dims").get<std::vector<index_t>>();
        for (const auto& s : j.at("links")) {
            arch.links.push_back(link_from_name(s.get<std::string>()));
        }
        arch.loss = loss_from_name(j.at("loss").get<std::string>());
    } catch (const json::exception& e) {
        throw ParseError(where + ": " + e.what());
    }
    arch.validate();
    return arch;
}

json params_to_json(const ParamsDoc& doc) {
    json blocks = json::array();
    for (const Mat& b : doc.params.blocks) blocks.push_back(mat_to_json(b));
    json out{{"arch", arch_to_json(doc.arch)}, {"blocks", std::move(blocks)}};
    if (doc.scaler) {
        out["scaler"] = json{{"mean", std::vector<double>(doc.scaler->mean.begin(),
                                                          doc.scaler->mean.end())},
                             {"sd", std::vector<double>(doc.scaler->sd.begin(),
                                                        doc.scaler->sd.end())}};
    }
    if (!doc.class_names.empty()) out["class_names"] = doc.class_names;
    if (!doc.feature_names.empty()) out["feature_names"] = doc.feature_names;
    return out;
}

ParamsDoc params_from_json(const json& j) {
    ParamsDoc doc;
    if (!j.is_object() || !j.contains("arch") || !j.contains("blocks")) {
        throw ParseError("params: expected {arch, blocks}");
    }
    doc.arch = arch_from_json(j.at("arch"), "params.arch");
    const auto& blocks = j.at("blocks");
    if (!blocks.is_array()) throw ParseError("params.blocks: expected array");
    for (std::size_t l = 0; l < blocks.size(); ++l) {
        doc.params.blocks.push_back(
            mat_from_json(blocks.at(l), "params.blocks[" + std::to_string(l) + "]"));
    }
    validate_params(doc.arch, doc.params);
    if (j.contains("scaler") && !j.at("scaler").is_null()) {
        const auto& s = j.at("scaler");
        Scaler sc;
        const auto mean = s.at("mean").get<std::vector<double>>();
        const auto sd = s.at("sd").get<std::vector<double>>();
        sc.mean = Eigen::Map<const Vec>(mean.data(), static_cast<index_t>(mean.size()));
        sc.sd = Eigen::Map<const Vec>(sd.data(), static_cast<index_t>(sd.size()));
        if (sc.mean.size() != doc.arch.input_dim || sc.sd.size() != doc.arch.input_dim) {
            throw ParseError("params.scaler: length does not match input_dim");
        }
        doc.scaler = std::move(sc);
    }
    if (j.contains("class_names")) {
        doc.class_names = j.at("class_names").get<std::vector<std::string>>();
    }
    if (j.contains("feature_names")) {
        doc.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    }
    return doc;
}

namespace {

json record_to_json(const FitRecord& r) {
    json j{{"iter", r.iter},
           {"objective", r.objective},
           {"aug_lagrangian", r.aug_lagrangian},
           {"primal_res", r.primal_res},
           {"dual_res", r.dual_res}};
    if (std::isnan(r.train_accuracy)) {
        j["train_accuracy"] = nullptr;
    } else {
        j["train_accuracy"] = r.train_accuracy;
    }
    return j;
}

}  // namespace

json fit_report_to_json(const Architecture& arch, const FitReport& report) {
    json iters = json::array();
    for (const FitRecord& r : report.iterations) iters.push_back(record_to_json(r));
    json blocks = json::array();
    for (const Mat& b : report.params.blocks) blocks.push_back(mat_to_json(b));
    json zs = json::array(), us = json::array();
    for (const Mat& z : report.state.zs) zs.push_back(mat_to_json(z));
    for (const Mat& u : report.state.us) us.push_back(mat_to_json(u));
    return json{{"arch", arch_to_json(arch)},
                {"iterations", std::move(iters)},
                {"params", std::move(blocks)},
                {"state", json{{"zs", std::move(zs)}, {"us", std::move(us)}}},
                {"nonzero_fraction", report.nonzero_fraction},
                {"converged", report.converged},
                {"warnings", report.warnings}};
}

std::string trace_csv(const FitReport& report) {
    std::ostringstream out;
    out << "iter,objective,aug_lagrangian,primal_res,dual_res,train_acc\n";
    for (const FitRecord& r : report.iterations) {
        out << r.iter << ',' << fmt_double(r.objective) << ',' << fmt_double(r.aug_lagrangian)
            << ',' << fmt_double(r.primal_res) << ',' << fmt_double(r.dual_res) << ','
            << fmt_double(r.train_accuracy) << '\n';
    }
    return out.str();
}

json selection_to_json(const SelectionReport& rep) {
    json j{{"df", rep.df},
           {"err_in", rep.err_in},
           {"ic", rep.ic},
           {"cost_c", rep.cost_c},
           {"df_mode", rep.df_mode}};
    j["sure"] = std::isnan(rep.sure) ? json(nullptr) : json(rep.sure);
    j["sigma2"] = std::isnan(rep.sigma2) ? json(nullptr) : json(rep.sigma2);
    return j;
}

json path_report_to_json(const PathReport& rep) {
    json cells = json::array();
    for (const PathCell& c : rep.cells) {
        cells.push_back(json{{"mu", c.mu},
                             {"gamma_w", c.gamma_w},
                             {"pct_nonzero_w", c.nonzero_fraction},
                             {"train_rate", c.train_rate},
                             {"test_rate", c.test_rate},
                             {"objective", c.objective},
                             {"replicates_ok", c.replicates_ok},
                             {"failed", c.failed}});
    }
    return json{{"cells", std::move(cells)}};
}

std::string path_table_csv(const PathReport& rep) {
    std::ostringstream out;
    out << "pct_nonzero_w,gamma_w,mu_l,train_rate,test_rate\n";
    for (const PathCell& c : rep.cells) {
        out << fmt_double(c.nonzero_fraction) << ',' << fmt_double(c.gamma_w) << ','
            << fmt_double(c.mu) << ',' << fmt_double(c.train_rate) << ','
            << fmt_double(c.test_rate) << '\n';
    }
    return out.str();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out << content;
    if (!out) throw Error("write failed: " + path);
}

}  // namespace proxdeep
