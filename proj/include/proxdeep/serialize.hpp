#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "proxdeep/admm.hpp"
#include "proxdeep/data_io.hpp"
#include "proxdeep/model_select.hpp"
#include "proxdeep/path.hpp"

namespace proxdeep {

using json = nlohmann::json;

json mat_to_json(const Mat& m);  // {"rows", "cols", "data"} column-major
Mat mat_from_json(const json& j, const std::string& where);

json arch_to_json(const Architecture& arch);
Architecture arch_from_json(const json& j, const std::string& where);

// Parameter document: {"arch": ..., "blocks": [...], "scaler": ...?}.
struct ParamsDoc {
    Architecture arch;
    ParamSet params;
    std::optional<Scaler> scaler;
    std::vector<std::string> class_names;
    std::vector<std::string> feature_names;
};

json params_to_json(const ParamsDoc& doc);
ParamsDoc params_from_json(const json& j);

json fit_report_to_json(const Architecture& arch, const FitReport& report);
std::string trace_csv(const FitReport& report);

json selection_to_json(const SelectionReport& rep);

json path_report_to_json(const PathReport& rep);
std::string path_table_csv(const PathReport& rep);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Fixed-format floating point for CSV output (shortest round-trip).
std::string fmt_double(double v);

}  // namespace proxdeep
