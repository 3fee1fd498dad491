#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace proxdeep::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

struct CliOptions {
    std::string config_path;
    std::string out_dir;  // overrides the config's "out"
    std::optional<std::uint64_t> seed;
    bool sequential = false;
};

struct PredictOptions {
    std::string params_path;
    std::string data_path;
    std::string out_dir = ".";
    bool sequential = false;
};

// Each command returns a process exit code and reports problems on `err`.
int cmd_fit(const CliOptions& opts, std::ostream& out, std::ostream& err);
int cmd_path(const CliOptions& opts, std::ostream& out, std::ostream& err);
int cmd_select(const CliOptions& opts, std::ostream& out, std::ostream& err);
int cmd_predict(const PredictOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace proxdeep::cli
