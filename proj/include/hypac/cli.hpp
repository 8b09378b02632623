#pragma once

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hypac::cli {

enum ExitCode { ok = 0, config_error = 2, solver_error = 3, assertion_failure = 4 };

/// Thrown for anything wrong with the configuration; maps to exit status 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline const std::vector<std::string> commands{"roots", "radial", "parabolic", "hyperbolic",
                                               "disk", "perturb", "verify-all"};

/// Defaults for a command, including `command`, `n`, `k` and `out`.
nlohmann::ordered_json default_config(const std::string& command);

/// Overlays `overrides` on the defaults of `command`. Unknown keys and values
/// of the wrong JSON type raise ConfigError, as does a `command` key that
/// names a different command.
nlohmann::ordered_json resolve_config(const std::string& command, const nlohmann::json& overrides);

struct ReportRow {
    std::string experiment;
    std::string claim;
    std::string measured;
    std::string tolerance;
    bool passed = false;
};

/// Writes `report.json` and the text table `summary.txt` into `dir`.
/// InvalidArgument on an empty row list.
void emit_report(const std::vector<ReportRow>& rows, const std::filesystem::path& dir);

/// Runs one resolved configuration, writing every artifact into its `out`
/// directory. Returns the rows that went into the report.
std::vector<ReportRow> run(const nlohmann::ordered_json& config);

/// Entry point of the `hypac` executable.
int main(int argc, char** argv);

}  // namespace hypac::cli
