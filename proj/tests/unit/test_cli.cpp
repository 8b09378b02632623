#include "hypac/cli.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

using namespace hypac::cli;
namespace fs = std::filesystem;

namespace {

int invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "hypac");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return hypac::cli::main(static_cast<int>(argv.size()), argv.data());
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("hypac_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

nlohmann::json read_json(const fs::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("strict configuration") {
    for (const auto& c : commands) {
        const auto d = default_config(c);
        CHECK(d.at("command") == c);
        CHECK(resolve_config(c, nlohmann::json::object()) == d);
    }
    CHECK_THROWS_AS(default_config("bogus"), ConfigError);
    CHECK_THROWS_AS(resolve_config("roots", {{"T", 3.0}}), ConfigError);
    CHECK_THROWS_AS(resolve_config("roots", {{"n", 2.5}}), ConfigError);
    CHECK_THROWS_AS(resolve_config("roots", {{"k", "big"}}), ConfigError);
    CHECK_THROWS_AS(resolve_config("roots", {{"command", "disk"}}), ConfigError);
    CHECK(resolve_config("roots", {{"k", 1}}).at("k") == 1);
}

TEST_CASE("roots run and manifest round trip") {
    const auto out = scratch("roots");
    CHECK(invoke({"roots", "--n", "2", "--k", "0.2222222", "--out", out.string()}) == ExitCode::ok);
    const auto manifest = read_json(out / "manifest.json");
    CHECK(manifest.at("command") == "roots");
    CHECK(manifest.at("k") == doctest::Approx(0.2222222));
    const auto report = read_json(out / "report.json");
    CHECK(report.at("results").size() == 3);

    const auto again = scratch("roots_again");
    CHECK(invoke({"roots", "--config", (out / "manifest.json").string(), "--out", again.string()}) == ExitCode::ok);
    auto m2 = read_json(again / "manifest.json");
    m2["out"] = manifest.at("out");
    CHECK(m2 == manifest);
    fs::remove_all(out);
    fs::remove_all(again);
}

TEST_CASE("explicit check through the command line") {
    const auto out = scratch("parabolic");
    CHECK(invoke({"parabolic", "--n", "2", "--k", "0.2222222", "--check-explicit", "--out", out.string()}) ==
          ExitCode::ok);
    const auto report = read_json(out / "report.json");
    CHECK(report.at("results")[0].at("passed") == true);
    CHECK(fs::exists(out / "heteroclinic.gp"));
    fs::remove_all(out);
}

TEST_CASE("exit statuses") {
    const auto out = scratch("status");
    CHECK(invoke({"roots", "--T", "4", "--out", out.string()}) == ExitCode::config_error);
    CHECK(invoke({"roots", "--n", "1", "--out", out.string()}) == ExitCode::config_error);
    CHECK(invoke({"nonsense"}) == ExitCode::config_error);
    CHECK(invoke({"roots", "--config", (out / "missing.json").string()}) == ExitCode::config_error);
    CHECK(invoke({"hyperbolic", "--set", "N=100", "--out", out.string()}) == ExitCode::config_error);
    // no solver reaches a residual below rounding
    CHECK(invoke({"hyperbolic", "--T", "6", "--N", "200", "--tol", "1e-30", "--out", out.string()}) ==
          ExitCode::solver_error);
    // coarse grid: minimizer and Newton profiles differ by more than 1e-6
    CHECK(invoke({"hyperbolic", "--T", "6", "--N", "200", "--out", out.string()}) == ExitCode::assertion_failure);
    fs::remove_all(out);
}

TEST_CASE("report table") {
    const auto out = scratch("report");
    fs::create_directories(out);
    CHECK_THROWS(emit_report({}, out));
    emit_report({{"roots", "alpha quadratic residual", "1e-17", "< 1e-10", true}}, out);
    std::ifstream in(out / "summary.txt");
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text.find("alpha quadratic residual") != std::string::npos);
    CHECK(read_json(out / "report.json").at("results").size() == 1);
    fs::remove_all(out);
}

}
