#include "hypac/cli.hpp"

#include "hypac/disk.hpp"
#include "hypac/error.hpp"
#include "hypac/hyperbolic.hpp"
#include "hypac/model.hpp"
#include "hypac/parabolic.hpp"
#include "hypac/perturb.hpp"
#include "hypac/radial.hpp"
#include "hypac/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace hypac::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string fixed(double v, int digits = 6) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

ReportRow check(std::string experiment, std::string claim, double value, double limit) {
    return {std::move(experiment), std::move(claim), sci(value), "< " + sci(limit), value < limit};
}

ReportRow info(std::string experiment, std::string claim, std::string measured) {
    return {std::move(experiment), std::move(claim), std::move(measured), "reported", true};
}

bool same_kind(const nlohmann::json& def, const nlohmann::json& v) {
    if (def.is_boolean()) return v.is_boolean();
    if (def.is_number_integer()) return v.is_number_integer();
    if (def.is_number()) return v.is_number();
    if (def.is_string()) return v.is_string();
    if (def.is_array()) return v.is_array();
    return def.type() == v.type();
}

ProblemParams params_of(const ojson& cfg) {
    const int n = cfg.at("n").get<int>();
    const std::string csv = cfg.at("potential_csv").get<std::string>();
    PotentialSpec pot = csv.empty() ? cubic_potential(cfg.at("k").get<double>()) : load_potential_csv(csv);
    return make_params(n, std::move(pot));
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
    out << text;
}

// Two-column gnuplot data with a comment header.
void write_dat(const fs::path& path, const std::string& header, const std::vector<double>& x,
               const std::vector<double>& y) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
    out << "# " << header << '\n';
    for (std::size_t i = 0; i < x.size(); ++i) out << format_double(x[i]) << ' ' << format_double(y[i]) << '\n';
}

void write_plot(const fs::path& path, const std::string& xlabel, const std::string& ylabel,
                const std::vector<std::pair<std::string, std::string>>& series, bool logy = false) {
    std::ostringstream gp;
    gp << "set xlabel '" << xlabel << "'\nset ylabel '" << ylabel << "'\n";
    if (logy) gp << "set logscale y\n";
    gp << "plot ";
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (i) gp << ", \\\n     ";
        gp << "'" << series[i].first << "' using 1:2 with lines title '" << series[i].second << "'";
    }
    gp << '\n';
    write_text(path, gp.str());
}

// ---------------------------------------------------------------------------

std::vector<ReportRow> run_roots(const ojson& cfg, const fs::path& out) {
    const auto p = params_of(cfg);
    const auto roots = compute_indicial_roots(p);
    const auto chain = root_chain_check(p);
    const double b = p.n - 1.0;
    std::ostringstream table;
    table << "quantity,value\n";
    auto line = [&](const char* name, double v) { table << name << ',' << format_double(v) << '\n'; };
    line("lambda", p.potential.lambda);
    line("lipschitz", p.potential.lipschitz);
    line("alpha_minus", roots.alpha_minus);
    line("alpha_plus", roots.alpha_plus);
    line("beta_minus", roots.beta_minus);
    line("beta_plus", roots.beta_plus);
    write_text(out / "roots.csv", table.str());

    std::printf("n = %d, lambda = %.10g, L = %.10g\n", p.n, p.potential.lambda, p.potential.lipschitz);
    auto show = [](const char* name, bool real, double v) {
        if (real) std::printf("  %-8s %.10f\n", name, v);
        else std::printf("  %-8s complex\n", name);
    };
    show("alpha_-", roots.alpha_real, roots.alpha_minus);
    show("alpha_+", roots.alpha_real, roots.alpha_plus);
    show("beta_-", roots.beta_real, roots.beta_minus);
    show("beta_+", roots.beta_real, roots.beta_plus);

    std::vector<ReportRow> rows;
    if (roots.alpha_real) {
        double q = 0.0;
        for (double a : {roots.alpha_minus, roots.alpha_plus}) {
            q = std::max(q, std::abs(a * a - b * a + p.potential.lambda) / (b * b));
        }
        rows.push_back(check("roots", "alpha quadratic residual", q, 1e-10));
        rows.push_back(check("roots", "alpha Vieta sum", std::abs(roots.alpha_minus + roots.alpha_plus - b) / b, 1e-12));
    } else {
        rows.push_back(info("roots", "alpha roots", "complex (discriminant " + sci(roots.disc_lambda) + ")"));
    }
    if (chain.applicable) {
        rows.push_back({"roots", "root chain 0 < a- <= b- <= (n-1)/2 <= b+ <= a+ < n-1", chain.holds ? "holds" : "violated",
                        "holds", chain.holds});
    } else {
        rows.push_back(info("roots", "root chain", "not applicable (L > (n-1)^2/4)"));
    }
    return rows;
}

std::vector<ReportRow> run_radial(const ojson& cfg, const fs::path& out) {
    const auto p = params_of(cfg);
    SweepOptions so;
    const auto win = cfg.at("fit_window").get<std::vector<double>>();
    if (win.size() != 2) throw ConfigError("fit_window needs two entries");
    so.fit_window = {win[0], win[1]};
    const auto rep = sweep_family(p, cfg.at("a").get<std::vector<double>>(), cfg.at("r_max").get<double>(),
                                  cfg.at("tol").get<double>(), so);
    std::ostringstream table;
    table << "a,outcome,exponent,energy_residual,flux_residual,flux_relative_residual\n";
    std::vector<ReportRow> rows;
    std::vector<std::pair<std::string, std::string>> series;
    for (const auto& e : rep.entries) {
        const std::string tag = "a=" + format_double(e.a);
        if (!e.error.empty() || !e.run) throw Error(ErrorCode::step_failure, tag + ": " + e.error);
        const std::string stem = "radial_a" + format_double(e.a);
        write_profile(e.run->profile, out / (stem + ".csv"));
        write_dat(out / (stem + ".dat"), "r u", e.run->profile.grid, e.run->profile.values);
        series.emplace_back(stem + ".dat", tag);
        const double expo = e.fit ? e.fit->exponent : 0.0;
        table << format_double(e.a) << ',' << to_string(e.run->outcome) << ',' << format_double(expo) << ','
              << format_double(e.energy_residual) << ',' << format_double(e.flux_residual) << ','
              << format_double(e.flux_relative_residual) << '\n';
        rows.push_back(info("radial", tag + " outcome, exponent vs alpha_- " + fixed(rep.alpha_minus),
                            std::string(to_string(e.run->outcome)) + ", " + fixed(expo)));
        rows.push_back(info("radial", tag + " sign changes of u'", std::to_string(e.run->derivative_sign_changes)));
        rows.push_back(check("radial", tag + " energy identity", e.energy_residual, 1e-5));
        rows.push_back(check("radial", tag + " flux identity on [1,5]", e.flux_residual, 1e-5));
    }
    write_text(out / "sweep.csv", table.str());
    write_plot(out / "radial.gp", "r", "u", series);
    return rows;
}

std::vector<ReportRow> run_parabolic(const ojson& cfg, const fs::path& out) {
    const auto p = params_of(cfg);
    std::vector<ReportRow> rows;
    if (cfg.at("check_explicit").get<bool>()) {
        const double res = explicit_solution_residual(p.n);
        std::printf("explicit residual (n = %d): %.3e\n", p.n, res);
        rows.push_back(check("parabolic", "explicit solution residual, n = " + std::to_string(p.n), res, 1e-10));
    }
    const auto het = heteroclinic_profile(p, cfg.at("tol").get<double>());
    write_profile(het.xi_profile, out / "heteroclinic.csv");
    write_dat(out / "heteroclinic.dat", "xi u", het.xi_profile.grid, het.xi_profile.values);
    write_plot(out / "heteroclinic.gp", "xi = log x", "u", {{"heteroclinic.dat", "connection (0,0) -> (1,0)"}});
    rows.push_back(check("parabolic", "heteroclinic energy identity", energy_identity_residual(het.xi_profile), 1e-5));
    if (cfg.at("certificate").get<bool>()) {
        const auto cert = nonexistence_certificate(p, 1e-10);
        const auto prof = orbit_profile(cert.orbit, p);
        write_profile(prof, out / "certificate_orbit.csv");
        rows.push_back({"parabolic", "unstable manifold of (-1,0)", std::string(to_string(cert.orbit.outcome)),
                        "passes_above", cert.certified});
        rows.push_back(check("parabolic", "certificate energy identity", cert.identity_residual, 1e-5));
    }
    if (cfg.at("threshold").get<bool>()) {
        const auto range = cfg.at("threshold_range").get<std::vector<double>>();
        if (range.size() != 2) throw ConfigError("threshold_range needs two entries");
        const auto th = monotonicity_threshold(p.n, {range[0], range[1]}, cfg.at("threshold_tol").get<double>());
        std::ostringstream m;
        m << "gamma " << fixed(th.gamma) << ", node/spiral transition " << fixed(th.node_spiral_transition) << ", gap "
          << sci(th.gap);
        rows.push_back(info("parabolic", "monotonicity threshold in k", m.str()));
    }
    return rows;
}

std::vector<ReportRow> run_hyperbolic(const ojson& cfg, const fs::path& out) {
    const auto p = params_of(cfg);
    const double T = cfg.at("T").get<double>();
    const int N = cfg.at("N").get<int>();
    const double tol = cfg.at("tol").get<double>();
    MinimizeOptions mo;
    const auto init = cfg.at("init").get<std::string>();
    if (init == "tanh") mo.init = InitialGuess::tanh;
    else if (init == "ramp") mo.init = InitialGuess::ramp;
    else if (init == "zero") mo.init = InitialGuess::zero;
    else throw ConfigError("init must be tanh, ramp or zero");
    const auto mini = minimize_profile(p, T, N, tol, mo);
    write_profile(mini.profile, out / "hyperbolic_minimizer.csv");
    write_dat(out / "hyperbolic.dat", "t U", mini.profile.grid, mini.profile.values);
    write_plot(out / "hyperbolic.gp", "t", "U", {{"hyperbolic.dat", "minimizer"}});
    std::vector<ReportRow> rows;
    rows.push_back(check("hyperbolic", "minimizer energy identity", energy_identity_residual(mini.profile), 1e-5));
    const auto mono = check_monotone(mini.profile);
    rows.push_back({"hyperbolic", "minimizer monotone", mono.monotone ? "yes" : "no", "yes", mono.monotone});
    if (cfg.at("newton").get<bool>()) {
        const auto newt = newton_profile(p, T, N, std::min(tol, 1e-10), mini.profile);
        write_profile(newt.profile, out / "hyperbolic_newton.csv");
        double diff = 0.0;
        for (std::size_t i = 0; i < newt.profile.size(); ++i) {
            diff = std::max(diff, std::abs(newt.profile.values[i] - mini.profile.values[i]));
        }
        rows.push_back(check("hyperbolic", "minimizer vs Newton sup difference", diff, 1e-6));
    }
    if (T >= 15.0) {
        const auto tr = tail_rates(mini);
        rows.push_back(info("hyperbolic", "tail rates vs linearization",
                            fixed(tr.right_rate) + " / " + fixed(tr.left_rate) + " vs " + fixed(tr.predicted)));
    }
    return rows;
}

std::vector<ReportRow> run_disk(const ojson& cfg, const fs::path& out) {
    const auto p = params_of(cfg);
    const auto lat = cfg.at("lattice").get<std::string>();
    if (lat != "clustered" && lat != "uniform") throw ConfigError("lattice must be clustered or uniform");
    const auto grid = make_disk_grid(cfg.at("R").get<double>(), cfg.at("Nr").get<int>(), cfg.at("Ntheta").get<int>(),
                                     lat == "clustered" ? ThetaLattice::clustered : ThetaLattice::uniform);
    const auto kind = cfg.at("boundary").get<std::string>();
    BoundaryData bd;
    std::optional<Profile1D> U;
    if (kind == "hh_step") {
        bd = hh_step_boundary();
    } else if (kind == "constant") {
        bd = constant_boundary(cfg.at("boundary_value").get<double>());
    } else if (kind == "profile_trace") {
        const int N = cfg.at("profile_N").get<int>();
        const double T = cfg.at("profile_T").get<double>();
        const auto mini = minimize_profile(p, T, N, 1e-9);
        U = newton_profile(p, T, N, 1e-10, mini.profile).profile;
        bd = profile_trace_boundary(*U);
    } else {
        throw ConfigError("boundary must be hh_step, constant or profile_trace");
    }
    const double tol = cfg.at("tol").get<double>();
    const auto sol = solve_disk(p, bd, grid, tol);
    write_disk_solution(sol, out / "disk.csv");
    // Values along the geodesic perpendicular to P through the pole.
    std::vector<double> t, u;
    for (int i = grid.Nr; i >= 1; --i) {
        t.push_back(-grid.r[static_cast<std::size_t>(i)]);
        u.push_back(sol.sample(grid.r[static_cast<std::size_t>(i)], 1.5 * M_PI));
    }
    for (int i = 0; i <= grid.Nr; ++i) {
        t.push_back(grid.r[static_cast<std::size_t>(i)]);
        u.push_back(sol.sample(grid.r[static_cast<std::size_t>(i)], 0.5 * M_PI));
    }
    write_dat(out / "disk_axis.dat", "t u (theta = pi/2 and 3 pi/2)", t, u);
    write_plot(out / "disk_axis.gp", "t", "u", {{"disk_axis.dat", "disk solution across P"}});

    std::vector<ReportRow> rows;
    rows.push_back(check("disk", "scaled Newton residual", sol.residual_norm, tol));
    rows.push_back(check("disk", "maximum principle violation", max_principle_violation(sol), 1e-8));
    rows.push_back(info("disk", "Newton corrections", std::to_string(sol.newton_iterations)));
    const auto levels = cfg.at("levels").get<std::vector<double>>();
    rows.push_back(info("disk", "symmetry deviation over the t levels",
                        sci(symmetry_deviation(sol, levels, cfg.at("margin").get<double>()))));
    if (U) rows.push_back(info("disk", "sup |u - U(t)| for r <= R - margin", sci(compare_with_profile(sol, *U, cfg.at("margin").get<double>()))));
    return rows;
}

std::vector<FourierTerm> parse_phi0(const nlohmann::json& j) {
    std::vector<FourierTerm> terms;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() < 2 || e.size() > 3 || !e[0].is_number_integer()) {
            throw ConfigError("phi0 entries are [index, cos_coeff] or [index, cos_coeff, sin_coeff]");
        }
        FourierTerm t;
        t.index = e[0].get<int>();
        t.cos_coeff = e[1].get<double>();
        if (e.size() == 3) t.sin_coeff = e[2].get<double>();
        terms.push_back(t);
    }
    return terms;
}

std::vector<ReportRow> run_perturb(const ojson& cfg, const fs::path& out) {
    const auto p = params_of(cfg);
    const auto phi0 = parse_phi0(cfg.at("phi0"));
    const double amp = cfg.at("amplitude").get<double>();
    const double tol = cfg.at("tol").get<double>();
    const auto domain = cfg.at("domain").get<std::string>();
    PerturbedSolution sol;
    if (domain == "disk") {
        EllipticGrid g;
        g.R = cfg.at("R").get<double>();
        g.Nr = cfg.at("Nr").get<int>();
        g.Ntheta = cfg.at("Ntheta").get<int>();
        sol = contract_elliptic(p, phi0, amp, g, tol);
    } else if (domain == "strip") {
        StripGrid g;
        g.xi_min = cfg.at("xi_min").get<double>();
        g.xi_max = cfg.at("xi_max").get<double>();
        g.h = cfg.at("h").get<double>();
        g.Ny = cfg.at("Ny").get<int>();
        sol = contract_parabolic(p, phi0, amp, g, tol);
    } else {
        throw ConfigError("domain must be disk or strip");
    }
    write_perturbed(sol, out / "perturbed.csv");
    std::vector<double> it;
    for (std::size_t i = 0; i < sol.contraction_history.size(); ++i) it.push_back(static_cast<double>(i + 1));
    write_dat(out / "contraction.dat", "iteration increment", it, sol.contraction_history);
    write_plot(out / "contraction.gp", "iteration", "sup increment", {{"contraction.dat", "fixed-point increments"}}, true);

    std::vector<ReportRow> rows;
    rows.push_back(check("perturb", "largest contraction ratio", sol.max_ratio, 1.0));
    rows.push_back(check("perturb", "fixed-point residual", sol.residual, 10 * tol));
    rows.push_back(info("perturb", "iterations", std::to_string(sol.iterations)));
    if (!sol.pivot_ratio.empty()) {
        rows.push_back(info("perturb", "smallest min/max pivot ratio over the mode solves",
                            sci(*std::min_element(sol.pivot_ratio.begin(), sol.pivot_ratio.end()))));
    }
    if (sol.iterations > 0) {
        rows.push_back(info("perturb", "leading decay exponent", fixed(sol.leading_fit.exponent)));
        rows.push_back(info("perturb", "angular spread", sci(sol.angular_spread)));
    }
    if (domain == "strip") {
        rows.push_back(check("perturb", "cusp form defect", sol.cusp_form_defect, 1e-10));
        for (const auto& [k, c] : sol.recovered_phi0) {
            rows.push_back(info("perturb", "recovered boundary coefficient, mode " + std::to_string(k), fixed(c, 8)));
        }
    }
    return rows;
}

std::vector<ReportRow> run_verify(const ojson& cfg) {
    VerifyOptions vo;
    vo.quick = cfg.at("quick").get<bool>();
    vo.on_result = [](const CriterionResult& r) {
        std::printf("%s\n", format_result_line(r).c_str());
        std::fflush(stdout);
    };
    std::vector<ReportRow> rows;
    for (const auto& r : run_acceptance(vo)) {
        rows.push_back({"criterion " + std::to_string(r.id), r.claim, r.measured, r.tolerance, r.passed});
    }
    return rows;
}

}  // namespace

// ---------------------------------------------------------------------------

ojson default_config(const std::string& command) {
    if (std::find(commands.begin(), commands.end(), command) == commands.end()) {
        throw ConfigError("unknown command '" + command + "'");
    }
    ojson c;
    c["command"] = command;
    c["n"] = command == "radial" ? 3 : 2;
    c["k"] = command == "radial" ? 0.5 : 2.0 / 9.0;
    c["potential_csv"] = "";
    c["out"] = "hypac_out";
    if (command == "radial") {
        c["a"] = {0.1, 0.3, 0.5, 0.7};
        c["r_max"] = 30.0;
        c["tol"] = 1e-10;
        c["fit_window"] = {8.0, 14.0};
    } else if (command == "parabolic") {
        c["tol"] = 1e-11;
        c["check_explicit"] = false;
        c["certificate"] = true;
        c["threshold"] = false;
        c["threshold_range"] = {0.01, 0.3};
        c["threshold_tol"] = 1e-4;
    } else if (command == "hyperbolic") {
        c["T"] = 20.0;
        c["N"] = 16000;
        c["tol"] = 1e-9;
        c["init"] = "tanh";
        c["newton"] = true;
    } else if (command == "disk") {
        c["R"] = 12.0;
        c["Nr"] = 300;
        c["Ntheta"] = 256;
        c["lattice"] = "clustered";
        c["boundary"] = "hh_step";
        c["boundary_value"] = 0.0;
        c["profile_T"] = 20.0;
        c["profile_N"] = 16000;
        c["tol"] = 1e-10;
        c["levels"] = {0.0, 1.0, -1.0, 2.0, -2.0};
        c["margin"] = 2.0;
    } else if (command == "perturb") {
        c["domain"] = "disk";
        c["phi0"] = nlohmann::json::array({nlohmann::json::array({1, 1.0})});
        c["amplitude"] = 0.02;
        c["tol"] = 1e-10;
        c["R"] = 24.0;
        c["Nr"] = 1200;
        c["Ntheta"] = 64;
        c["xi_min"] = -30.0;
        c["xi_max"] = 30.0;
        c["h"] = 0.01;
        c["Ny"] = 64;
    } else if (command == "verify-all") {
        c["quick"] = false;
    }
    return c;
}

ojson resolve_config(const std::string& command, const nlohmann::json& overrides) {
    ojson cfg = default_config(command);
    if (overrides.is_null()) return cfg;
    if (!overrides.is_object()) throw ConfigError("configuration must be a JSON object");
    for (const auto& [key, value] : overrides.items()) {
        if (!cfg.contains(key)) throw ConfigError("unknown key '" + key + "' for command " + command);
        if (key == "command") {
            if (!value.is_string() || value.get<std::string>() != command) {
                throw ConfigError("configuration is for command '" + value.dump() + "', not " + command);
            }
            continue;
        }
        if (!same_kind(cfg[key], value)) {
            throw ConfigError("key '" + key + "' expects a value like " + cfg[key].dump() + ", got " + value.dump());
        }
        cfg[key] = value;
    }
    return cfg;
}

void emit_report(const std::vector<ReportRow>& rows, const fs::path& dir) {
    if (rows.empty()) throw Error(ErrorCode::invalid_argument, "report needs at least one result");
    ojson rep = ojson::array();
    std::size_t w_exp = 10, w_claim = 5, w_meas = 8, w_tol = 9;
    for (const auto& r : rows) {
        rep.push_back({{"experiment", r.experiment},
                       {"claim", r.claim},
                       {"measured", r.measured},
                       {"tolerance", r.tolerance},
                       {"passed", r.passed}});
        w_exp = std::max(w_exp, r.experiment.size());
        w_claim = std::max(w_claim, r.claim.size());
        w_meas = std::max(w_meas, r.measured.size());
        w_tol = std::max(w_tol, r.tolerance.size());
    }
    std::ofstream js(dir / "report.json");
    if (!js) throw Error(ErrorCode::io, "cannot write " + (dir / "report.json").string());
    js << ojson{{"results", rep}}.dump(2) << '\n';

    auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w - s.size(), ' '); };
    std::ostringstream t;
    t << pad("experiment", w_exp) << " | " << pad("claim", w_claim) << " | " << pad("measured", w_meas) << " | "
      << pad("tolerance", w_tol) << " | result\n";
    t << std::string(w_exp + w_claim + w_meas + w_tol + 18, '-') << '\n';
    for (const auto& r : rows) {
        t << pad(r.experiment, w_exp) << " | " << pad(r.claim, w_claim) << " | " << pad(r.measured, w_meas) << " | "
          << pad(r.tolerance, w_tol) << " | " << (r.passed ? "pass" : "FAIL") << '\n';
    }
    write_text(dir / "summary.txt", t.str());
}

std::vector<ReportRow> run(const ojson& config) {
    const auto command = config.at("command").get<std::string>();
    const fs::path out = config.at("out").get<std::string>();
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw Error(ErrorCode::io, "cannot create " + out.string() + ": " + ec.message());
    {
        std::ofstream m(out / "manifest.json");
        if (!m) throw Error(ErrorCode::io, "cannot write manifest in " + out.string());
        m << config.dump(2) << '\n';
    }
    std::vector<ReportRow> rows;
    if (command == "roots") rows = run_roots(config, out);
    else if (command == "radial") rows = run_radial(config, out);
    else if (command == "parabolic") rows = run_parabolic(config, out);
    else if (command == "hyperbolic") rows = run_hyperbolic(config, out);
    else if (command == "disk") rows = run_disk(config, out);
    else if (command == "perturb") rows = run_perturb(config, out);
    else rows = run_verify(config);
    emit_report(rows, out);
    return rows;
}

int main(int argc, char** argv) {
    CLI::App app{"Numerical experiments for bounded solutions of semilinear equations on hyperbolic space"};
    app.require_subcommand(0, 0);
    std::string command;
    std::string config_path;
    std::optional<int> n;
    std::optional<double> k, tol, amplitude, T, R;
    std::optional<int> N, Nr, Ntheta;
    std::optional<std::string> out, boundary, domain, potential_csv;
    bool check_explicit = false, quick = false;
    std::vector<std::string> sets;
    app.add_option("command", command, "roots | radial | parabolic | hyperbolic | disk | perturb | verify-all")->required();
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--n", n, "dimension of H^n");
    app.add_option("--k", k, "cubic coefficient");
    app.add_option("--potential-csv", potential_csv, "tabulated potential (header s,f,fprime)");
    app.add_option("--out", out, "output directory");
    app.add_option("--tol", tol, "solver tolerance");
    app.add_option("--amplitude", amplitude, "perturbation amplitude");
    app.add_option("--T", T, "half-length of the hyperbolic interval");
    app.add_option("--N", N, "cells of the hyperbolic grid");
    app.add_option("--R", R, "truncation radius");
    app.add_option("--Nr", Nr, "radial nodes");
    app.add_option("--Ntheta", Ntheta, "angular nodes");
    app.add_option("--boundary", boundary, "disk boundary data: hh_step | constant | profile_trace");
    app.add_option("--domain", domain, "perturbation domain: disk | strip");
    app.add_flag("--check-explicit", check_explicit, "check the explicit solution family");
    app.add_flag("--quick", quick, "reduced resolution for verify-all");
    app.add_option("--set", sets, "override any key: --set key=<json value>");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ExitCode::ok : ExitCode::config_error;
    }

    ojson cfg;
    try {
        nlohmann::json overrides = nlohmann::json::object();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ConfigError("cannot open configuration " + config_path);
            try {
                overrides = nlohmann::json::parse(in);
            } catch (const nlohmann::json::parse_error& e) {
                throw ConfigError(std::string("malformed configuration: ") + e.what());
            }
            if (!overrides.is_object()) throw ConfigError("configuration must be a JSON object");
        }
        auto put = [&](const char* key, const auto& v) {
            if (v) overrides[key] = *v;
        };
        put("n", n);
        put("k", k);
        put("potential_csv", potential_csv);
        put("out", out);
        put("tol", tol);
        put("amplitude", amplitude);
        put("T", T);
        put("N", N);
        put("R", R);
        put("Nr", Nr);
        put("Ntheta", Ntheta);
        put("boundary", boundary);
        put("domain", domain);
        if (check_explicit) overrides["check_explicit"] = true;
        if (quick) overrides["quick"] = true;
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw ConfigError("--set expects key=value");
            try {
                overrides[s.substr(0, eq)] = nlohmann::json::parse(s.substr(eq + 1));
            } catch (const nlohmann::json::parse_error&) {
                overrides[s.substr(0, eq)] = s.substr(eq + 1);
            }
        }
        cfg = resolve_config(command, overrides);
        params_of(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return ExitCode::config_error;
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return ExitCode::config_error;
    }

    try {
        const auto rows = run(cfg);
        bool all = true;
        for (const auto& r : rows) {
            if (!r.passed) {
                all = false;
                std::cerr << "assertion failed: " << r.experiment << ": " << r.claim << " measured " << r.measured
                          << " (tolerance " << r.tolerance << ")\n";
            }
        }
        std::printf("wrote %s\n", (fs::path(cfg.at("out").get<std::string>()) / "summary.txt").c_str());
        return all ? ExitCode::ok : ExitCode::assertion_failure;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return ExitCode::config_error;
    } catch (const Error& e) {
        // argument checks inside the solvers are configuration problems too
        if (e.code() == ErrorCode::invalid_argument || e.code() == ErrorCode::io) {
            std::cerr << "config error: " << e.what() << '\n';
            return ExitCode::config_error;
        }
        std::cerr << "solver error: " << e.what() << '\n';
        return ExitCode::solver_error;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return ExitCode::solver_error;
    }
}

}  // namespace hypac::cli
