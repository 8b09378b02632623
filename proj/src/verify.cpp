#include "hypac/verify.hpp"

#include "hypac/disk.hpp"
#include "hypac/error.hpp"
#include "hypac/hyperbolic.hpp"
#include "hypac/model.hpp"
#include "hypac/parabolic.hpp"
#include "hypac/perturb.hpp"
#include "hypac/radial.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <sstream>

namespace hypac {

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string fixed(double v, int digits = 5) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

struct Labelled {
    std::string label;
    Profile1D profile;
};

// State shared between criteria: later ones reuse earlier solutions, and the
// identity suite sees every profile.
struct Context {
    bool quick = false;
    std::vector<Labelled> profiles;
    std::shared_ptr<const Profile1D> heteroclinic;  // n = 2, k = 2/9
    std::optional<Profile1D> hyperbolic;           // n = 2, k = 2/9, T = 20

    void keep(std::string label, Profile1D p) { profiles.push_back({std::move(label), std::move(p)}); }
};

ProblemParams cubic(int n, double k) { return make_params(n, cubic_potential(k)); }

const Profile1D& heteroclinic_base(Context& ctx) {
    if (!ctx.heteroclinic) {
        ctx.heteroclinic = std::make_shared<const Profile1D>(heteroclinic_profile(cubic(2, 2.0 / 9.0), 1e-11).xi_profile);
    }
    return *ctx.heteroclinic;
}

const Profile1D& hyperbolic_profile(Context& ctx) {
    if (!ctx.hyperbolic) {
        const auto p = cubic(2, 2.0 / 9.0);
        const auto m = minimize_profile(p, 20.0, 16000, 1e-9);
        ctx.hyperbolic = newton_profile(p, 20.0, 16000, 1e-10, m.profile).profile;
    }
    return *ctx.hyperbolic;
}

// Closed-form x^a / (1 + x^a) in the xi chart, a = (n-1)/3.
Profile1D explicit_profile(int n) {
    Profile1D p;
    p.chart = Chart::log_x_xi;
    p.params = cubic(n, 2.0 * (n - 1) * (n - 1) / 9.0);
    const double a = (n - 1) / 3.0;
    for (int i = 0; i <= 8000; ++i) {
        const double xi = -40.0 + 80.0 * i / 8000.0;
        const double s = std::exp(a * xi);
        p.grid.push_back(xi);
        p.values.push_back(s / (1.0 + s));
        p.derivs.push_back(a * s / ((1.0 + s) * (1.0 + s)));
    }
    return p;
}

void c1(Context& ctx, CriterionResult& r) {
    r.claim = "explicit family residual for n = 2, 3, 5";
    r.tolerance = "< 1e-10, < 1 s";
    r.budget_seconds = 1.0;
    double worst = 0.0;
    std::ostringstream m;
    for (int n : {2, 3, 5}) {
        const double res = explicit_solution_residual(n);
        worst = std::max(worst, res);
        m << "n=" << n << ": " << sci(res) << "  ";
        ctx.keep("explicit n=" + std::to_string(n), explicit_profile(n));
    }
    r.measured = m.str();
    r.passed = worst < 1e-10;
}

void c2(Context& ctx, CriterionResult& r) {
    r.claim = "shot heteroclinic vs x^{1/3}/(1+x^{1/3}), n = 2, k = 2/9";
    r.tolerance = "sup < 1e-6, < 5 s";
    r.budget_seconds = 5.0;
    const auto& p = heteroclinic_base(ctx);
    double worst = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double s = std::exp(p.grid[i] / 3.0);
        worst = std::max(worst, std::abs(p.values[i] - s / (1.0 + s)));
    }
    ctx.keep("heteroclinic n=2", p);
    r.measured = "sup error " + sci(worst) + " over " + std::to_string(p.size()) + " nodes";
    r.passed = worst < 1e-6;
}

void c3(Context&, CriterionResult& r) {
    r.claim = "indicial roots for 50 (n, lambda) pairs";
    r.tolerance = "quadratic < 1e-10, Vieta < 1e-12, chain whenever L <= (n-1)^2/4, < 1 s";
    r.budget_seconds = 1.0;
    double quad = 0.0, vieta = 0.0;
    int chains = 0, chain_ok = 0, pairs = 0;
    for (int n = 2; n <= 11; ++n) {
        const double b = n - 1.0;
        for (double frac : {0.05, 0.25, 0.5, 0.75, 1.0}) {
            const double lambda = frac * b * b / 4.0;
            const auto roots = indicial_roots(n, lambda);
            for (double a : {roots.lo, roots.hi}) {
                quad = std::max(quad, std::abs(a * a - b * a + lambda) / (b * b));
            }
            vieta = std::max(vieta, std::abs(roots.lo + roots.hi - b) / b);
            vieta = std::max(vieta, std::abs(roots.lo * roots.hi - lambda) / lambda);
            const auto rep = root_chain_check(cubic(n, lambda));
            if (rep.applicable) {
                ++chains;
                if (rep.holds) ++chain_ok;
            }
            ++pairs;
        }
    }
    std::ostringstream m;
    m << pairs << " pairs, quadratic " << sci(quad) << ", Vieta " << sci(vieta) << ", chain " << chain_ok << "/"
      << chains << " applicable";
    r.measured = m.str();
    r.passed = pairs == 50 && quad < 1e-10 && vieta < 1e-12 && chains > 0 && chain_ok == chains;
}

void c4(Context& ctx, CriterionResult& r) {
    r.claim = "radial family n = 3, k = 0.5, a in {0.1, 0.3, 0.5, 0.7}";
    r.tolerance = "tends_to_zero, exponent within 2%, identities < 1e-5, < 10 s";
    r.budget_seconds = 10.0;
    const auto rep = sweep_family(cubic(3, 0.5), {0.1, 0.3, 0.5, 0.7}, 30.0, 1e-10);
    double worst_exp = 0.0, energy = 0.0, flux = 0.0, flux_rel = 0.0;
    bool ok = rep.all_tend_to_zero && rep.exponents_agree;
    for (const auto& e : rep.entries) {
        if (!e.error.empty() || !e.run || !e.fit) {
            ok = false;
            continue;
        }
        worst_exp = std::max(worst_exp, std::abs(e.fit->exponent - rep.alpha_minus) / rep.alpha_minus);
        energy = std::max(energy, e.energy_residual);
        flux = std::max(flux, e.flux_residual);
        flux_rel = std::max(flux_rel, e.flux_relative_residual);
        ctx.keep("radial a=" + fixed(e.a, 1), e.run->profile);
    }
    std::ostringstream m;
    m << "alpha_- " << fixed(rep.alpha_minus, 6) << ", worst exponent error " << fixed(100 * worst_exp, 3)
      << "%, energy " << sci(energy) << ", flux [1,5] " << sci(flux) << ", flux relative [1,29] " << sci(flux_rel);
    r.measured = m.str();
    r.passed = ok && worst_exp < 0.02 && energy < 1e-5 && flux < 1e-5 && flux_rel < 1e-5;
}

void c5(Context& ctx, CriterionResult& r) {
    r.claim = "unstable manifold of (-1,0) passes above (1,0)";
    r.tolerance = "passes_above for (2,2/9), (3,1), (4,2), < 10 s";
    r.budget_seconds = 10.0;
    bool ok = true;
    std::ostringstream m;
    for (const auto& [n, k] : std::vector<std::pair<int, double>>{{2, 2.0 / 9.0}, {3, 1.0}, {4, 2.0}}) {
        const auto p = cubic(n, k);
        const auto cert = nonexistence_certificate(p, 1e-10);
        ok = ok && cert.certified && cert.orbit.outcome == OrbitOutcome::passes_above;
        m << "n=" << n << ": " << to_string(cert.orbit.outcome) << " (v=" << fixed(cert.v_at_crossing, 3) << ")  ";
        ctx.keep("certificate n=" + std::to_string(n), orbit_profile(cert.orbit, p));
    }
    r.measured = m.str();
    r.passed = ok;
}

void c6(Context& ctx, CriterionResult& r) {
    r.claim = "hyperbolic connection n = 2, k = 2/9, T = 20";
    r.tolerance = "agreement < 1e-6, monotone, |U(0)| < 1e-8, tail within 3% of -4/3, Richardson in [3.5, 4.5], < 30 s";
    r.budget_seconds = 30.0;
    const auto p = cubic(2, 2.0 / 9.0);
    const int N = 16000;
    const auto mini = minimize_profile(p, 20.0, N, 1e-9);
    const auto newt = newton_profile(p, 20.0, N, 1e-10, mini.profile);
    ctx.hyperbolic = newt.profile;
    double diff = 0.0;
    for (std::size_t i = 0; i < mini.profile.size(); ++i) {
        diff = std::max(diff, std::abs(mini.profile.values[i] - newt.profile.values[i]));
    }
    const bool mono = check_monotone(mini.profile).monotone && check_monotone(newt.profile).monotone;
    const double u0 = std::max(std::abs(mini.profile.value_at(0.0)), std::abs(newt.profile.value_at(0.0)));
    const auto tails = tail_rates(newt);
    const double tail_err = std::max(std::abs(tails.right_rate - tails.predicted), std::abs(tails.left_rate - tails.predicted)) /
                            std::abs(tails.predicted);
    const auto rich = richardson_ratio(p, 20.0, 2000, 1e-10);
    ctx.keep("hyperbolic minimizer", mini.profile);
    ctx.keep("hyperbolic newton", newt.profile);
    std::ostringstream m;
    m << "diff " << sci(diff) << ", monotone " << (mono ? "yes" : "no") << ", |U(0)| " << sci(u0) << ", tails "
      << fixed(tails.right_rate) << "/" << fixed(tails.left_rate) << " vs " << fixed(tails.predicted) << ", Richardson "
      << fixed(rich.ratio, 4);
    r.measured = m.str();
    r.passed = diff < 1e-6 && mono && u0 < 1e-8 && tail_err < 0.03 && rich.ratio >= 3.5 && rich.ratio <= 4.5;
}

void c7(Context& ctx, CriterionResult& r) {
    const int Nr = ctx.quick ? 300 : 600;
    const int Nt = ctx.quick ? 256 : 512;
    r.claim = "disk symmetry, R = 12, " + std::to_string(Nr) + " x " + std::to_string(Nt) + ", step data";
    r.tolerance = "deviation < 5e-3 and halved by refinement, trace-data profile gap < 5e-3, < 300 s";
    r.budget_seconds = 300.0;
    const auto p = cubic(2, 2.0 / 9.0);
    const std::vector<double> levels{0.0, 1.0, -1.0, 2.0, -2.0};
    const auto coarse = make_disk_grid(12.0, Nr / 2, Nt / 2, ThetaLattice::clustered);
    const auto fine = make_disk_grid(12.0, Nr, Nt, ThetaLattice::clustered);
    const auto step_c = solve_disk(p, hh_step_boundary(), coarse, 1e-10);
    const auto step_f = solve_disk(p, hh_step_boundary(), fine, 1e-10);
    const double dev_c = symmetry_deviation(step_c, levels);
    const double dev_f = symmetry_deviation(step_f, levels);
    const auto& U = hyperbolic_profile(ctx);
    const auto trace = profile_trace_boundary(U);
    const auto tr_c = solve_disk(p, trace, coarse, 1e-10);
    const auto tr_f = solve_disk(p, trace, fine, 1e-10);
    const double gap = compare_with_profile(tr_f, U);
    const double tdev_c = symmetry_deviation(tr_c, levels);
    const double tdev_f = symmetry_deviation(tr_f, levels);
    std::ostringstream m;
    m << "step deviation " << sci(dev_c) << " -> " << sci(dev_f) << " (ratio " << fixed(dev_c / dev_f, 2)
      << "), trace gap " << sci(gap) << "; trace deviation " << sci(tdev_c) << " -> " << sci(tdev_f) << " (ratio "
      << fixed(tdev_c / tdev_f, 2) << ")";
    r.measured = m.str();
    r.passed = dev_f < 5e-3 && dev_c / dev_f >= 2.0 && gap < 5e-3;
}

void c8(Context&, CriterionResult& r) {
    r.claim = "constant boundary data gives the constant solution";
    r.tolerance = "0 Newton corrections and u == c for c = +1, -1, 0, < 10 s";
    r.budget_seconds = 10.0;
    const auto p = cubic(2, 2.0 / 9.0);
    const auto grid = make_disk_grid(12.0, 200, 128, ThetaLattice::clustered);
    bool ok = true;
    std::ostringstream m;
    for (double c : {1.0, -1.0, 0.0}) {
        const auto sol = solve_disk(p, constant_boundary(c), grid, 1e-10);
        double dev = 0.0;
        for (double v : sol.values) dev = std::max(dev, std::abs(v - c));
        ok = ok && sol.newton_iterations == 0 && dev == 0.0;
        m << "c=" << fixed(c, 0) << ": " << sol.newton_iterations << " corrections, sup|u-c| " << sci(dev) << "  ";
    }
    r.measured = m.str();
    r.passed = ok;
}

void c9(Context& ctx, CriterionResult& r) {
    r.claim = "perturbative families at amplitude 0.02";
    r.tolerance = "ratio < 0.5, exponent within 2% of 1/3, spread > 10 tol, cusp form < 1e-10, < 300 s each";
    r.budget_seconds = 600.0;
    const auto p = cubic(2, 2.0 / 9.0);
    const double tol = 1e-10;
    const double alpha = 1.0 / 3.0;
    const auto t0 = std::chrono::steady_clock::now();
    const auto ell = contract_elliptic(p, {{1, 1.0, 0.0}}, 0.02, {}, tol);
    const auto t1 = std::chrono::steady_clock::now();
    StripGrid sg;
    sg.base_profile = std::make_shared<const Profile1D>(heteroclinic_base(ctx));
    const auto par = contract_parabolic(p, {{1, 1.0, 0.0}}, 0.02, sg, tol);
    const auto t2 = std::chrono::steady_clock::now();
    const double s_ell = std::chrono::duration<double>(t1 - t0).count();
    const double s_par = std::chrono::duration<double>(t2 - t1).count();
    const double e_ell = std::abs(ell.leading_fit.exponent - alpha) / alpha;
    const double e_par = std::abs(par.leading_fit.exponent - alpha) / alpha;
    std::ostringstream m;
    m << "elliptic: ratio " << sci(ell.max_ratio) << ", exponent " << fixed(ell.leading_fit.exponent) << ", spread "
      << sci(ell.angular_spread) << "; parabolic: ratio " << sci(par.max_ratio) << ", exponent "
      << fixed(par.leading_fit.exponent) << ", spread " << sci(par.angular_spread) << ", cusp " << sci(par.cusp_form_defect);
    r.measured = m.str();
    r.passed = ell.max_ratio < 0.5 && par.max_ratio < 0.5 && e_ell < 0.02 && e_par < 0.02 &&
               ell.angular_spread > 10 * tol && par.angular_spread > 10 * tol && par.cusp_form_defect < 1e-10 &&
               s_ell < 300.0 && s_par < 300.0;
}

void c10(Context& ctx, CriterionResult& r) {
    r.claim = "energy identity on every profile produced above";
    r.tolerance = "< 1e-5 each";
    r.budget_seconds = 0.0;
    double worst = 0.0;
    std::string worst_label = "none";
    for (const auto& [label, prof] : ctx.profiles) {
        const double e = energy_identity_residual(prof);
        if (e >= worst) {
            worst = e;
            worst_label = label;
        }
    }
    r.measured = std::to_string(ctx.profiles.size()) + " profiles, worst " + sci(worst) + " (" + worst_label + ")";
    r.passed = !ctx.profiles.empty() && worst < 1e-5;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const VerifyOptions& opts) {
    using Fn = void (*)(Context&, CriterionResult&);
    const std::vector<Fn> all{c1, c2, c3, c4, c5, c6, c7, c8, c9, c10};
    Context ctx;
    ctx.quick = opts.quick;
    std::vector<CriterionResult> out;
    for (std::size_t i = 0; i < all.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), id) == opts.only.end() && id != 10) {
            continue;
        }
        CriterionResult r;
        r.id = id;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            all[i](ctx, r);
        } catch (const std::exception& e) {
            r.passed = false;
            r.measured = std::string("error: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (r.budget_seconds > 0.0 && r.seconds > r.budget_seconds) r.passed = false;
        if (opts.on_result) opts.on_result(r);
        out.push_back(std::move(r));
    }
    return out;
}

std::string format_result_line(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ". " << r.claim << ": " << r.measured << " (tolerance "
       << r.tolerance << ", " << fixed(r.seconds, 2) << " s)";
    return os.str();
}

}  // namespace hypac
