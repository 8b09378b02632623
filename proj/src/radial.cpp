#include "hypac/radial.hpp"

#include "hypac/error.hpp"
#include "hypac/ode.hpp"
#include "hypac/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hypac {

std::string_view to_string(RadialOutcome outcome) noexcept {
    switch (outcome) {
        case RadialOutcome::tends_to_zero: return "tends_to_zero";
        case RadialOutcome::constant_pm1: return "constant_pm1";
        case RadialOutcome::undetermined: return "undetermined";
    }
    return "unknown";
}

namespace {

double coth(double r) {
    if (r > 20.0) return 1.0 + 2.0 / std::expm1(2.0 * r);
    return 1.0 / std::tanh(r);
}

}  // namespace

RadialRun integrate_radial(const ProblemParams& params, double a, double r_max, double tol,
                           const RadialOptions& opts) {
    if (!(std::abs(a) <= 1.0)) throw Error(ErrorCode::invalid_argument, "need |a| <= 1");
    if (!(r_max >= 10.0)) throw Error(ErrorCode::invalid_argument, "need r_max >= 10");
    if (!(tol >= 1e-14 && tol <= 1e-6)) {
        throw Error(ErrorCode::invalid_argument, "tol must lie in [1e-14, 1e-6]");
    }
    if (opts.r0 > 1e-2) {
        std::ostringstream os;
        os << "series start r0 = " << opts.r0 << " exceeds 1e-2";
        throw Error(ErrorCode::series_radius_too_large, os.str());
    }
    if (!(opts.r0 > 0.0) || !(opts.points_per_unit >= 20.0)) {
        throw Error(ErrorCode::invalid_argument, "need r0 > 0 and at least 20 points per unit");
    }

    const int n = params.n;
    const auto& f = params.potential.f;
    const double fa = f(a);
    const double r0 = opts.r0;
    const ode::Vec2 y0{a + fa * r0 * r0 / (2.0 * n), fa * r0 / n};

    const double h = 1.0 / opts.points_per_unit;
    std::vector<double> outputs;
    for (long i = 1;; ++i) {
        const double r = static_cast<double>(i) * h;
        if (r > r_max + 1e-12) break;
        if (r > r0) outputs.push_back(std::min(r, r_max));
    }
    if (outputs.empty() || outputs.back() < r_max) outputs.push_back(r_max);

    const double m = n - 1.0;
    ode::Rhs rhs = [&f, m](double r, const ode::Vec2& y) -> ode::Vec2 {
        return {y[1], f(y[0]) - m * coth(r) * y[1]};
    };
    ode::Options o;
    o.rtol = tol;
    o.atol = tol * 1e-2;
    o.h_max = opts.h_max;
    const ode::Result res = ode::integrate(rhs, r0, y0, r_max, o, outputs);
    if (!res.reached_end || res.samples.size() != outputs.size()) {
        throw Error(ErrorCode::step_failure, "radial integration stopped early");
    }

    RadialRun run;
    run.a = a;
    run.r_max = r_max;
    run.tol = tol;
    Profile1D& p = run.profile;
    p.chart = Chart::geodesic_r;
    p.params = params;
    p.grid = {0.0, r0};
    p.values = {a, y0[0]};
    p.derivs = {0.0, y0[1]};
    for (const auto& s : res.samples) {
        p.grid.push_back(s.t);
        p.values.push_back(s.y[0]);
        p.derivs.push_back(s.y[1]);
    }
    for (const auto& s : res.trajectory.steps) run.max_abs_u = std::max(run.max_abs_u, std::abs(s.y[0]));
    run.max_abs_u = std::max(run.max_abs_u, std::abs(a));

    int prev_sign = 0;
    for (double d : p.derivs) {
        if (std::abs(d) < 1e-14) continue;
        const int s = d > 0 ? 1 : -1;
        if (prev_sign != 0 && s != prev_sign) ++run.derivative_sign_changes;
        prev_sign = s;
    }
    run.outcome = classify_radial_limit(run, opts);
    return run;
}

RadialOutcome classify_radial_limit(const RadialRun& run, const RadialOptions& opts) {
    if (std::abs(run.a) == 1.0) return RadialOutcome::constant_pm1;
    const auto& p = run.profile;
    const double r_cut = run.r_max * (1.0 - opts.tail_fraction);
    bool small = true;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p.grid[i] < r_cut) continue;
        if (std::abs(p.values[i]) >= opts.threshold || std::abs(p.derivs[i]) >= opts.threshold) {
            small = false;
            break;
        }
    }
    return small ? RadialOutcome::tends_to_zero : RadialOutcome::undetermined;
}

SweepReport sweep_family(const ProblemParams& params, const std::vector<double>& a_values,
                         double r_max, double tol, const SweepOptions& opts) {
    for (double a : a_values) {
        if (!(std::abs(a) < 1.0)) throw Error(ErrorCode::invalid_argument, "sweep needs |a| < 1");
    }
    SweepReport rep;
    rep.alpha_minus = indicial_roots(params.n, params.potential.lambda).lo;
    rep.entries.resize(a_values.size());

    parallel_for(a_values.size(), [&](std::size_t i) {
        SweepEntry& e = rep.entries[i];
        e.a = a_values[i];
        try {
            e.run = integrate_radial(params, e.a, r_max, tol, opts.radial);
            e.energy_residual = energy_identity_residual(e.run->profile);
            e.flux_residual = flux_identity_residual(e.run->profile, 1.0, 5.0);
            e.flux_relative_residual =
                relative_flux_identity_residual(e.run->profile, 1.0, r_max - 1.0);
            if (e.a == 0.0) {
                e.exponent_ok = true;  // u = 0 has nothing to fit
                return;
            }
            e.fit = fit_decay_exponent(e.run->profile, opts.fit_window, DecayTarget::to_zero);
            e.exponent_ok = std::abs(e.fit->exponent - rep.alpha_minus) <=
                            opts.exponent_rel_tol * rep.alpha_minus;
        } catch (const std::exception& ex) {
            e.error = ex.what();
        }
    });

    rep.all_tend_to_zero = std::all_of(rep.entries.begin(), rep.entries.end(), [](const auto& e) {
        return e.run && e.run->outcome == RadialOutcome::tends_to_zero;
    });
    rep.exponents_agree = std::all_of(rep.entries.begin(), rep.entries.end(),
                                      [](const auto& e) { return e.error.empty() && e.exponent_ok; });
    return rep;
}

}  // namespace hypac
