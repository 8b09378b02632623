#include "hypac/hyperbolic.hpp"

#include "hypac/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace hypac {

std::string_view to_string(BvpMethod method) noexcept {
    return method == BvpMethod::minimize ? "minimize" : "newton";
}

namespace {

void check_grid_args(double T, int N) {
    if (!(T >= 5.0)) throw Error(ErrorCode::invalid_argument, "need T >= 5");
    if (N < 200 || N % 2 != 0) throw Error(ErrorCode::invalid_argument, "need even N >= 200");
}

std::vector<double> make_grid(double T, int N) {
    std::vector<double> t(static_cast<std::size_t>(N) + 1);
    const double h = 2.0 * T / N;
    for (int i = 0; i <= N; ++i) t[static_cast<std::size_t>(i)] = -T + i * h;
    t.front() = -T;
    t[static_cast<std::size_t>(N / 2)] = 0.0;
    t.back() = T;
    return t;
}

double log_cosh(double t) {
    const double a = std::abs(t);
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

// Cell integrals of cosh^{n-1}, divided by their maximum; returns log of the max.
double cell_weights(const std::vector<double>& t, int n, std::vector<double>& w) {
    static constexpr std::array<double, 4> nodes{-0.8611363115940526, -0.3399810435848563,
                                                 0.3399810435848563, 0.8611363115940526};
    static constexpr std::array<double, 4> weights{0.3478548451374538, 0.6521451548625461,
                                                   0.6521451548625461, 0.3478548451374538};
    const std::size_t cells = t.size() - 1;
    std::vector<double> logw(cells);
    for (std::size_t i = 0; i < cells; ++i) {
        const double a = t[i], b = t[i + 1];
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        std::array<double, 4> terms;
        double mx = -INFINITY;
        for (std::size_t q = 0; q < 4; ++q) {
            terms[q] = std::log(weights[q]) + (n - 1.0) * log_cosh(mid + half * nodes[q]);
            mx = std::max(mx, terms[q]);
        }
        double s = 0.0;
        for (double v : terms) s += std::exp(v - mx);
        logw[i] = std::log(half) + mx + std::log(s);
    }
    const double lmax = *std::max_element(logw.begin(), logw.end());
    w.resize(cells);
    for (std::size_t i = 0; i < cells; ++i) w[i] = std::exp(logw[i] - lmax);
    return lmax;
}

// Solves a tridiagonal system in place (sub a, diag b, super c, rhs d -> solution d).
// Returns the index of a collapsed pivot, or -1.
long thomas(std::vector<double> a, std::vector<double> b, const std::vector<double>& c,
            std::vector<double>& d, double pivot_floor) {
    const std::size_t m = b.size();
    for (std::size_t i = 1; i < m; ++i) {
        if (std::abs(b[i - 1]) <= pivot_floor) return static_cast<long>(i - 1);
        const double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        d[i] -= w * d[i - 1];
    }
    if (std::abs(b[m - 1]) <= pivot_floor) return static_cast<long>(m - 1);
    d[m - 1] /= b[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) d[i] = (d[i] - c[i] * d[i + 1]) / b[i];
    return -1;
}

// Fourth-order derivative samples (one-sided near the ends).
std::vector<double> derivative_samples(const std::vector<double>& u, double h) {
    const std::size_t m = u.size();
    std::vector<double> d(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (i >= 2 && i + 2 < m) {
            d[i] = (-u[i + 2] + 8.0 * u[i + 1] - 8.0 * u[i - 1] + u[i - 2]) / (12.0 * h);
        } else if (i < 2) {
            d[i] = (-25.0 * u[i] + 48.0 * u[i + 1] - 36.0 * u[i + 2] + 16.0 * u[i + 3] -
                    3.0 * u[i + 4]) / (12.0 * h);
        } else {
            d[i] = (25.0 * u[i] - 48.0 * u[i - 1] + 36.0 * u[i - 2] - 16.0 * u[i - 3] +
                    3.0 * u[i - 4]) / (12.0 * h);
        }
    }
    return d;
}

Profile1D make_profile(const ProblemParams& params, const std::vector<double>& t,
                       const std::vector<double>& u) {
    Profile1D p;
    p.chart = Chart::signed_dist_t;
    p.params = params;
    p.grid = t;
    p.values = u;
    p.derivs = derivative_samples(u, t[1] - t[0]);
    return p;
}

struct Energy {
    const std::vector<double>& w;
    const PotentialSpec& pot;
    double h;

    double value(const std::vector<double>& u) const {
        long double e = 0.0L;
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double d = (u[i + 1] - u[i]) / h;
            e += static_cast<long double>(w[i] * (0.5 * d * d + pot.F(0.5 * (u[i] + u[i + 1]))));
        }
        return static_cast<double>(e);
    }

    // Gradient with respect to interior nodes 1..N-1 (entries 0 and N are zero).
    void gradient(const std::vector<double>& u, std::vector<double>& g) const {
        const std::size_t m = u.size();
        std::vector<double> flux(w.size()), src(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) {
            flux[i] = w[i] * (u[i + 1] - u[i]) / h;
            src[i] = 0.5 * w[i] * pot.f(0.5 * (u[i] + u[i + 1]));
        }
        g.assign(m, 0.0);
        for (std::size_t j = 1; j + 1 < m; ++j) {
            g[j] = (flux[j - 1] - flux[j]) / h + src[j - 1] + src[j];
        }
    }
};

double fd_residual(const std::vector<double>& t, const std::vector<double>& u, int n,
                   const PotentialSpec& pot, std::vector<double>* out = nullptr) {
    const double h = t[1] - t[0];
    double worst = 0.0;
    if (out) out->assign(u.size(), 0.0);
    for (std::size_t j = 1; j + 1 < u.size(); ++j) {
        const double r = (u[j + 1] - 2.0 * u[j] + u[j - 1]) / (h * h) +
                         (n - 1.0) * std::tanh(t[j]) * (u[j + 1] - u[j - 1]) / (2.0 * h) -
                         pot.f(u[j]);
        if (out) (*out)[j] = r;
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

void balance_warning(const PotentialSpec& pot, std::vector<std::string>& warnings) {
    const double b = balanced_wells_check(pot);
    if (std::abs(b) > 1e-8) {
        std::ostringstream os;
        os << "wells are unbalanced: int f = " << b;
        warnings.push_back(os.str());
    }
}

}  // namespace

Profile1D initial_profile(const ProblemParams& params, double T, int N, InitialGuess kind) {
    check_grid_args(T, N);
    const auto t = make_grid(T, N);
    std::vector<double> u(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        switch (kind) {
            case InitialGuess::tanh: u[i] = std::tanh(t[i]); break;
            case InitialGuess::ramp: u[i] = t[i] / T; break;
            case InitialGuess::zero: u[i] = 0.0; break;
        }
    }
    u.front() = -1.0;
    u.back() = 1.0;
    return make_profile(params, t, u);
}

BvpRun minimize_profile(const ProblemParams& params, double T, int N, double tol,
                        const MinimizeOptions& opts) {
    check_grid_args(T, N);
    if (!(tol > 0.0)) throw Error(ErrorCode::invalid_argument, "tol must be positive");
    const auto& pot = params.potential;
    const auto t = make_grid(T, N);
    const double h = t[1] - t[0];
    std::vector<double> w;
    BvpRun run;
    run.T = T;
    run.N = N;
    run.method = BvpMethod::minimize;
    run.log_weight_scale = cell_weights(t, params.n, w);
    balance_warning(pot, run.warnings);

    const std::size_t m = t.size();
    std::vector<double> nodal(m, 0.0);
    for (std::size_t j = 1; j + 1 < m; ++j) nodal[j] = 0.5 * (w[j - 1] + w[j]);

    // Preconditioner K + f'(1) M on the interior nodes.
    const double c1 = std::max(pot.fprime(1.0), 0.0);
    const std::size_t k = m - 2;
    std::vector<double> pa(k), pb(k), pc(k);
    for (std::size_t j = 1; j + 1 < m; ++j) {
        pa[j - 1] = -w[j - 1] / (h * h);
        pb[j - 1] = (w[j - 1] + w[j]) / (h * h) + c1 * nodal[j];
        pc[j - 1] = -w[j] / (h * h);
    }
    auto precondition = [&](const std::vector<double>& g, std::vector<double>& d) {
        std::vector<double> r(g.begin() + 1, g.end() - 1);
        if (thomas(pa, pb, pc, r, 0.0) >= 0) {
            throw Error(ErrorCode::singular_jacobian, "preconditioner is singular");
        }
        d.assign(m, 0.0);
        std::copy(r.begin(), r.end(), d.begin() + 1);
    };
    auto optimality = [&](const std::vector<double>& g) {
        double worst = 0.0;
        for (std::size_t j = 1; j + 1 < m; ++j) worst = std::max(worst, std::abs(g[j] / nodal[j]));
        return worst;
    };
    auto clip = [](std::vector<double>& u) {
        for (auto& v : u) v = std::clamp(v, -1.0, 1.0);
    };

    const Energy energy{w, pot, h};
    std::vector<double> u = initial_profile(params, T, N, opts.init).values;
    clip(u);
    std::vector<double> g, d, u_prev, g_prev;
    energy.gradient(u, g);
    double e = energy.value(u);
    run.energy_history.push_back(e);
    double alpha = 1.0;
    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        run.optimality = optimality(g);
        if (run.optimality < tol) break;
        precondition(g, d);
        double gd = 0.0;
        for (std::size_t j = 0; j < m; ++j) gd += g[j] * d[j];
        if (!(gd > 0.0)) throw Error(ErrorCode::non_decreasing_energy, "not a descent direction");

        std::vector<double> trial(m);
        double e_trial = e;
        bool accepted = false;
        double a = alpha;
        for (int ls = 0; ls < 60; ++ls, a *= 0.5) {
            for (std::size_t j = 0; j < m; ++j) trial[j] = u[j] - a * d[j];
            clip(trial);
            trial.front() = -1.0;
            trial.back() = 1.0;
            double decrease = 0.0;
            for (std::size_t j = 0; j < m; ++j) decrease += g[j] * (trial[j] - u[j]);
            e_trial = energy.value(trial);
            // Armijo, allowing for rounding in the long sum.
            if (e_trial <= e + 1e-4 * decrease + 1e-15 * std::abs(e)) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            std::ostringstream os;
            os << "line search failed at iteration " << it << " with optimality " << run.optimality;
            throw Error(ErrorCode::non_decreasing_energy, os.str());
        }
        u_prev = u;
        g_prev = g;
        u = trial;
        e = e_trial;
        run.energy_history.push_back(e);
        energy.gradient(u, g);

        // BB1 step in the preconditioned metric: alpha = s'Ps / s'y, with
        // s = -a d in preconditioned units.
        double sy = 0.0, sPs = 0.0;
        std::vector<double> s(m);
        for (std::size_t j = 0; j < m; ++j) s[j] = u[j] - u_prev[j];
        for (std::size_t j = 1; j + 1 < m; ++j) {
            const std::size_t q = j - 1;
            double ps = pb[q] * s[j];
            if (q > 0) ps += pa[q] * s[j - 1];
            if (q + 1 < k) ps += pc[q] * s[j + 1];
            sPs += s[j] * ps;
            sy += s[j] * (g[j] - g_prev[j]);
        }
        alpha = (sy > 0.0 && sPs > 0.0) ? std::clamp(sPs / sy, 1e-6, 1e6) : 1.0;
    }
    if (it >= opts.max_iterations) {
        std::ostringstream os;
        os << "minimizer stopped after " << it << " iterations with optimality " << run.optimality;
        throw Error(ErrorCode::max_iterations, os.str());
    }
    run.iterations = it;
    run.energy = e;
    run.profile = make_profile(params, t, u);
    run.residual = fd_residual(t, u, params.n, pot);
    return run;
}

BvpRun newton_profile(const ProblemParams& params, double T, int N, double tol,
                      const Profile1D& init, const NewtonOptions& opts) {
    check_grid_args(T, N);
    if (!(tol > 0.0)) throw Error(ErrorCode::invalid_argument, "tol must be positive");
    const auto& pot = params.potential;
    const auto t = make_grid(T, N);
    const double h = t[1] - t[0];
    const std::size_t m = t.size();
    std::vector<double> u(m);
    for (std::size_t i = 0; i < m; ++i) u[i] = init.value_at(t[i]);
    u.front() = -1.0;
    u.back() = 1.0;

    BvpRun run;
    run.T = T;
    run.N = N;
    run.method = BvpMethod::newton;
    balance_warning(pot, run.warnings);

    std::vector<double> r;
    double res = fd_residual(t, u, params.n, pot, &r);
    const double m1 = params.n - 1.0;
    int it = 0;
    for (; res >= tol; ++it) {
        if (it >= opts.max_iterations) {
            std::ostringstream os;
            os << "Newton stopped after " << it << " iterations with residual " << res;
            throw Error(ErrorCode::max_iterations, os.str());
        }
        const std::size_t k = m - 2;
        std::vector<double> a(k), b(k), c(k), d(k);
        for (std::size_t j = 1; j + 1 < m; ++j) {
            const double adv = m1 * std::tanh(t[j]) / (2.0 * h);
            a[j - 1] = 1.0 / (h * h) - adv;
            b[j - 1] = -2.0 / (h * h) - pot.fprime(u[j]);
            c[j - 1] = 1.0 / (h * h) + adv;
            d[j - 1] = -r[j];
        }
        const long bad = thomas(a, b, c, d, 1e-13 * 2.0 / (h * h));
        if (bad >= 0) {
            const double where = t[static_cast<std::size_t>(bad) + 1];
            std::ostringstream os;
            os << "Jacobian pivot collapsed at t = " << where;
            throw SingularJacobianError(where, os.str());
        }
        double lambda = 1.0;
        bool accepted = false;
        std::vector<double> trial(m), r_trial;
        for (int half = 0; half <= opts.max_halvings; ++half, lambda *= 0.5) {
            for (std::size_t j = 0; j < m; ++j) trial[j] = u[j];
            for (std::size_t j = 1; j + 1 < m; ++j) trial[j] += lambda * d[j - 1];
            const double res_trial = fd_residual(t, trial, params.n, pot, &r_trial);
            if (std::isfinite(res_trial) && res_trial < res) {
                u.swap(trial);
                r.swap(r_trial);
                res = res_trial;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            std::ostringstream os;
            os << "Newton damping exhausted at iteration " << it << " with residual " << res;
            throw Error(ErrorCode::divergence, os.str());
        }
    }
    run.iterations = it;
    run.residual = res;
    run.profile = make_profile(params, t, u);
    std::vector<double> w;
    run.log_weight_scale = cell_weights(t, params.n, w);
    run.energy = Energy{w, pot, h}.value(u);
    return run;
}

MonotoneCheck check_monotone(const Profile1D& profile, double slack) {
    MonotoneCheck out;
    for (std::size_t i = 1; i < profile.size(); ++i) {
        if (profile.values[i] - profile.values[i - 1] < -slack) {
            out.monotone = false;
            out.first_violation = profile.grid[i];
            break;
        }
    }
    return out;
}

std::optional<double> forbidden_extremum(const Profile1D& profile) {
    const auto& u = profile.values;
    for (std::size_t i = 1; i + 1 < u.size(); ++i) {
        const bool local_min = u[i] < u[i - 1] && u[i] < u[i + 1];
        const bool local_max = u[i] > u[i - 1] && u[i] > u[i + 1];
        if ((local_min && u[i] > 0.0) || (local_max && u[i] < 0.0)) return profile.grid[i];
    }
    return std::nullopt;
}

namespace {

double zero_location(const Profile1D& p) {
    for (std::size_t i = 1; i < p.size(); ++i) {
        const double a = p.values[i - 1], b = p.values[i];
        if (a == 0.0) return p.grid[i - 1];
        if ((a < 0.0) != (b < 0.0)) return p.grid[i - 1] + (p.grid[i] - p.grid[i - 1]) * a / (a - b);
    }
    throw Error(ErrorCode::no_connection, "profile has no zero");
}

}  // namespace

StabilityReport continuation_in_T(const ProblemParams& params, const std::vector<double>& T_list,
                                  int N_per_unit, double tol) {
    for (std::size_t i = 1; i < T_list.size(); ++i) {
        if (!(T_list[i] > T_list[i - 1])) throw Error(ErrorCode::invalid_argument, "T_list must increase");
    }
    StabilityReport rep;
    std::optional<Profile1D> prev;
    for (double T : T_list) {
        const int N = 2 * static_cast<int>(std::lround(T * N_per_unit / 2.0));
        const BvpRun run = minimize_profile(params, T, N, tol);
        StabilityRow row;
        row.T = T;
        row.u_at_zero = run.profile.value_at(0.0);
        row.zero_location = zero_location(run.profile);
        if (prev) {
            for (std::size_t i = 0; i < run.profile.size(); ++i) {
                const double s = run.profile.grid[i];
                if (s < -5.0 || s > 5.0) continue;
                row.sup_change = std::max(row.sup_change, std::abs(run.profile.values[i] - prev->value_at(s)));
            }
        }
        rep.rows.push_back(row);
        prev = run.profile;
    }
    rep.zeros_settle = true;
    rep.changes_decrease = true;
    rep.center_bounded = true;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        if (!(std::abs(rep.rows[i].u_at_zero) < 0.5)) rep.center_bounded = false;
        if (i >= 2) {
            const double d1 = std::abs(rep.rows[i - 1].zero_location - rep.rows[i - 2].zero_location);
            const double d2 = std::abs(rep.rows[i].zero_location - rep.rows[i - 1].zero_location);
            if (d2 > d1 + 1e-12) rep.zeros_settle = false;
            if (rep.rows[i].sup_change > rep.rows[i - 1].sup_change + 1e-12) rep.changes_decrease = false;
        }
    }
    return rep;
}

TailRates tail_rates(const BvpRun& run) {
    if (!(run.T >= 15.0)) throw Error(ErrorCode::invalid_argument, "tail_rates needs T >= 15");
    const double T = run.T;
    TailRates out;
    out.right = fit_decay_exponent(run.profile, {T / 3.0, 2.0 * T / 3.0}, DecayTarget::to_plus_one);
    out.left = fit_decay_exponent(run.profile, {-2.0 * T / 3.0, -T / 3.0}, DecayTarget::to_minus_one);
    const double b = run.profile.params.n - 1.0;
    const double fp1 = run.profile.params.potential.fprime(1.0);
    out.predicted = 0.5 * (-b - std::sqrt(b * b + 4.0 * fp1));
    out.right_rate = out.right.slope;
    out.left_rate = -out.left.slope;
    return out;
}

double balanced_wells_check(const PotentialSpec& spec) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(spec.f, -1.0, 1.0, 15, 1e-14);
}

RichardsonReport richardson_ratio(const ProblemParams& params, double T, int N, double tol) {
    RichardsonReport rep;
    std::vector<std::vector<double>> sols;
    for (int mult : {1, 2, 4}) {
        const Profile1D guess = initial_profile(params, T, N * mult, InitialGuess::tanh);
        sols.push_back(newton_profile(params, T, N * mult, tol, guess).profile.values);
    }
    for (std::size_t i = 0; i <= static_cast<std::size_t>(N); ++i) {
        rep.diff_coarse = std::max(rep.diff_coarse, std::abs(sols[0][i] - sols[1][2 * i]));
        rep.diff_fine = std::max(rep.diff_fine, std::abs(sols[1][2 * i] - sols[2][4 * i]));
    }
    rep.ratio = rep.diff_coarse / rep.diff_fine;
    return rep;
}

}  // namespace hypac
