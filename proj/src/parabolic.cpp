#include "hypac/parabolic.hpp"

#include "hypac/error.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hypac {

std::string_view to_string(FixedPointKind kind) noexcept {
    switch (kind) {
        case FixedPointKind::saddle: return "saddle";
        case FixedPointKind::unstable_node: return "unstable_node";
        case FixedPointKind::unstable_spiral: return "unstable_spiral";
    }
    return "unknown";
}

std::string_view to_string(Branch branch) noexcept {
    switch (branch) {
        case Branch::unstable_up: return "unstable_up";
        case Branch::unstable_down: return "unstable_down";
        case Branch::stable_backward_up: return "stable_backward_up";
        case Branch::stable_backward_down: return "stable_backward_down";
    }
    return "unknown";
}

std::string_view to_string(OrbitOutcome outcome) noexcept {
    switch (outcome) {
        case OrbitOutcome::crosses_axis: return "crosses_axis";
        case OrbitOutcome::converges_to: return "converges_to";
        case OrbitOutcome::passes_above: return "passes_above";
        case OrbitOutcome::escapes: return "escapes";
        case OrbitOutcome::reached_point: return "reached_point";
        case OrbitOutcome::max_time: return "max_time";
    }
    return "unknown";
}

namespace {

FixedPointInfo analyse(const ProblemParams& params, double u_star) {
    FixedPointInfo fp;
    fp.location = {u_star, 0.0};
    const double b = params.n - 1.0;
    const double fp1 = params.potential.fprime(u_star);
    // mu^2 - b mu - f'(u*) = 0
    const double disc = b * b + 4.0 * fp1;
    if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        // Stable evaluation of both roots.
        const double q = 0.5 * (b + std::copysign(sq, b));
        double r1 = q;
        double r2 = q != 0.0 ? -fp1 / q : 0.5 * (b - sq);
        if (r1 > r2) std::swap(r1, r2);
        fp.eigenvalues = {std::complex<double>(r1, 0.0), std::complex<double>(r2, 0.0)};
        fp.real_eigenvalues = true;
        for (int i = 0; i < 2; ++i) {
            const double mu = fp.eigenvalues[static_cast<std::size_t>(i)].real();
            const double nrm = std::hypot(1.0, mu);
            fp.eigenvectors[static_cast<std::size_t>(i)] = {1.0 / nrm, mu / nrm};
        }
    } else {
        const double im = 0.5 * std::sqrt(-disc);
        fp.eigenvalues = {std::complex<double>(0.5 * b, -im), std::complex<double>(0.5 * b, im)};
        fp.real_eigenvalues = false;
    }
    if (-fp1 < 0.0) {
        fp.kind = FixedPointKind::saddle;
    } else {
        fp.kind = disc >= 0.0 ? FixedPointKind::unstable_node : FixedPointKind::unstable_spiral;
    }
    return fp;
}

double norm(const ode::Vec2& a) { return std::hypot(a[0], a[1]); }
double dist(const ode::Vec2& a, const ode::Vec2& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

ode::Rhs phase_rhs(const ProblemParams& params) {
    const double b = params.n - 1.0;
    const auto& f = params.potential.f;
    return [b, &f](double, const ode::Vec2& y) -> ode::Vec2 { return {y[1], b * y[1] + f(y[0])}; };
}

}  // namespace

std::vector<FixedPointInfo> classify_fixed_points(const ProblemParams& params) {
    return {analyse(params, -1.0), analyse(params, 0.0), analyse(params, 1.0)};
}

PhaseOrbit shoot_manifold(const ProblemParams& params, const FixedPointInfo& fp, Branch branch,
                          double offset, double xi_span, double tol, const ShootOptions& opts) {
    if (!(offset >= 1e-9 && offset <= 1e-4)) {
        throw Error(ErrorCode::invalid_argument, "offset must lie in [1e-9, 1e-4]");
    }
    if (!(xi_span > 0.0)) throw Error(ErrorCode::invalid_argument, "xi_span must be positive");
    const bool stable = branch == Branch::stable_backward_up || branch == Branch::stable_backward_down;
    const bool up = branch == Branch::unstable_up || branch == Branch::stable_backward_up;
    if (!fp.real_eigenvalues) {
        throw Error(ErrorCode::eigenvector_undefined,
                    "fixed point is a spiral; no real eigen-direction to shoot along");
    }
    const double mu_lo = fp.eigenvalues[0].real();
    const double mu_hi = fp.eigenvalues[1].real();
    std::size_t which;
    if (stable) {
        if (!(mu_lo < 0.0)) {
            throw Error(ErrorCode::eigenvector_undefined, "fixed point has no stable direction");
        }
        which = 0;
    } else {
        if (!(mu_hi > 0.0)) {
            throw Error(ErrorCode::eigenvector_undefined, "fixed point has no unstable direction");
        }
        // For a node take the slow direction, the generic way out.
        which = mu_lo > 0.0 ? 0 : 1;
    }
    ode::Vec2 e = fp.eigenvectors[which];
    if ((e[0] > 0.0) != up) e = {-e[0], -e[1]};
    const ode::Vec2 y0{fp.location[0] + offset * e[0], fp.location[1] + offset * e[1]};

    const auto fps = classify_fixed_points(params);
    std::vector<ode::Event> events;
    std::vector<OrbitOutcome> kinds;
    std::vector<ode::Vec2> targets;
    const double dir = stable ? -1.0 : 1.0;

    if (opts.detect_axis) {
        events.push_back({[](double, const ode::Vec2& y) { return y[1]; }, 0,
                          [](double, const ode::Vec2& y) { return std::abs(y[0]) < 1.0; }});
        kinds.push_back(OrbitOutcome::crosses_axis);
        targets.push_back({});
    }
    if (opts.detect_convergence) {
        for (const auto& other : fps) {
            if (dist(other.location, fp.location) == 0.0) continue;
            const ode::Vec2 c = other.location;
            const double r = opts.ball_radius;
            events.push_back({[c, r](double, const ode::Vec2& y) { return dist(y, c) - r; }, -1, {}});
            kinds.push_back(OrbitOutcome::converges_to);
            targets.push_back(c);
        }
    }
    if (opts.detect_above && fp.location[0] < 1.0) {
        // u rising through 1 in xi; along a reversed run that is a falling crossing.
        events.push_back({[](double, const ode::Vec2& y) { return y[0] - 1.0; },
                          static_cast<int>(dir),
                          [](double, const ode::Vec2& y) { return y[1] > 0.0; }});
        kinds.push_back(OrbitOutcome::passes_above);
        targets.push_back({});
    }
    if (opts.detect_escape) {
        const double r = opts.escape_radius;
        events.push_back({[r](double, const ode::Vec2& y) { return norm(y) - r; }, +1, {}});
        kinds.push_back(OrbitOutcome::escapes);
        targets.push_back({});
    }
    if (opts.stop_radius) {
        const ode::Vec2 c = opts.stop_center;
        const double r = *opts.stop_radius;
        events.push_back({[c, r](double, const ode::Vec2& y) { return dist(y, c) - r; }, -1, {}});
        kinds.push_back(OrbitOutcome::reached_point);
        targets.push_back(c);
    }

    ode::Options o;
    o.rtol = tol;
    o.atol = tol * opts.atol_factor;
    o.h_max = opts.h_max;
    const ode::Result res = ode::integrate(phase_rhs(params), 0.0, y0, dir * xi_span, o, {}, events);

    PhaseOrbit orbit;
    orbit.origin_fp = fp.location;
    orbit.branch = branch;
    orbit.offset = offset;
    for (const auto& s : res.trajectory.steps) {
        orbit.xi.push_back(s.t);
        orbit.states.push_back(s.y);
    }
    if (stable) {
        std::reverse(orbit.xi.begin(), orbit.xi.end());
        std::reverse(orbit.states.begin(), orbit.states.end());
    }
    if (res.event) {
        const std::size_t k = *res.event;
        orbit.outcome = kinds[k];
        orbit.event_xi = res.event_state.t;
        orbit.event_state = res.event_state.y;
        if (orbit.outcome == OrbitOutcome::crosses_axis) orbit.crossing_u = res.event_state.y[0];
        if (orbit.outcome == OrbitOutcome::converges_to) {
            orbit.target_fp = targets[k];
            for (const auto& other : fps) {
                if (dist(other.location, targets[k]) != 0.0) continue;
                const ode::Vec2 d{res.event_state.y[0] - targets[k][0],
                                  res.event_state.y[1] - targets[k][1]};
                if (other.real_eigenvalues) {
                    // Forward runs arrive along a stable direction, reversed
                    // runs along an unstable one; report the better match.
                    double best = 0.0;
                    for (const auto& ev : other.eigenvectors) {
                        best = std::max(best, std::abs(d[0] * ev[0] + d[1] * ev[1]) / norm(d));
                    }
                    orbit.alignment = best;
                }
            }
        }
        if (orbit.outcome == OrbitOutcome::reached_point) orbit.target_fp = targets[k];
    } else {
        orbit.outcome = OrbitOutcome::max_time;
    }
    return orbit;
}

Profile1D orbit_profile(const PhaseOrbit& orbit, const ProblemParams& params) {
    Profile1D p;
    p.chart = Chart::log_x_xi;
    p.params = params;
    for (std::size_t i = 0; i < orbit.xi.size(); ++i) {
        if (!p.grid.empty() && !(orbit.xi[i] > p.grid.back())) continue;
        p.grid.push_back(orbit.xi[i]);
        p.values.push_back(orbit.states[i][0]);
        p.derivs.push_back(orbit.states[i][1]);
    }
    return p;
}

HeteroclinicResult heteroclinic_profile(const ProblemParams& params, double tol,
                                        const HeteroclinicOptions& opts) {
    if (!(params.potential.lambda > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "need lambda = -f'(0) > 0");
    }
    if (opts.target_sign != 1 && opts.target_sign != -1) {
        throw Error(ErrorCode::invalid_argument, "target_sign must be +1 or -1");
    }
    const auto fps = classify_fixed_points(params);
    const FixedPointInfo& saddle = opts.target_sign > 0 ? fps[2] : fps[0];
    const Branch branch = opts.target_sign > 0 ? Branch::stable_backward_down : Branch::stable_backward_up;

    ShootOptions so;
    so.detect_axis = false;
    so.detect_convergence = false;
    so.detect_above = false;
    so.stop_radius = opts.stop_radius;
    so.stop_center = {0.0, 0.0};

    HeteroclinicResult out;
    out.orbit = shoot_manifold(params, saddle, branch, opts.offset, opts.xi_span, tol, so);
    if (out.orbit.outcome != OrbitOutcome::reached_point) {
        throw Error(ErrorCode::no_connection, "backward shot from the saddle ended with outcome " +
                                                  std::string(to_string(out.orbit.outcome)));
    }

    // Last crossing of the half value in increasing xi.
    const double half = 0.5 * opts.target_sign;
    const auto& xi = out.orbit.xi;
    const auto& st = out.orbit.states;
    std::optional<std::size_t> cell;
    for (std::size_t i = xi.size() - 1; i > 0; --i) {
        if ((st[i - 1][0] - half) * (st[i][0] - half) <= 0.0) {
            cell = i - 1;
            break;
        }
    }
    if (!cell) throw Error(ErrorCode::no_connection, "connection never reaches the half value");
    const std::size_t c = *cell;
    const ode::Rhs rhs = phase_rhs(params);
    const auto d0 = rhs(xi[c], st[c]);
    const auto d1 = rhs(xi[c + 1], st[c + 1]);
    auto g = [&](double s) {
        return ode::hermite(xi[c], st[c][0], d0[0], xi[c + 1], st[c + 1][0], d1[0], s) - half;
    };
    double shift;
    if (g(xi[c]) == 0.0) {
        shift = xi[c];
    } else {
        std::uintmax_t iters = 200;
        auto tolf = [](double a, double b) { return std::abs(a - b) <= 1e-14 * (1.0 + std::abs(a)); };
        const auto br = boost::math::tools::toms748_solve(g, xi[c], xi[c + 1], tolf, iters);
        shift = 0.5 * (br.first + br.second);
    }
    out.shift = shift;

    // Second pass lands exactly on shift + j * dxi.
    const double dxi = opts.dxi;
    const double t_end = xi.front();
    std::vector<double> outputs;
    for (long j = static_cast<long>(std::floor(-shift / dxi));; --j) {
        const double t = shift + static_cast<double>(j) * dxi;
        if (t < t_end) break;
        if (t <= 0.0) outputs.push_back(t);
    }
    ode::Vec2 e = saddle.eigenvectors[0];
    const bool up = branch == Branch::stable_backward_up;
    if ((e[0] > 0.0) != up) e = {-e[0], -e[1]};
    const ode::Vec2 y0{saddle.location[0] + opts.offset * e[0], saddle.location[1] + opts.offset * e[1]};
    ode::Options o;
    o.rtol = tol;
    o.atol = tol * 1e-2;
    o.h_max = so.h_max;
    const double r_stop = opts.stop_radius;
    std::vector<ode::Event> events{
        {[r_stop](double, const ode::Vec2& y) { return norm(y) - r_stop; }, -1, {}}};
    const ode::Result res = ode::integrate(rhs, 0.0, y0, -opts.xi_span, o, outputs, events);

    Profile1D& p = out.xi_profile;
    p.chart = Chart::log_x_xi;
    p.params = params;
    for (auto it = res.samples.rbegin(); it != res.samples.rend(); ++it) {
        p.grid.push_back(it->t - shift);
        p.values.push_back(it->y[0]);
        p.derivs.push_back(it->y[1]);
    }
    // Snap the node that was placed on the half value to exactly 0 in xi.
    for (auto& s : p.grid) {
        if (std::abs(s) < 1e-9) s = 0.0;
    }
    Profile1D& q = out.x_profile;
    q.chart = Chart::halfspace_x;
    q.params = params;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double x = std::exp(p.grid[i]);
        q.grid.push_back(x);
        q.values.push_back(p.values[i]);
        q.derivs.push_back(p.derivs[i] / x);
    }
    return out;
}

double explicit_solution_residual(int n, bool flipped_sign) {
    if (n < 2) throw Error(ErrorCode::invalid_argument, "dimension n must be >= 2");
    const double a = (n - 1.0) / 3.0;
    const double k = 2.0 * (n - 1.0) * (n - 1.0) / 9.0;
    constexpr int points = 2000;
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
        const double xi = -20.0 + 40.0 * i / (points - 1);
        const double s = std::exp(a * xi);  // x^a
        const double u = s / (1.0 + s);
        // x u' = a s / (1+s)^2;  x^2 u'' = a^2 s (1-s) / (1+s)^3 - a s / (1+s)^2
        const double op = 1.0 + s;
        const double xu1 = a * s / (op * op);
        const double x2u2 = a * a * s * (1.0 - s) / (op * op * op) - xu1;
        const double f = flipped_sign ? k * u * (1.0 - u * u) : k * u * (u * u - 1.0);
        worst = std::max(worst, std::abs(x2u2 + (2.0 - n) * xu1 - f));
    }
    return worst;
}

CertificateReport nonexistence_certificate(const ProblemParams& params, double tol, double offset) {
    const auto fps = classify_fixed_points(params);
    CertificateReport rep;
    ShootOptions so;
    so.h_max = 0.002;  // the orbit doubles as a quadrature grid for the identity
    rep.orbit = shoot_manifold(params, fps[0], Branch::unstable_up, offset, 400.0, tol, so);
    const auto& o = rep.orbit;
    rep.certified = o.outcome == OrbitOutcome::passes_above;
    if (o.outcome == OrbitOutcome::passes_above) rep.v_at_crossing = o.event_state[1];

    const Profile1D prof = orbit_profile(o, params);
    std::vector<double> v2(prof.size());
    for (std::size_t i = 0; i < prof.size(); ++i) v2[i] = prof.derivs[i] * prof.derivs[i];
    rep.dissipation = -(params.n - 1.0) * simpson(prof.grid, v2);
    const double vs = prof.derivs.front();
    const double ve = prof.derivs.back();
    rep.kinetic_gain = 0.5 * ve * ve - 0.5 * vs * vs;
    rep.potential_jump = params.potential.F(prof.values.back()) - params.potential.F(prof.values.front());
    rep.identity_residual = energy_identity_residual(prof);
    return rep;
}

ThresholdSample connection_min_u(int n, double k) {
    const ProblemParams params = make_params(n, cubic_potential(k));
    const auto fps = classify_fixed_points(params);
    const FixedPointInfo& saddle = fps[2];
    ode::Vec2 e = saddle.eigenvectors[0];
    if (e[0] > 0.0) e = {-e[0], -e[1]};
    constexpr double offset = 1e-8;
    const ode::Vec2 y0{1.0 + offset * e[0], offset * e[1]};
    ode::Options o;
    o.rtol = 1e-10;
    o.atol = 0.0;
    o.h_max = 1.0;
    std::vector<ode::Event> events{
        {[](double, const ode::Vec2& y) { return std::max(std::abs(y[0]), std::abs(y[1])) - 1e-290; },
         -1,
         {}}};
    const ode::Result res = ode::integrate(phase_rhs(params), 0.0, y0, -1e5, o, {}, events);
    if (!res.event) {
        std::ostringstream os;
        os << "connection for k = " << k << " did not reach the origin";
        throw Error(ErrorCode::no_connection, os.str());
    }
    ThresholdSample s;
    s.k = k;
    s.min_u = 1.0;
    for (const auto& st : res.trajectory.steps) s.min_u = std::min(s.min_u, st.y[0]);
    s.positive = s.min_u > 0.0;
    return s;
}

ThresholdReport monotonicity_threshold(int n, std::pair<double, double> k_range, double tol_k) {
    if (!(tol_k >= 1e-6)) throw Error(ErrorCode::invalid_argument, "tol_k must be >= 1e-6");
    auto [lo, hi] = k_range;
    if (!(lo > 0.0 && hi > lo)) throw Error(ErrorCode::invalid_argument, "need 0 < k_lo < k_hi");
    ThresholdReport rep;
    const ThresholdSample s_lo = connection_min_u(n, lo);
    const ThresholdSample s_hi = connection_min_u(n, hi);
    rep.samples = {s_lo, s_hi};
    if (s_lo.positive == s_hi.positive) {
        std::ostringstream os;
        os << "min u has the same sign at k = " << lo << " and k = " << hi;
        throw Error(ErrorCode::bracket_invalid, os.str());
    }
    // Orient so that lo is the positive end.
    if (!s_lo.positive) std::swap(lo, hi);
    while (std::abs(hi - lo) > tol_k) {
        const double mid = 0.5 * (lo + hi);
        const ThresholdSample s = connection_min_u(n, mid);
        rep.samples.push_back(s);
        (s.positive ? lo : hi) = mid;
    }
    rep.k_positive = lo;
    rep.k_negative = hi;
    rep.gamma = 0.5 * (lo + hi);
    rep.node_spiral_transition = 0.25 * (n - 1.0) * (n - 1.0);
    rep.gap = rep.node_spiral_transition - rep.gamma;
    return rep;
}

}  // namespace hypac
