#include "hypac/ode.hpp"

#include "hypac/error.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hypac::ode {

double hermite(double t0, double y0, double d0, double t1, double y1, double d1, double t) {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * y1 +
           (s3 - s2) * h * d1;
}

double hermite_deriv(double t0, double y0, double d0, double t1, double y1, double d1, double t) {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double s2 = s * s;
    return ((6 * s2 - 6 * s) * y0 + (-6 * s2 + 6 * s) * y1) / h + (3 * s2 - 4 * s + 1) * d0 +
           (3 * s2 - 2 * s) * d1;
}

std::size_t Trajectory::locate(double t) const {
    if (steps.size() < 2) {
        throw Error(ErrorCode::invalid_argument, "trajectory has fewer than two points");
    }
    const bool forward = steps.back().t > steps.front().t;
    const double lo = forward ? steps.front().t : steps.back().t;
    const double hi = forward ? steps.back().t : steps.front().t;
    if (t < lo || t > hi) {
        std::ostringstream os;
        os << "t = " << t << " outside trajectory [" << lo << ", " << hi << "]";
        throw Error(ErrorCode::invalid_argument, os.str());
    }
    auto cmp_fwd = [](const Step& s, double v) { return s.t < v; };
    auto cmp_bwd = [](const Step& s, double v) { return s.t > v; };
    auto it = forward ? std::lower_bound(steps.begin(), steps.end(), t, cmp_fwd)
                      : std::lower_bound(steps.begin(), steps.end(), t, cmp_bwd);
    std::size_t i = static_cast<std::size_t>(it - steps.begin());
    if (i == 0) i = 1;
    if (i >= steps.size()) i = steps.size() - 1;
    return i - 1;
}

Vec2 Trajectory::eval(double t) const {
    const std::size_t i = locate(t);
    const Step& a = steps[i];
    const Step& b = steps[i + 1];
    return {hermite(a.t, a.y[0], a.dy[0], b.t, b.y[0], b.dy[0], t),
            hermite(a.t, a.y[1], a.dy[1], b.t, b.y[1], b.dy[1], t)};
}

Vec2 Trajectory::eval_deriv(double t) const {
    const std::size_t i = locate(t);
    const Step& a = steps[i];
    const Step& b = steps[i + 1];
    return {hermite_deriv(a.t, a.y[0], a.dy[0], b.t, b.y[0], b.dy[0], t),
            hermite_deriv(a.t, a.y[1], a.dy[1], b.t, b.y[1], b.dy[1], t)};
}

namespace {

// Dormand-Prince tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

Vec2 axpy(const Vec2& y, double h, std::initializer_list<std::pair<double, const Vec2*>> terms) {
    Vec2 out = y;
    for (const auto& [c, k] : terms) {
        out[0] += h * c * (*k)[0];
        out[1] += h * c * (*k)[1];
    }
    return out;
}

double scaled_norm(const Vec2& e, const Vec2& y0, const Vec2& y1, const Options& o) {
    double sum = 0.0;
    int count = 0;
    for (int i = 0; i < 2; ++i) {
        const double sc = o.atol + o.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        if (sc <= 0.0) continue;
        const double r = e[i] / sc;
        sum += r * r;
        ++count;
    }
    return count ? std::sqrt(sum / count) : 0.0;
}

}  // namespace

Result integrate(const Rhs& rhs, double t0, const Vec2& y0, double t1, const Options& opts,
                 std::span<const double> outputs, const std::vector<Event>& events) {
    Result res;
    const double dir = t1 >= t0 ? 1.0 : -1.0;
    Vec2 y = y0;
    double t = t0;
    Vec2 k1 = rhs(t, y);
    res.trajectory.steps.push_back({t, y, k1});

    std::size_t next_out = 0;
    while (next_out < outputs.size() && dir * (outputs[next_out] - t0) < 0.0) ++next_out;
    if (next_out < outputs.size() && outputs[next_out] == t0) {
        res.samples.push_back({t, y, k1});
        ++next_out;
    }
    if (t0 == t1) {
        res.reached_end = true;
        return res;
    }

    double h = opts.h_init;
    if (h <= 0.0) {
        const double d0 = scaled_norm(y, y, y, opts);
        const double d1 = scaled_norm(k1, y, y, opts);
        h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    }
    h = std::min({h, opts.h_max, std::abs(t1 - t0)});

    std::vector<double> g_prev(events.size());
    for (std::size_t e = 0; e < events.size(); ++e) g_prev[e] = events[e].g(t, y);

    std::size_t steps = 0;
    while (dir * (t1 - t) > 0.0) {
        if (++steps > opts.max_steps) {
            throw Error(ErrorCode::step_failure, "maximum number of steps exceeded");
        }
        double target = t1;
        if (next_out < outputs.size() && dir * (outputs[next_out] - target) < 0.0) {
            target = outputs[next_out];
        }
        bool clipped = false;
        double hs = h;
        if (hs >= std::abs(target - t)) {
            hs = std::abs(target - t);
            clipped = true;
        } else if (hs > 0.5 * std::abs(target - t)) {
            // Split the remainder evenly instead of leaving a sliver step.
            hs = 0.5 * std::abs(target - t);
        }
        const double hd = dir * hs;

        const Vec2 k2 = rhs(t + c2 * hd, axpy(y, hd, {{a21, &k1}}));
        const Vec2 k3 = rhs(t + c3 * hd, axpy(y, hd, {{a31, &k1}, {a32, &k2}}));
        const Vec2 k4 = rhs(t + c4 * hd, axpy(y, hd, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const Vec2 k5 =
            rhs(t + c5 * hd, axpy(y, hd, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const Vec2 k6 = rhs(
            t + hd, axpy(y, hd, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const Vec2 ynew =
            axpy(y, hd, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const double tnew = clipped ? target : t + hd;
        const Vec2 k7 = rhs(tnew, ynew);

        Vec2 err;
        for (int i = 0; i < 2; ++i) {
            err[i] = hd * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                           e7 * k7[i]);
        }
        const double en = scaled_norm(err, y, ynew, opts);
        if (!std::isfinite(en)) {
            h = 0.2 * hs;
            if (h < opts.h_min) throw Error(ErrorCode::step_failure, "non-finite state");
            continue;
        }
        const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
        if (en > 1.0) {
            h = hs * std::max(fac, 0.2);
            if (h < opts.h_min) {
                std::ostringstream os;
                os << "step size underflow at t = " << t;
                throw Error(ErrorCode::step_failure, os.str());
            }
            continue;
        }

        // Accepted step: check events on the interpolant.
        const Step prev{t, y, k1};
        const Step next{tnew, ynew, k7};
        std::optional<std::size_t> hit;
        double t_hit = 0.0;
        for (std::size_t e = 0; e < events.size(); ++e) {
            const double gn = events[e].g(tnew, ynew);
            const double gp = g_prev[e];
            g_prev[e] = gn;
            const bool rising = gp < 0.0 && gn >= 0.0;
            const bool falling = gp > 0.0 && gn <= 0.0;
            const bool fires = (events[e].direction >= 0 && rising) ||
                               (events[e].direction <= 0 && falling);
            if (!fires) continue;
            auto g_on = [&](double s) {
                const Vec2 ys{hermite(prev.t, prev.y[0], prev.dy[0], next.t, next.y[0],
                                      next.dy[0], s),
                              hermite(prev.t, prev.y[1], prev.dy[1], next.t, next.y[1],
                                      next.dy[1], s)};
                return events[e].g(s, ys);
            };
            double lo = std::min(prev.t, next.t);
            double hi = std::max(prev.t, next.t);
            double root;
            const double glo = g_on(lo);
            const double ghi = g_on(hi);
            if (glo == 0.0) {
                root = lo;
            } else if (ghi == 0.0 || (glo > 0.0) == (ghi > 0.0)) {
                root = dir > 0 ? hi : lo;
            } else {
                std::uintmax_t iters = 200;
                auto tol = [](double a, double b) { return std::abs(a - b) <= 1e-10; };
                const auto br = boost::math::tools::toms748_solve(g_on, lo, hi, glo, ghi, tol, iters);
                root = 0.5 * (br.first + br.second);
            }
            if (events[e].accept) {
                const Vec2 yr{hermite(prev.t, prev.y[0], prev.dy[0], next.t, next.y[0], next.dy[0], root),
                              hermite(prev.t, prev.y[1], prev.dy[1], next.t, next.y[1], next.dy[1], root)};
                if (!events[e].accept(root, yr)) continue;
            }
            if (!hit || dir * (root - t_hit) < 0.0) {
                hit = e;
                t_hit = root;
            }
        }

        if (hit) {
            const Vec2 ye{hermite(prev.t, prev.y[0], prev.dy[0], next.t, next.y[0], next.dy[0], t_hit),
                          hermite(prev.t, prev.y[1], prev.dy[1], next.t, next.y[1], next.dy[1], t_hit)};
            const Step es{t_hit, ye, rhs(t_hit, ye)};
            while (next_out < outputs.size() && dir * (outputs[next_out] - t_hit) <= 0.0) {
                const double to = outputs[next_out];
                const Vec2 yo{hermite(prev.t, prev.y[0], prev.dy[0], next.t, next.y[0], next.dy[0], to),
                              hermite(prev.t, prev.y[1], prev.dy[1], next.t, next.y[1], next.dy[1], to)};
                res.samples.push_back({to, yo, rhs(to, yo)});
                ++next_out;
            }
            if (t_hit != t) res.trajectory.steps.push_back(es);
            res.event = hit;
            res.event_state = es;
            return res;
        }

        t = tnew;
        y = ynew;
        k1 = k7;
        res.trajectory.steps.push_back(next);
        if (next_out < outputs.size() && clipped && target == outputs[next_out]) {
            res.samples.push_back(next);
            ++next_out;
        }
        // A step shortened to hit an output point says nothing about the
        // attainable step; keep the previous proposal unless control shrinks it.
        const double proposal = hs * fac;
        h = std::min(hs < h && fac >= 1.0 ? std::max(h, proposal) : proposal, opts.h_max);
    }
    res.reached_end = true;
    return res;
}

}  // namespace hypac::ode
