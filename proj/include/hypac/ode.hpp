#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace hypac::ode {

using Vec2 = std::array<double, 2>;
using Rhs = std::function<Vec2(double, const Vec2&)>;

struct Options {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 0.0;  // 0 selects a step from the initial slope
    double h_max = 0.05;
    double h_min = 1e-14;
    std::size_t max_steps = 5'000'000;
};

struct Step {
    double t;
    Vec2 y;
    Vec2 dy;
};

/// Accepted steps in integration order with piecewise cubic Hermite dense
/// output. Works for forward and backward runs alike.
class Trajectory {
public:
    std::vector<Step> steps;

    bool empty() const { return steps.empty(); }
    double t_begin() const { return steps.front().t; }
    double t_end() const { return steps.back().t; }
    Vec2 eval(double t) const;
    Vec2 eval_deriv(double t) const;

private:
    std::size_t locate(double t) const;
};

/// Zero crossing of g(t, y). direction: +1 rising only, -1 falling only, 0 both
/// (measured along the integration direction). A located crossing for which
/// `accept` returns false is ignored.
struct Event {
    std::function<double(double, const Vec2&)> g;
    int direction = 0;
    std::function<bool(double, const Vec2&)> accept;
};

struct Result {
    Trajectory trajectory;
    /// Exact states at each requested output point that was reached.
    std::vector<Step> samples;
    std::optional<std::size_t> event;  // index into the events list
    Step event_state{};
    bool reached_end = false;
};

/// Dormand-Prince 5(4) with FSAL and embedded error control. Steps are clipped
/// so that every entry of `outputs` (ordered along the integration direction)
/// is hit exactly. Events end the run and are located to 1e-10 in t on the Hermite
/// interpolant of the accepted step. Throws StepFailure when the step size
/// underflows h_min or max_steps is exhausted.
Result integrate(const Rhs& rhs, double t0, const Vec2& y0, double t1, const Options& opts,
                 std::span<const double> outputs = {}, const std::vector<Event>& events = {});

/// Cubic Hermite value on [t0, t1] with endpoint values and slopes.
double hermite(double t0, double y0, double d0, double t1, double y1, double d1, double t);
double hermite_deriv(double t0, double y0, double d0, double t1, double y1, double d1, double t);

}  // namespace hypac::ode
