#pragma once

#include "hypac/diagnostics.hpp"
#include "hypac/model.hpp"
#include "hypac/ode.hpp"

#include <array>
#include <complex>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace hypac {

// Phase plane of u'' - (n-1) u' = f(u) in xi = log x:  u' = v, v' = (n-1) v + f(u).

enum class FixedPointKind { saddle, unstable_node, unstable_spiral };
std::string_view to_string(FixedPointKind kind) noexcept;

struct FixedPointInfo {
    ode::Vec2 location{0.0, 0.0};
    std::array<std::complex<double>, 2> eigenvalues;  ///< increasing real part
    bool real_eigenvalues = false;
    std::array<ode::Vec2, 2> eigenvectors{};  ///< unit multiples of (1, mu); valid when real
    FixedPointKind kind = FixedPointKind::saddle;
};

/// The three critical points (-1,0), (0,0), (1,0) in that order.
std::vector<FixedPointInfo> classify_fixed_points(const ProblemParams& params);

enum class Branch { unstable_up, unstable_down, stable_backward_up, stable_backward_down };
enum class OrbitOutcome { crosses_axis, converges_to, passes_above, escapes, reached_point, max_time };
std::string_view to_string(Branch branch) noexcept;
std::string_view to_string(OrbitOutcome outcome) noexcept;

struct PhaseOrbit {
    std::vector<double> xi;  ///< increasing
    std::vector<ode::Vec2> states;
    ode::Vec2 origin_fp{0.0, 0.0};
    Branch branch = Branch::unstable_up;
    double offset = 0.0;
    OrbitOutcome outcome = OrbitOutcome::max_time;
    double event_xi = 0.0;
    ode::Vec2 event_state{0.0, 0.0};
    double crossing_u = 0.0;               ///< crosses_axis: u where v vanished
    ode::Vec2 target_fp{0.0, 0.0};         ///< converges_to: the fixed point reached
    double alignment = 0.0;                ///< converges_to: |cos| to the target's stable direction
};

struct ShootOptions {
    bool detect_axis = true;
    bool detect_convergence = true;
    bool detect_above = true;
    bool detect_escape = true;
    double ball_radius = 1e-3;
    double escape_radius = 10.0;
    /// Stop once the state is within this distance of `stop_center`.
    std::optional<double> stop_radius;
    ode::Vec2 stop_center{0.0, 0.0};
    double h_max = 0.05;
    double atol_factor = 1e-2;  ///< atol = tol * atol_factor
};

/// Starts at fp + offset * e, e the unit eigenvector of the chosen branch
/// oriented by the sign of its u component ("up" means u increases). Stable
/// branches run in reversed xi; the returned arrays are always increasing in
/// xi. Requires offset in [1e-9, 1e-4]. EigenvectorUndefined when the branch
/// has no real eigen-direction at fp.
PhaseOrbit shoot_manifold(const ProblemParams& params, const FixedPointInfo& fp, Branch branch,
                          double offset, double xi_span, double tol, const ShootOptions& opts = {});

/// Orbit as a log_x_xi profile (derivative = v).
Profile1D orbit_profile(const PhaseOrbit& orbit, const ProblemParams& params);

struct HeteroclinicOptions {
    double offset = 1e-8;
    double dxi = 0.02;
    double stop_radius = 1e-8;
    double xi_span = 2000.0;
    int target_sign = +1;  ///< +1: (0,0) -> (1,0); -1: (0,0) -> (-1,0)
};

struct HeteroclinicResult {
    Profile1D xi_profile;  ///< log_x_xi chart, uniform grid, u(0) = +-1/2
    Profile1D x_profile;   ///< halfspace_x chart, x = e^xi, derivative v / x
    PhaseOrbit orbit;      ///< raw backward shot, unshifted
    double shift = 0.0;    ///< xi of the half-value in the raw shot
};

/// Connection from the origin to (+-1, 0), shot backward from the saddle along
/// its stable direction until the state is within stop_radius of the origin.
/// NoConnection if the shot ends any other way.
HeteroclinicResult heteroclinic_profile(const ProblemParams& params, double tol,
                                        const HeteroclinicOptions& opts = {});

/// sup over x in [e^-20, e^20] (2000 log-spaced points) of
/// |x^2 u'' + (2-n) x u' - f(u)| for u = x^a / (1 + x^a), a = (n-1)/3,
/// f = k u (u^2 - 1), k = 2(n-1)^2/9, derivatives in closed form. With
/// flipped_sign the nonlinearity k u (1 - u^2) is used instead.
double explicit_solution_residual(int n, bool flipped_sign = false);

struct CertificateReport {
    PhaseOrbit orbit;
    bool certified = false;          ///< passes_above, no axis crossing, no convergence
    double v_at_crossing = 0.0;      ///< v where u reaches 1
    double dissipation = 0.0;        ///< -(n-1) int v^2 dxi along the orbit
    double kinetic_gain = 0.0;       ///< 1/2 v_end^2 - 1/2 v_start^2
    double potential_jump = 0.0;     ///< F(u_end) - F(u_start)
    double identity_residual = 0.0;  ///< xi-chart energy identity on the orbit
};

/// Shoots the unstable manifold of (-1,0) upward and records the energy
/// bookkeeping that rules out a return to the axis or a landing on (1,0).
CertificateReport nonexistence_certificate(const ProblemParams& params, double tol,
                                           double offset = 1e-6);

struct ThresholdSample {
    double k = 0.0;
    double min_u = 0.0;
    bool positive = false;
};

struct ThresholdReport {
    double gamma = 0.0;       ///< midpoint of the final bracket
    double k_positive = 0.0;  ///< largest k seen with min u > 0
    double k_negative = 0.0;  ///< smallest k seen with min u <= 0
    double node_spiral_transition = 0.0;  ///< (n-1)^2 / 4
    double gap = 0.0;                     ///< transition - gamma
    std::vector<ThresholdSample> samples;
};

/// min over the (0,0) -> (1,0) connection of u, for the cubic with parameter k.
/// The backward shot runs with a pure relative tolerance until max(|u|,|v|)
/// drops below 1e-290, so late sign changes near the origin are seen.
ThresholdSample connection_min_u(int n, double k);

/// Bisection in k on the sign of min u. BracketInvalid unless the endpoints
/// disagree; requires tol_k >= 1e-6.
ThresholdReport monotonicity_threshold(int n, std::pair<double, double> k_range, double tol_k);

}  // namespace hypac
