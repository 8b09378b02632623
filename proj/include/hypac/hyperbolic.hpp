#pragma once

#include "hypac/diagnostics.hpp"
#include "hypac/model.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hypac {

// U'' + (n-1) tanh(t) U' = f(U) on [-T, T], U(-T) = -1, U(T) = 1.

enum class BvpMethod { minimize, newton };
enum class InitialGuess { tanh, ramp, zero };
std::string_view to_string(BvpMethod method) noexcept;

struct BvpRun {
    double T = 0.0;
    int N = 0;
    Profile1D profile;  ///< chart signed_dist_t, N+1 nodes
    /// Discrete energy divided by exp(log_weight_scale); the scale keeps the
    /// cosh^{n-1} weights representable for large (n-1) T.
    double energy = 0.0;
    double log_weight_scale = 0.0;
    BvpMethod method = BvpMethod::minimize;
    int iterations = 0;
    double optimality = 0.0;       ///< sup |dE/dU_j| / nodal weight (minimizer)
    double residual = 0.0;         ///< sup FD residual of the ODE at the end
    std::vector<double> energy_history;
    std::vector<std::string> warnings;
};

struct MinimizeOptions {
    InitialGuess init = InitialGuess::tanh;
    int max_iterations = 200000;
};

/// Minimises sum_i W_i (1/2 D_i^2 + F(midpoint_i)) over piecewise linear U with
/// U(+-T) = +-1; W_i is the exact cell integral of cosh^{n-1}. Barzilai-Borwein
/// steps preconditioned by the tridiagonal K + f'(1) M, Armijo backtracking on
/// the energy, and projection onto [-1, 1]. Stops when the weighted gradient
/// drops below tol. Requires T >= 5, N >= 200 (even). MaxIterations,
/// NonDecreasingEnergy.
BvpRun minimize_profile(const ProblemParams& params, double T, int N, double tol,
                        const MinimizeOptions& opts = {});

struct NewtonOptions {
    int max_iterations = 50;
    int max_halvings = 30;
};

/// Damped Newton on the centred second-order FD equations. The initial
/// profile is interpolated onto the grid. SingularJacobian (with the t of the
/// offending row) or Divergence on failure.
BvpRun newton_profile(const ProblemParams& params, double T, int N, double tol,
                      const Profile1D& init, const NewtonOptions& opts = {});

/// Interior guesses with the boundary values +-1.
Profile1D initial_profile(const ProblemParams& params, double T, int N, InitialGuess kind);

struct MonotoneCheck {
    bool monotone = true;
    std::optional<double> first_violation;  ///< t of the first decreasing step
};
MonotoneCheck check_monotone(const Profile1D& profile, double slack = 1e-10);

/// First interior node that is a strict local minimum with U > 0 or a strict
/// local maximum with U < 0.
std::optional<double> forbidden_extremum(const Profile1D& profile);

struct StabilityRow {
    double T = 0.0;
    double u_at_zero = 0.0;
    double zero_location = 0.0;
    double sup_change = 0.0;  ///< sup over [-5, 5] against the previous T (0 for the first)
};

struct StabilityReport {
    std::vector<StabilityRow> rows;
    bool zeros_settle = false;     ///< |a_{T_{i+1}} - a_{T_i}| non-increasing
    bool changes_decrease = false; ///< sup changes non-increasing
    bool center_bounded = false;   ///< U_T(0) in (-0.5, 0.5) throughout
};

StabilityReport continuation_in_T(const ProblemParams& params, const std::vector<double>& T_list,
                                  int N_per_unit, double tol);

struct TailRates {
    DecayFit right;  ///< 1 - U on [T/3, 2T/3]; slope is the rate
    DecayFit left;   ///< U + 1 on [-2T/3, -T/3]; -slope is the mirrored rate
    double predicted = 0.0;  ///< [-(n-1) - sqrt((n-1)^2 + 4 f'(1))] / 2
    double right_rate = 0.0;
    double left_rate = 0.0;  ///< mirrored to t -> +inf
};

/// Requires T >= 15.
TailRates tail_rates(const BvpRun& run);

/// int_{-1}^{1} f by adaptive Gauss-Kronrod.
double balanced_wells_check(const PotentialSpec& spec);

/// sup |U_N - U_2N| / sup |U_2N - U_4N| over the coarse nodes, Newton runs
/// seeded by the tanh guess.
struct RichardsonReport {
    double ratio = 0.0;
    double diff_coarse = 0.0;
    double diff_fine = 0.0;
};
RichardsonReport richardson_ratio(const ProblemParams& params, double T, int N, double tol);

}  // namespace hypac
