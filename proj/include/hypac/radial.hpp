#pragma once

#include "hypac/diagnostics.hpp"
#include "hypac/model.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hypac {

struct RadialOptions {
    double r0 = 1e-3;               ///< series start; above 1e-2 is rejected
    double points_per_unit = 50.0;  ///< output grid density in r
    double h_max = 0.05;
    double tail_fraction = 0.1;  ///< part of the grid inspected by the classifier
    double threshold = 0.01;     ///< |u|, |u'| bound for tends_to_zero
};

enum class RadialOutcome { tends_to_zero, constant_pm1, undetermined };
std::string_view to_string(RadialOutcome outcome) noexcept;

struct RadialRun {
    double a = 0.0;
    double r_max = 0.0;
    double tol = 0.0;
    Profile1D profile;  ///< chart geodesic_r; grid starts at r = 0
    RadialOutcome outcome = RadialOutcome::undetermined;
    int derivative_sign_changes = 0;
    double max_abs_u = 0.0;  ///< over every accepted step
};

/// u'' + (n-1) coth r u' = f(u), u(0) = a, u'(0) = 0. The singular start is
/// bridged by u = a + f(a) r^2/(2n), u' = f(a) r/n at r0. Requires |a| <= 1,
/// r_max >= 10 and tol in [1e-14, 1e-6].
RadialRun integrate_radial(const ProblemParams& params, double a, double r_max, double tol,
                           const RadialOptions& opts = {});

RadialOutcome classify_radial_limit(const RadialRun& run, const RadialOptions& opts = {});

struct SweepOptions {
    RadialOptions radial;
    std::pair<double, double> fit_window{8.0, 14.0};
    double exponent_rel_tol = 0.02;
};

struct SweepEntry {
    double a = 0.0;
    std::optional<RadialRun> run;
    std::optional<DecayFit> fit;  ///< empty for the trivial run a = 0
    double energy_residual = 0.0;
    double flux_residual = 0.0;           ///< absolute, over [1, 5]
    double flux_relative_residual = 0.0;  ///< relative, over [1, r_max - 1]
    bool exponent_ok = false;
    std::string error;  ///< non-empty when the run or the fit failed
};

struct SweepReport {
    double alpha_minus = 0.0;
    std::vector<SweepEntry> entries;
    bool all_tend_to_zero = false;
    bool exponents_agree = false;
};

/// One run per a (concurrently), each fitted against alpha_- over the window.
/// Failures are recorded per entry and never abort the sweep.
SweepReport sweep_family(const ProblemParams& params, const std::vector<double>& a_values,
                         double r_max, double tol, const SweepOptions& opts = {});

}  // namespace hypac
