#pragma once

#include "hypac/diagnostics.hpp"
#include "hypac/model.hpp"
#include "hypac/polar_grid.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace hypac {

// Delta u = f(u) on the geodesic disk {r < R} of H^2, u = g(theta) on r = R.

enum class BoundaryKind { constant, hh_step, profile_trace, function };

struct BoundaryData {
    BoundaryKind kind = BoundaryKind::constant;
    double value = 0.0;                        ///< constant
    std::shared_ptr<const Profile1D> profile;  ///< profile_trace
    std::function<double(double)> fn;          ///< function of theta
    std::string label;

    /// Values on the theta nodes of the grid.
    std::vector<double> sample(const DiskGrid& grid) const;
    bool is_constant() const { return kind == BoundaryKind::constant; }
};

BoundaryData constant_boundary(double c);
/// sign(sin theta), ramped linearly to 0 over an angular distance of two
/// grid spacings around theta = 0 and pi (the spacing at theta = 0).
BoundaryData hh_step_boundary();
/// U(t) at r = R, where sinh t = sinh R sin theta; U is a signed_dist_t profile.
BoundaryData profile_trace_boundary(Profile1D profile);
BoundaryData function_boundary(std::string label, std::function<double(double)> g);

struct DiskOptions {
    int max_iterations = 50;
    int continuation_steps = 4;
    int max_halvings = 30;
    /// Warm start as a function of (r, theta); skips the continuation.
    std::function<double(double, double)> initial;
};

struct DiskSolution {
    DiskGrid grid;
    /// (Nr + 1) rings of Ntheta values: ring 0 repeats the pole value and
    /// ring Nr is the boundary data.
    std::vector<double> values;
    std::vector<double> boundary;
    /// sup over unknowns of |residual| / diagonal of the FV operator.
    double residual_norm = 0.0;
    ProblemParams params;
    int newton_iterations = 0;  ///< corrections applied over all continuation stages
    std::vector<double> residual_history;
    bool used_cholesky = true;

    double at(int i, int j) const {
        return values[static_cast<std::size_t>(i) * static_cast<std::size_t>(grid.Ntheta) +
                      static_cast<std::size_t>(j)];
    }
    double pole() const { return values[0]; }
    /// Bilinear in (r, theta); constant at the pole, clamped at r = R.
    double sample(double r, double theta) const;
};

/// Damped Newton for the FV system on the grid. A constant boundary value c
/// starts from u = c; otherwise the data is switched on in
/// `continuation_steps` equal amplitude steps from u = 0 (unless a warm start
/// is given). Requires n = 2, boundary values in [-1, 1] and tol >= 1e-10.
/// Divergence when damping fails, MaxIterations when the budget is exhausted.
DiskSolution solve_disk(const ProblemParams& params, const BoundaryData& boundary,
                        const DiskGrid& grid, double tol, const DiskOptions& opts = {});

/// sinh t = 2 z2 / (1 - |z|^2) for the geodesic {z2 = 0} of the ball model.
double signed_distance_t(double z1, double z2);
/// The same in geodesic polar coordinates: sinh t = sinh r sin theta.
double signed_distance_polar(double r, double theta);

/// For each level L, samples u along {t = L} within r <= R - margin and
/// records max - min; returns the largest spread. EmptyLevelSet when
/// |L| >= R - margin.
double symmetry_deviation(const DiskSolution& sol, const std::vector<double>& levels,
                          double margin = 2.0);

/// sup over nodes with r <= R - margin of |u - U(t)|. The profile must be in
/// the signed_dist_t chart and cover [-(R - margin), R - margin].
double compare_with_profile(const DiskSolution& sol, const Profile1D& profile,
                            double margin = 2.0);

/// Largest distance of interior values from [lo, hi], where lo and hi span
/// the boundary data together with -1, 0 and 1.
double max_principle_violation(const DiskSolution& sol);

/// CSV `r,theta,u` (pole written once) plus a `<stem>.json` sidecar.
void write_disk_solution(const DiskSolution& sol, const std::filesystem::path& csv_path);

}  // namespace hypac
