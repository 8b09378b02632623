#pragma once

#include "hypac/model.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hypac {

/// Coordinate a 1D profile is expressed in: geodesic distance r from a point,
/// xi = log x, the half-space height x, or signed distance t to a geodesic.
enum class Chart { geodesic_r, log_x_xi, halfspace_x, signed_dist_t };

std::string_view to_string(Chart chart) noexcept;
Chart chart_from_string(std::string_view name);

struct Profile1D {
    Chart chart = Chart::geodesic_r;
    std::vector<double> grid;
    std::vector<double> values;
    std::vector<double> derivs;
    ProblemParams params;

    std::size_t size() const { return grid.size(); }
    /// Throws InvalidArgument on length mismatch or a non-increasing grid.
    void validate() const;
    /// Cubic Hermite interpolation through (values, derivs).
    double value_at(double s) const;
    double deriv_at(double s) const;
};

enum class DecayTarget { to_zero, to_plus_one, to_minus_one };

struct DecayFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    double slope = 0.0;
    std::pair<double, double> window{0.0, 0.0};
    double rms_residual = 0.0;
    std::size_t points = 0;
};

/// Least-squares line through log|u - target| over the grid points inside
/// `window`. Abscissa is the chart coordinate, except for halfspace_x where it
/// is log x. Exponent is -slope for geodesic_r and signed_dist_t, +slope
/// otherwise. Trailing points already within 1e-12 of the target are dropped;
/// any remaining point within 1e-14 raises TargetReached. Fewer than 10 points
/// raise WindowTooSmall.
DecayFit fit_decay_exponent(const Profile1D& profile, std::pair<double, double> window,
                            DecayTarget target);
/// Same with the default window: the last 40% of the grid.
DecayFit fit_decay_exponent(const Profile1D& profile, DecayTarget target);

/// |1/2 u'(b)^2 - 1/2 u'(a)^2 + c int_a^b w u'^2 - (F(u(b)) - F(u(a)))| over the
/// whole grid, with (w, c) = (coth, n-1), (1, -(n-1)), (tanh, n-1) for the r,
/// xi and t charts. ChartMismatch for halfspace_x.
double energy_identity_residual(const Profile1D& profile);

/// |g u'(b) - g u'(a) - int_a^b g f(u)| with g = sinh^{n-1} r. Requires the
/// geodesic_r chart and [a, b] inside the grid; end values are interpolated.
double flux_identity_residual(const Profile1D& profile, double a, double b);

/// The same residual divided by |g u'(a)| + |g u'(b)| + int_a^b |g f(u)|. The
/// absolute form grows like e^{(n-1) b}, so long intervals are judged on this.
double relative_flux_identity_residual(const Profile1D& profile, double a, double b);

/// Composite Simpson on an arbitrary increasing grid: each pair of cells is
/// integrated exactly for the quadratic through its three nodes, and an odd
/// trailing cell uses the quadratic through the last three nodes.
double simpson(std::span<const double> x, std::span<const double> y);

/// Shortest round-trip decimal form; locale independent.
std::string format_double(double v);

/// CSV `coord,u,du` plus a `<stem>.json` sidecar with the chart and parameters.
void write_profile(const Profile1D& profile, const std::filesystem::path& csv_path);

/// Reads a profile CSV back. The potential is taken from the argument since
/// evaluators do not serialize.
Profile1D read_profile(const std::filesystem::path& csv_path, const ProblemParams& params,
                       Chart chart);

}  // namespace hypac
