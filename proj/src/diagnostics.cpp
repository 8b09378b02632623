#include "hypac/diagnostics.hpp"

#include "hypac/error.hpp"
#include "hypac/ode.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hypac {

std::string_view to_string(Chart chart) noexcept {
    switch (chart) {
        case Chart::geodesic_r: return "geodesic_r";
        case Chart::log_x_xi: return "log_x_xi";
        case Chart::halfspace_x: return "halfspace_x";
        case Chart::signed_dist_t: return "signed_dist_t";
    }
    return "unknown";
}

Chart chart_from_string(std::string_view name) {
    for (Chart c : {Chart::geodesic_r, Chart::log_x_xi, Chart::halfspace_x, Chart::signed_dist_t}) {
        if (to_string(c) == name) return c;
    }
    throw Error(ErrorCode::invalid_argument, "unknown chart " + std::string(name));
}

void Profile1D::validate() const {
    if (grid.size() != values.size() || grid.size() != derivs.size()) {
        throw Error(ErrorCode::invalid_argument, "profile arrays differ in length");
    }
    if (grid.size() < 2) throw Error(ErrorCode::invalid_argument, "profile needs two points");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw Error(ErrorCode::invalid_argument, "profile grid must be strictly increasing");
        }
    }
}

namespace {

std::size_t cell_of(const std::vector<double>& grid, double s) {
    if (s < grid.front() || s > grid.back()) {
        std::ostringstream os;
        os << "coordinate " << s << " outside profile [" << grid.front() << ", " << grid.back()
           << "]";
        throw Error(ErrorCode::invalid_argument, os.str());
    }
    auto it = std::upper_bound(grid.begin(), grid.end(), s);
    std::size_t i = it == grid.begin() ? 0 : static_cast<std::size_t>(it - grid.begin()) - 1;
    return std::min(i, grid.size() - 2);
}

double target_value(DecayTarget t) {
    switch (t) {
        case DecayTarget::to_zero: return 0.0;
        case DecayTarget::to_plus_one: return 1.0;
        case DecayTarget::to_minus_one: return -1.0;
    }
    return 0.0;
}

double coth_stable(double r) {
    if (r > 20.0) return 1.0 + 2.0 / std::expm1(2.0 * r);
    return 1.0 / std::tanh(r);
}

// Exact integral over [a, b] of the quadratic through (x0,y0),(x1,y1),(x2,y2):
// two-point Gauss is exact for quadratics.
double quad_piece(double x0, double x1, double x2, double y0, double y1, double y2, double a,
                  double b) {
    auto p = [&](double s) {
        const double l0 = (s - x1) * (s - x2) / ((x0 - x1) * (x0 - x2));
        const double l1 = (s - x0) * (s - x2) / ((x1 - x0) * (x1 - x2));
        const double l2 = (s - x0) * (s - x1) / ((x2 - x0) * (x2 - x1));
        return l0 * y0 + l1 * y1 + l2 * y2;
    };
    const double m = 0.5 * (a + b);
    const double d = 0.5 * (b - a) / std::sqrt(3.0);
    return 0.5 * (b - a) * (p(m - d) + p(m + d));
}

}  // namespace

double Profile1D::value_at(double s) const {
    const std::size_t i = cell_of(grid, s);
    return ode::hermite(grid[i], values[i], derivs[i], grid[i + 1], values[i + 1], derivs[i + 1], s);
}

double Profile1D::deriv_at(double s) const {
    const std::size_t i = cell_of(grid, s);
    return ode::hermite_deriv(grid[i], values[i], derivs[i], grid[i + 1], values[i + 1],
                              derivs[i + 1], s);
}

double simpson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error(ErrorCode::invalid_argument, "simpson: size mismatch");
    const std::size_t n = x.size();
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * (x[1] - x[0]) * (y[0] + y[1]);
    double sum = 0.0;
    std::size_t i = 0;
    for (; i + 2 < n; i += 2) {
        sum += quad_piece(x[i], x[i + 1], x[i + 2], y[i], y[i + 1], y[i + 2], x[i], x[i + 2]);
    }
    if (i + 1 < n) {
        // One cell left over: [x[n-2], x[n-1]].
        sum += quad_piece(x[n - 3], x[n - 2], x[n - 1], y[n - 3], y[n - 2], y[n - 1], x[n - 2],
                          x[n - 1]);
    }
    return sum;
}

DecayFit fit_decay_exponent(const Profile1D& profile, std::pair<double, double> window,
                            DecayTarget target) {
    profile.validate();
    const double tv = target_value(target);
    const bool log_abscissa = profile.chart == Chart::halfspace_x;

    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (profile.grid[i] >= window.first && profile.grid[i] <= window.second) idx.push_back(i);
    }
    // Trim converged stretches at either end of the window.
    auto close = [&](std::size_t i) { return std::abs(profile.values[i] - tv) < 1e-12; };
    while (!idx.empty() && close(idx.back())) idx.pop_back();
    while (!idx.empty() && close(idx.front())) idx.erase(idx.begin());
    if (idx.size() < 10) {
        std::ostringstream os;
        os << "decay fit window [" << window.first << ", " << window.second << "] holds "
           << idx.size() << " usable points, need 10";
        throw Error(ErrorCode::window_too_small, os.str());
    }

    std::vector<double> xs, ys;
    double sign_sum = 0.0;
    for (std::size_t i : idx) {
        const double d = profile.values[i] - tv;
        if (std::abs(d) <= 1e-14) {
            std::ostringstream os;
            os << "profile reaches the target at " << profile.grid[i];
            throw Error(ErrorCode::target_reached, os.str());
        }
        sign_sum += d > 0 ? 1.0 : -1.0;
        const double s = profile.grid[i];
        if (log_abscissa && !(s > 0.0)) {
            throw Error(ErrorCode::invalid_argument, "halfspace_x fit needs x > 0");
        }
        xs.push_back(log_abscissa ? std::log(s) : s);
        ys.push_back(std::log(std::abs(d)));
    }

    const double m = static_cast<double>(xs.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / m;
    const double my = sy / m;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double rss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (intercept + slope * xs[i]);
        rss += r * r;
    }

    DecayFit fit;
    fit.slope = slope;
    fit.exponent = (profile.chart == Chart::geodesic_r || profile.chart == Chart::signed_dist_t)
                       ? -slope
                       : slope;
    fit.prefactor = (sign_sum >= 0 ? 1.0 : -1.0) * std::exp(intercept);
    fit.window = {profile.grid[idx.front()], profile.grid[idx.back()]};
    fit.rms_residual = std::sqrt(rss / m);
    fit.points = idx.size();
    return fit;
}

DecayFit fit_decay_exponent(const Profile1D& profile, DecayTarget target) {
    profile.validate();
    const double lo = profile.grid.front();
    const double hi = profile.grid.back();
    return fit_decay_exponent(profile, {hi - 0.4 * (hi - lo), hi}, target);
}

double energy_identity_residual(const Profile1D& profile) {
    profile.validate();
    const int n = profile.params.n;
    const auto& F = profile.params.potential.F;
    double c = 0.0;
    std::function<double(double)> w;
    switch (profile.chart) {
        case Chart::geodesic_r:
            c = n - 1.0;
            w = coth_stable;
            break;
        case Chart::log_x_xi:
            c = -(n - 1.0);
            w = [](double) { return 1.0; };
            break;
        case Chart::signed_dist_t:
            c = n - 1.0;
            w = [](double t) { return std::tanh(t); };
            break;
        case Chart::halfspace_x:
            throw Error(ErrorCode::chart_mismatch,
                        "energy identity is defined for the r, xi and t charts only");
    }
    std::vector<double> integrand(profile.size());
    for (std::size_t i = 0; i < profile.size(); ++i) {
        const double s = profile.grid[i];
        const double d = profile.derivs[i];
        // coth r u'^2 -> 0 at the regular pole.
        integrand[i] = (profile.chart == Chart::geodesic_r && s == 0.0) ? 0.0 : w(s) * d * d;
    }
    const double quad = simpson(profile.grid, integrand);
    const double da = profile.derivs.front();
    const double db = profile.derivs.back();
    const double lhs = 0.5 * db * db - 0.5 * da * da + c * quad;
    const double rhs = F(profile.values.back()) - F(profile.values.front());
    return std::abs(lhs - rhs);
}

namespace {

struct FluxTerms {
    double boundary_b, boundary_a, integral, abs_integral;
};

FluxTerms flux_terms(const Profile1D& profile, double a, double b) {
    profile.validate();
    if (profile.chart != Chart::geodesic_r) {
        throw Error(ErrorCode::chart_mismatch, "flux identity needs the geodesic_r chart");
    }
    if (!(a < b) || a < profile.grid.front() || b > profile.grid.back()) {
        throw Error(ErrorCode::invalid_argument, "flux interval must lie inside the grid");
    }
    const double m = profile.params.n - 1.0;
    const auto& f = profile.params.potential.f;
    auto g = [m](double r) { return std::pow(std::sinh(r), m); };

    std::vector<double> xs{a};
    std::vector<double> us{profile.value_at(a)};
    for (std::size_t i = 0; i < profile.size(); ++i) {
        const double s = profile.grid[i];
        // Skip nodes that would make a degenerate sliver cell next to an endpoint.
        if (s > a + 1e-12 && s < b - 1e-12) {
            xs.push_back(s);
            us.push_back(profile.values[i]);
        }
    }
    xs.push_back(b);
    us.push_back(profile.value_at(b));
    std::vector<double> integrand(xs.size()), magnitude(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        integrand[i] = g(xs[i]) * f(us[i]);
        magnitude[i] = std::abs(integrand[i]);
    }
    return {g(b) * profile.deriv_at(b), g(a) * profile.deriv_at(a), simpson(xs, integrand),
            simpson(xs, magnitude)};
}

}  // namespace

double flux_identity_residual(const Profile1D& profile, double a, double b) {
    const FluxTerms t = flux_terms(profile, a, b);
    return std::abs(t.boundary_b - t.boundary_a - t.integral);
}

double relative_flux_identity_residual(const Profile1D& profile, double a, double b) {
    const FluxTerms t = flux_terms(profile, a, b);
    const double scale = std::abs(t.boundary_b) + std::abs(t.boundary_a) + t.abs_integral;
    const double r = std::abs(t.boundary_b - t.boundary_a - t.integral);
    return scale > 0.0 ? r / scale : r;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_profile(const Profile1D& profile, const std::filesystem::path& csv_path) {
    profile.validate();
    std::ofstream out(csv_path);
    if (!out) throw Error(ErrorCode::io, "cannot write " + csv_path.string());
    out << "coord,u,du\n";
    for (std::size_t i = 0; i < profile.size(); ++i) {
        out << format_double(profile.grid[i]) << ',' << format_double(profile.values[i]) << ','
            << format_double(profile.derivs[i]) << '\n';
    }
    nlohmann::ordered_json meta;
    meta["chart"] = std::string(to_string(profile.chart));
    meta["n"] = profile.params.n;
    const auto& p = profile.params.potential;
    meta["potential"] = {{"label", p.label},
                         {"kind", p.kind == PotentialSpec::Kind::cubic ? "cubic" : "custom"},
                         {"k", p.k},
                         {"lambda", p.lambda},
                         {"lipschitz", p.lipschitz}};
    meta["points"] = profile.size();
    auto json_path = csv_path;
    json_path.replace_extension(".json");
    std::ofstream js(json_path);
    if (!js) throw Error(ErrorCode::io, "cannot write " + json_path.string());
    js << meta.dump(2) << '\n';
}

Profile1D read_profile(const std::filesystem::path& csv_path, const ProblemParams& params,
                       Chart chart) {
    std::ifstream in(csv_path);
    if (!in) throw Error(ErrorCode::io, "cannot open " + csv_path.string());
    std::string line;
    std::getline(in, line);
    if (line.rfind("coord,u,du", 0) != 0) {
        throw Error(ErrorCode::io, "profile CSV must start with header coord,u,du");
    }
    Profile1D p;
    p.chart = chart;
    p.params = params;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double s, u, du;
        if (!(row >> s >> u >> du)) throw Error(ErrorCode::io, "malformed profile row: " + line);
        p.grid.push_back(s);
        p.values.push_back(u);
        p.derivs.push_back(du);
    }
    p.validate();
    return p;
}

}  // namespace hypac
