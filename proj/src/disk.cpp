#include "hypac/disk.hpp"

#include "hypac/error.hpp"

#include <Eigen/CholmodSupport>
#include <Eigen/SparseLU>
#include <boost/math/constants/constants.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hypac {

namespace {

constexpr double pi = boost::math::constants::pi<double>();
constexpr double two_pi = 2.0 * pi;

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

double wrap_angle(double theta) {
    double w = std::fmod(theta, two_pi);
    if (w < 0.0) w += two_pi;
    return w;
}

// Angular distance to the nearer of theta = 0 and theta = pi.
double distance_to_axis(double theta) {
    const double w = wrap_angle(theta);
    return std::min({w, std::abs(w - pi), two_pi - w});
}

struct System {
    const DiskGrid& grid;
    const PolarOperator& op;
    const PotentialSpec& pot;
    std::vector<double> rhs;  // boundary couplings times data, on ring Nr-1

    void set_boundary(const std::vector<double>& g) {
        rhs.assign(grid.unknowns(), 0.0);
        for (int j = 0; j < grid.Ntheta; ++j) {
            const auto js = static_cast<std::size_t>(j);
            rhs[grid.index(grid.Nr - 1, j)] = op.boundary_coupling[js] * g[js];
        }
    }

    // G(u) = K u + V f(u) - b
    Vec residual(const Vec& u) const {
        Vec g = op.neg_laplacian * u;
        for (Eigen::Index p = 0; p < u.size(); ++p) {
            const auto ps = static_cast<std::size_t>(p);
            g[p] += op.volume[ps] * pot.f(u[p]) - rhs[ps];
        }
        return g;
    }

    double scaled_sup(const Vec& g) const {
        double s = 0.0;
        for (Eigen::Index p = 0; p < g.size(); ++p) {
            s = std::max(s, std::abs(g[p]) / op.diagonal[static_cast<std::size_t>(p)]);
        }
        return s;
    }

    double scaled_l2(const Vec& g) const {
        double s = 0.0;
        for (Eigen::Index p = 0; p < g.size(); ++p) {
            const double v = g[p] / op.diagonal[static_cast<std::size_t>(p)];
            s += v * v;
        }
        return std::sqrt(s);
    }
};

class LinearSolver {
public:
    explicit LinearSolver(const SpMat& pattern) : jac_(pattern) {
        diag_.reserve(static_cast<std::size_t>(pattern.rows()));
        for (Eigen::Index p = 0; p < pattern.rows(); ++p) diag_.push_back(&jac_.coeffRef(p, p));
        chol_.analyzePattern(jac_);
    }

    // Solves (K + diag(shift)) x = b.
    Vec solve(const SpMat& K, const std::vector<double>& shift, const Vec& b, bool& cholesky_ok) {
        std::copy(K.valuePtr(), K.valuePtr() + K.nonZeros(), jac_.valuePtr());
        for (std::size_t p = 0; p < diag_.size(); ++p) *diag_[p] += shift[p];
        if (use_cholesky_) {
            chol_.factorize(jac_);
            if (chol_.info() == Eigen::Success) {
                Vec x = chol_.solve(b);
                if (chol_.info() == Eigen::Success) return x;
            }
            use_cholesky_ = false;
        }
        cholesky_ok = false;
        if (!lu_analyzed_) {
            lu_.analyzePattern(jac_);
            lu_analyzed_ = true;
        }
        lu_.factorize(jac_);
        if (lu_.info() != Eigen::Success) {
            throw SingularJacobianError(-1.0, "disk Jacobian factorization failed");
        }
        return lu_.solve(b);
    }

private:
    SpMat jac_;
    std::vector<double*> diag_;
    Eigen::CholmodSupernodalLLT<SpMat, Eigen::Lower> chol_;
    Eigen::SparseLU<SpMat> lu_;
    bool use_cholesky_ = true;
    bool lu_analyzed_ = false;
};

}  // namespace

std::vector<double> BoundaryData::sample(const DiskGrid& grid) const {
    std::vector<double> g(static_cast<std::size_t>(grid.Ntheta));
    const double R = grid.R;
    const double ramp = 2.0 * grid.gap[0];
    for (int j = 0; j < grid.Ntheta; ++j) {
        const double th = grid.theta[static_cast<std::size_t>(j)];
        double v = 0.0;
        switch (kind) {
        case BoundaryKind::constant:
            v = value;
            break;
        case BoundaryKind::hh_step: {
            const double s = std::sin(th);
            const double sign = s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0);
            v = sign * std::min(1.0, distance_to_axis(th) / ramp);
            break;
        }
        case BoundaryKind::profile_trace: {
            const double t = signed_distance_polar(R, th);
            const auto& p = *profile;
            if (t < p.grid.front() || t > p.grid.back()) {
                throw Error(ErrorCode::invalid_argument,
                            "profile does not cover the boundary values of t");
            }
            v = p.value_at(t);
            break;
        }
        case BoundaryKind::function:
            v = fn(th);
            break;
        }
        g[static_cast<std::size_t>(j)] = v;
    }
    return g;
}

BoundaryData constant_boundary(double c) {
    BoundaryData b;
    b.kind = BoundaryKind::constant;
    b.value = c;
    std::ostringstream os;
    os << "constant(" << c << ")";
    b.label = os.str();
    return b;
}

BoundaryData hh_step_boundary() {
    BoundaryData b;
    b.kind = BoundaryKind::hh_step;
    b.label = "hh_step";
    return b;
}

BoundaryData profile_trace_boundary(Profile1D profile) {
    if (profile.chart != Chart::signed_dist_t) {
        throw Error(ErrorCode::chart_mismatch, "profile_trace needs a signed_dist_t profile");
    }
    profile.validate();
    BoundaryData b;
    b.kind = BoundaryKind::profile_trace;
    b.profile = std::make_shared<const Profile1D>(std::move(profile));
    b.label = "profile_trace";
    return b;
}

BoundaryData function_boundary(std::string label, std::function<double(double)> g) {
    BoundaryData b;
    b.kind = BoundaryKind::function;
    b.fn = std::move(g);
    b.label = std::move(label);
    return b;
}

double DiskSolution::sample(double r, double theta) const {
    const double dr = grid.dr();
    r = std::clamp(r, 0.0, grid.R);
    int i = static_cast<int>(std::floor(r / dr));
    if (i >= grid.Nr) i = grid.Nr - 1;
    const double a = r / dr - i;

    const double th = wrap_angle(theta);
    const auto it = std::upper_bound(grid.theta.begin(), grid.theta.end(), th);
    int j = static_cast<int>(it - grid.theta.begin()) - 1;
    if (j < 0) j = 0;
    const auto js = static_cast<std::size_t>(j);
    const double b = std::clamp((th - grid.theta[js]) / grid.gap[js], 0.0, 1.0);
    const int jn = (j + 1) % grid.Ntheta;

    auto ring = [&](int ii) { return (1.0 - b) * at(ii, j) + b * at(ii, jn); };
    return (1.0 - a) * ring(i) + a * ring(i + 1);
}

DiskSolution solve_disk(const ProblemParams& params, const BoundaryData& boundary,
                        const DiskGrid& grid, double tol, const DiskOptions& opts) {
    if (params.n != 2) throw Error(ErrorCode::invalid_argument, "the disk solver is for n = 2");
    if (!(tol >= 1e-10)) throw Error(ErrorCode::invalid_argument, "disk tolerance must be >= 1e-10");
    const std::vector<double> g = boundary.sample(grid);
    for (double v : g) {
        if (!(std::abs(v) <= 1.0)) {
            throw Error(ErrorCode::invalid_argument, "boundary values must lie in [-1, 1]");
        }
    }

    const PolarOperator op = assemble_polar_operator(grid);
    const auto& pot = params.potential;
    System sys{grid, op, pot, {}};
    const auto n = static_cast<Eigen::Index>(grid.unknowns());
    LinearSolver solver(op.neg_laplacian);

    DiskSolution sol;
    sol.grid = grid;
    sol.boundary = g;
    sol.params = params;

    Vec u = Vec::Zero(n);
    std::vector<double> stages;
    if (boundary.is_constant()) {
        u.setConstant(boundary.value);
        stages.push_back(1.0);
    } else if (opts.initial) {
        for (int i = 1; i < grid.Nr; ++i) {
            for (int j = 0; j < grid.Ntheta; ++j) {
                u[static_cast<Eigen::Index>(grid.index(i, j))] =
                    opts.initial(grid.r[static_cast<std::size_t>(i)], grid.theta[static_cast<std::size_t>(j)]);
            }
        }
        u[0] = opts.initial(0.0, 0.0);
        stages.push_back(1.0);
    } else {
        const int steps = std::max(1, opts.continuation_steps);
        for (int s = 1; s <= steps; ++s) stages.push_back(static_cast<double>(s) / steps);
    }

    std::vector<double> shift(static_cast<std::size_t>(n));
    std::vector<double> gs(g.size());
    int total = 0;
    for (double amp : stages) {
        for (std::size_t j = 0; j < g.size(); ++j) gs[j] = amp * g[j];
        sys.set_boundary(gs);
        Vec res = sys.residual(u);
        double sup = sys.scaled_sup(res);
        int it = 0;
        while (sup >= tol) {
            if (total >= opts.max_iterations) {
                std::ostringstream os;
                os << "disk Newton: no convergence in " << opts.max_iterations
                   << " iterations, scaled residual " << sup;
                throw Error(ErrorCode::max_iterations, os.str());
            }
            for (Eigen::Index p = 0; p < n; ++p) {
                shift[static_cast<std::size_t>(p)] = op.volume[static_cast<std::size_t>(p)] * pot.fprime(u[p]);
            }
            const Vec du = solver.solve(op.neg_laplacian, shift, -res, sol.used_cholesky);
            const double merit = sys.scaled_l2(res);
            double step = 1.0;
            bool accepted = false;
            for (int h = 0; h <= opts.max_halvings; ++h) {
                Vec trial = u + step * du;
                Vec tres = sys.residual(trial);
                if (sys.scaled_l2(tres) < merit || sys.scaled_sup(tres) < tol) {
                    u = std::move(trial);
                    res = std::move(tres);
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) {
                std::ostringstream os;
                os << "disk Newton: damping failed at amplitude " << amp << ", scaled residual " << sup;
                throw Error(ErrorCode::divergence, os.str());
            }
            sup = sys.scaled_sup(res);
            sol.residual_history.push_back(sup);
            ++total;
            ++it;
        }
        sol.residual_norm = sup;
    }
    sol.newton_iterations = total;

    const auto nt = static_cast<std::size_t>(grid.Ntheta);
    sol.values.assign((static_cast<std::size_t>(grid.Nr) + 1) * nt, 0.0);
    for (std::size_t j = 0; j < nt; ++j) sol.values[j] = u[0];
    for (int i = 1; i < grid.Nr; ++i) {
        for (std::size_t j = 0; j < nt; ++j) {
            sol.values[static_cast<std::size_t>(i) * nt + j] =
                u[static_cast<Eigen::Index>(grid.index(i, static_cast<int>(j)))];
        }
    }
    for (std::size_t j = 0; j < nt; ++j) sol.values[static_cast<std::size_t>(grid.Nr) * nt + j] = g[j];
    return sol;
}

double signed_distance_t(double z1, double z2) {
    const double q = 1.0 - (z1 * z1 + z2 * z2);
    if (!(q > 0.0)) throw Error(ErrorCode::invalid_argument, "point must lie in the open unit disk");
    return std::asinh(2.0 * z2 / q);
}

double signed_distance_polar(double r, double theta) {
    return std::asinh(std::sinh(r) * std::sin(theta));
}

double symmetry_deviation(const DiskSolution& sol, const std::vector<double>& levels, double margin) {
    const double r_top = sol.grid.R - margin;
    const double dr = sol.grid.dr();
    double worst = 0.0;
    for (double L : levels) {
        if (std::abs(L) >= r_top) {
            std::ostringstream os;
            os << "level " << L << " does not meet r <= " << r_top;
            throw Error(ErrorCode::empty_level_set, os.str());
        }
        const double r0 = std::abs(L);
        const int m = std::max(8, static_cast<int>(std::ceil(2.0 * (r_top - r0) / dr)));
        double lo = 1e300;
        double hi = -1e300;
        const double sL = std::sinh(L);
        for (int s = 0; s <= m; ++s) {
            const double r = r0 + (r_top - r0) * s / m;
            const double ratio = r > 0.0 ? std::clamp(sL / std::sinh(r), -1.0, 1.0) : 0.0;
            const double th = std::asin(ratio);
            for (double angle : {th, pi - th}) {
                const double v = sol.sample(r, angle);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
        worst = std::max(worst, hi - lo);
    }
    return worst;
}

double compare_with_profile(const DiskSolution& sol, const Profile1D& profile, double margin) {
    if (profile.chart != Chart::signed_dist_t) {
        throw Error(ErrorCode::chart_mismatch, "compare_with_profile needs a signed_dist_t profile");
    }
    const double r_top = sol.grid.R - margin;
    if (profile.grid.front() > -r_top || profile.grid.back() < r_top) {
        throw Error(ErrorCode::invalid_argument, "profile window does not cover the sampled t range");
    }
    double worst = std::abs(sol.pole() - profile.value_at(0.0));
    for (int i = 1; i <= sol.grid.Nr; ++i) {
        const double r = sol.grid.r[static_cast<std::size_t>(i)];
        if (r > r_top + 1e-12) break;
        for (int j = 0; j < sol.grid.Ntheta; ++j) {
            const double t = signed_distance_polar(r, sol.grid.theta[static_cast<std::size_t>(j)]);
            worst = std::max(worst, std::abs(sol.at(i, j) - profile.value_at(t)));
        }
    }
    return worst;
}

double max_principle_violation(const DiskSolution& sol) {
    double lo = -1.0;
    double hi = 1.0;
    for (double v : sol.boundary) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double worst = 0.0;
    for (double v : sol.values) worst = std::max({worst, lo - v, v - hi});
    return worst;
}

void write_disk_solution(const DiskSolution& sol, const std::filesystem::path& csv_path) {
    std::ofstream out(csv_path);
    if (!out) throw Error(ErrorCode::io, "cannot write " + csv_path.string());
    out << "r,theta,u\n";
    out << "0,0," << format_double(sol.pole()) << '\n';
    for (int i = 1; i <= sol.grid.Nr; ++i) {
        const std::string r = format_double(sol.grid.r[static_cast<std::size_t>(i)]);
        for (int j = 0; j < sol.grid.Ntheta; ++j) {
            out << r << ',' << format_double(sol.grid.theta[static_cast<std::size_t>(j)]) << ','
                << format_double(sol.at(i, j)) << '\n';
        }
    }
    nlohmann::ordered_json meta;
    meta["R"] = sol.grid.R;
    meta["Nr"] = sol.grid.Nr;
    meta["Ntheta"] = sol.grid.Ntheta;
    meta["theta_lattice"] = sol.grid.lattice == ThetaLattice::clustered ? "clustered" : "uniform";
    meta["cluster_eps"] = sol.grid.cluster_eps;
    meta["n"] = sol.params.n;
    meta["potential"] = {{"label", sol.params.potential.label}, {"k", sol.params.potential.k}};
    meta["residual_norm"] = sol.residual_norm;
    meta["newton_iterations"] = sol.newton_iterations;
    meta["residual_history"] = sol.residual_history;
    auto json_path = csv_path;
    json_path.replace_extension(".json");
    std::ofstream js(json_path);
    if (!js) throw Error(ErrorCode::io, "cannot write " + json_path.string());
    js << meta.dump(2) << '\n';
}

}  // namespace hypac
