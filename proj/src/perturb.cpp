#include "hypac/perturb.hpp"

#include "hypac/error.hpp"
#include "hypac/ode.hpp"
#include "hypac/parabolic.hpp"
#include "hypac/parallel.hpp"

#include <boost/math/constants/constants.hpp>
#include <json.hpp>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hypac {

namespace {

constexpr double pi = boost::math::constants::pi<double>();
using cplx = std::complex<double>;

// Tridiagonal system with real coefficients: a[i] x[i-1] + b[i] x[i] + c[i] x[i+1] = d[i].
struct Tridiag {
    std::vector<double> a, b, c;

    explicit Tridiag(std::size_t m) : a(m, 0.0), b(m, 0.0), c(m, 0.0) {}
    std::size_t size() const { return b.size(); }

    // Elimination in place on copies; returns min |pivot| / max |pivot|.
    template <class T>
    double solve(std::vector<T>& d) const {
        const std::size_t m = size();
        std::vector<double> bb(b);
        double lo = std::abs(bb[0]);
        double hi = lo;
        for (std::size_t i = 1; i < m; ++i) {
            const double w = a[i] / bb[i - 1];
            bb[i] -= w * c[i - 1];
            d[i] -= w * d[i - 1];
            lo = std::min(lo, std::abs(bb[i]));
            hi = std::max(hi, std::abs(bb[i]));
        }
        if (lo == 0.0) throw SingularJacobianError(-1.0, "mode operator has a zero pivot");
        d[m - 1] /= bb[m - 1];
        for (std::size_t i = m - 1; i-- > 0;) d[i] = (d[i] - c[i] * d[i + 1]) / bb[i];
        return lo / hi;
    }

    template <class T>
    std::vector<T> apply(const std::vector<T>& x) const {
        const std::size_t m = size();
        std::vector<T> y(m);
        for (std::size_t i = 0; i < m; ++i) {
            y[i] = b[i] * x[i];
            if (i > 0) y[i] += a[i] * x[i - 1];
            if (i + 1 < m) y[i] += c[i] * x[i + 1];
        }
        return y;
    }
};

double alpha_minus_of(const ProblemParams& params) {
    if (params.n != 2) throw Error(ErrorCode::invalid_argument, "perturbative families are built for n = 2");
    return indicial_roots(2, params.potential.lambda).lo;
}

double rho(double r) { return 1.0 - std::tanh(0.5 * r); }

// Finite-volume radial operator of Delta_m + lambda on r_i = i dr, i = 0..Nr-1
// (r_Nr carries Dirichlet data). Rows are multiplied by the cell volume, so
// the right-hand side must be volume[i] * q_i.
struct DiskModeOperator {
    Tridiag op;
    std::vector<double> volume;
    double boundary_coupling = 0.0;  // coefficient of v_Nr in row Nr-1

    DiskModeOperator(int m, double R, int Nr, double lambda) : op(static_cast<std::size_t>(Nr)) {
        const double dr = R / Nr;
        volume.assign(static_cast<std::size_t>(Nr), 0.0);
        const double half = 0.5 * dr;
        if (m == 0) {
            volume[0] = std::cosh(half) - 1.0;
            const double c0 = std::sinh(half) / dr;
            op.b[0] = -c0 + lambda * volume[0];
            op.c[0] = c0;
        } else {
            op.b[0] = 1.0;  // v(0) = 0
        }
        for (int i = 1; i < Nr; ++i) {
            const auto is = static_cast<std::size_t>(i);
            const double ri = (i - 0.5) * dr;
            const double ro = (i + 0.5) * dr;
            const double a = std::sinh(ri) / dr;
            const double c = std::sinh(ro) / dr;
            const double ang = std::log(std::tanh(0.5 * ro)) - std::log(std::tanh(0.5 * ri));
            volume[is] = std::cosh(ro) - std::cosh(ri);
            op.a[is] = (i == 1 && m != 0) ? 0.0 : a;
            op.b[is] = -a - c - static_cast<double>(m) * m * ang + lambda * volume[is];
            if (i + 1 < Nr) {
                op.c[is] = c;
            } else {
                boundary_coupling = c;
            }
        }
    }
};

// FD operator in xi for v'' - v' - (4 pi^2 k^2 e^{2 xi} + f'(u0)) v on nodes
// 0..Nx. Row 0 is Dirichlet; row Nx is Dirichlet for k != 0 and the decaying
// Robin closure v' = beta v for k = 0. Rows are multiplied by h^2.
Tridiag strip_mode_operator(int k, const std::vector<double>& xi, const std::vector<double>& fp,
                            double h, double beta) {
    const std::size_t m = xi.size();
    Tridiag t(m);
    t.b[0] = 1.0;
    const double kk = 4.0 * pi * pi * static_cast<double>(k) * k;
    for (std::size_t i = 1; i + 1 < m; ++i) {
        t.a[i] = 1.0 + 0.5 * h;
        t.c[i] = 1.0 - 0.5 * h;
        t.b[i] = -2.0 - h * h * (kk * std::exp(2.0 * xi[i]) + fp[i]);
    }
    if (k != 0) {
        t.b[m - 1] = 1.0;
    } else {
        // Ghost node v_{N+1} = v_{N-1} + 2 h beta v_N.
        t.a[m - 1] = 2.0;
        t.b[m - 1] = -2.0 + 2.0 * h * beta - h * h * beta - h * h * fp[m - 1];
    }
    return t;
}

std::vector<double> gradient(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t m = y.size();
    std::vector<double> d(m, 0.0);
    if (m < 2) return d;
    d[0] = (y[1] - y[0]) / (x[1] - x[0]);
    d[m - 1] = (y[m - 1] - y[m - 2]) / (x[m - 1] - x[m - 2]);
    for (std::size_t i = 1; i + 1 < m; ++i) d[i] = (y[i + 1] - y[i - 1]) / (x[i + 1] - x[i - 1]);
    return d;
}

Profile1D make_profile(Chart chart, std::vector<double> x, std::vector<double> y, const ProblemParams& params) {
    Profile1D p;
    p.chart = chart;
    p.derivs = gradient(x, y);
    p.grid = std::move(x);
    p.values = std::move(y);
    p.params = params;
    return p;
}

std::shared_ptr<const Profile1D> base_profile_for(const ProblemParams& params,
                                                  const std::shared_ptr<const Profile1D>& given) {
    if (given) {
        if (given->chart != Chart::log_x_xi) {
            throw Error(ErrorCode::chart_mismatch, "parabolic base must be a log_x_xi profile");
        }
        return given;
    }
    return std::make_shared<const Profile1D>(heteroclinic_profile(params, 1e-11).xi_profile);
}

// Real signal on Ny points <-> half spectrum of Ny/2 + 1 coefficients.
class RealFFT {
public:
    explicit RealFFT(int n) : n_(n) { fft_.SetFlag(Eigen::FFT<double>::HalfSpectrum); }
    std::vector<cplx> forward(const std::vector<double>& x) {
        std::vector<cplx> out;
        fft_.fwd(out, x);
        return out;
    }
    std::vector<double> inverse(const std::vector<cplx>& c) {
        std::vector<double> out;
        fft_.inv(out, c, n_);
        return out;
    }
    int modes() const { return n_ / 2 + 1; }

private:
    int n_;
    Eigen::FFT<double> fft_;
};

double fourier_value(const std::vector<FourierTerm>& phi0, double angle) {
    double s = 0.0;
    for (const auto& t : phi0) s += t.cos_coeff * std::cos(t.index * angle) + t.sin_coeff * std::sin(t.index * angle);
    return s;
}

std::vector<FourierTerm> scaled_terms(const std::vector<FourierTerm>& phi0, double amplitude) {
    std::vector<FourierTerm> out = phi0;
    for (auto& t : out) {
        if (t.index < 0) throw Error(ErrorCode::invalid_argument, "Fourier indices must be non-negative");
        t.cos_coeff *= amplitude;
        t.sin_coeff *= amplitude;
    }
    return out;
}

bool all_zero(const std::vector<FourierTerm>& phi0) {
    return std::all_of(phi0.begin(), phi0.end(),
                       [](const FourierTerm& t) { return t.cos_coeff == 0.0 && t.sin_coeff == 0.0; });
}

void record_increment(PerturbedSolution& sol, double inc) {
    sol.contraction_history.push_back(inc);
    const std::size_t m = sol.contraction_history.size();
    if (m >= 2) {
        const double prev = sol.contraction_history[m - 2];
        const double ratio = prev > 0.0 ? inc / prev : 0.0;
        sol.max_ratio = std::max(sol.max_ratio, ratio);
        if (ratio >= 1.0) {
            std::ostringstream os;
            os << "increment grew from " << prev << " to " << inc << " at iteration " << m;
            throw Error(ErrorCode::contraction_failure, os.str());
        }
    }
}

// Applies per-mode solves to a field (rows x cols) in place.
using ModeSolve = std::function<void(int mode, std::vector<cplx>& column)>;

std::vector<double> spectral_apply(const std::vector<double>& field, std::size_t rows, int cols,
                                   const ModeSolve& solve) {
    RealFFT fft(cols);
    const int modes = fft.modes();
    const auto nc = static_cast<std::size_t>(cols);
    std::vector<std::vector<cplx>> spec(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        std::vector<double> row(field.begin() + static_cast<long>(i * nc),
                                field.begin() + static_cast<long>((i + 1) * nc));
        spec[i] = fft.forward(row);
    }
    parallel_for(static_cast<std::size_t>(modes), [&](std::size_t m) {
        std::vector<cplx> column(rows);
        for (std::size_t i = 0; i < rows; ++i) column[i] = spec[i][m];
        solve(static_cast<int>(m), column);
        for (std::size_t i = 0; i < rows; ++i) spec[i][m] = column[i];
    });
    std::vector<double> out(rows * nc);
    for (std::size_t i = 0; i < rows; ++i) {
        const auto row = fft.inverse(spec[i]);
        std::copy(row.begin(), row.end(), out.begin() + static_cast<long>(i * nc));
    }
    return out;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
    return s;
}

std::vector<double> row_sup(const std::vector<double>& field, std::size_t rows, std::size_t cols) {
    std::vector<double> s(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) s[i] = std::max(s[i], std::abs(field[i * cols + j]));
    }
    return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Mode solutions

ModeSolution poisson_mode(const ProblemParams& params, ModeDomain domain, ModeBase base, int mode_index,
                          const ModeGrid& grid) {
    const double alpha = alpha_minus_of(params);
    if (mode_index < 0) throw Error(ErrorCode::invalid_argument, "mode index must be non-negative");
    const auto& pot = params.potential;
    ModeSolution out;
    out.domain = domain;
    out.mode_index = mode_index;

    if (domain == ModeDomain::disk) {
        if (base != ModeBase::zero) throw Error(ErrorCode::invalid_argument, "the disk mode is built on u0 = 0");
        if (!(grid.R >= 10.0) || grid.points_per_unit < 20) {
            throw Error(ErrorCode::invalid_argument, "disk mode needs R >= 10 and >= 20 points per unit");
        }
        const double m = mode_index;
        const double mu = pot.fprime(0.0);
        const double r0 = 1e-3;
        const double c2 = (mu - m * (m + 1.0) / 3.0) / (4.0 * (m + 1.0));
        const ode::Vec2 y0{std::pow(r0, m) * (1.0 + c2 * r0 * r0),
                           (m == 0 ? 0.0 : m * std::pow(r0, m - 1.0)) + c2 * (m + 2.0) * std::pow(r0, m + 1.0)};
        const int np = static_cast<int>(std::lround(grid.R * grid.points_per_unit));
        const double h = grid.R / np;
        std::vector<double> outputs;
        for (int i = 1; i <= np; ++i) outputs.push_back(i * h);
        auto rhs = [&](double r, const ode::Vec2& y) -> ode::Vec2 {
            const double s = std::sinh(r);
            return {y[1], -y[1] / std::tanh(r) + (m * m / (s * s) + mu) * y[0]};
        };
        ode::Options o;
        o.rtol = 1e-12;
        o.atol = 0.0;
        o.h_max = 0.05;
        const auto res = ode::integrate(rhs, r0, y0, grid.R, o, outputs);
        if (!res.reached_end || res.samples.size() != outputs.size()) {
            throw Error(ErrorCode::no_decay_solution, "disk mode shot did not reach R");
        }
        const double vR = res.samples.back().y[0];
        if (!(std::abs(vR) > 0.0) || !std::isfinite(vR)) {
            throw Error(ErrorCode::no_decay_solution, "disk mode vanishes at R");
        }
        const double scale = std::pow(rho(grid.R), alpha) / vR;
        Profile1D& p = out.profile;
        p.chart = Chart::geodesic_r;
        p.params = params;
        p.grid.push_back(0.0);
        p.values.push_back(m == 0 ? scale : 0.0);
        p.derivs.push_back(m == 1 ? scale : 0.0);
        for (const auto& s : res.samples) {
            p.grid.push_back(s.t);
            p.values.push_back(scale * s.y[0]);
            p.derivs.push_back(scale * s.y[1]);
        }
        try {
            out.fit = fit_decay_exponent(p, {0.5 * grid.R, grid.R}, DecayTarget::to_zero);
        } catch (const Error& e) {
            throw Error(ErrorCode::no_decay_solution, std::string("disk mode decay fit failed: ") + e.what());
        }
        out.exponent_at_boundary = out.fit.exponent;
        // Integrated form on [h, R]: [sinh r v']_a^b = int sinh r (m^2 / sinh^2 r + mu) v.
        std::vector<double> x, g;
        for (std::size_t i = 1; i < p.size(); ++i) {
            const double r = p.grid[i];
            x.push_back(r);
            g.push_back(std::sinh(r) * (m * m / (std::sinh(r) * std::sinh(r)) + mu) * p.values[i]);
        }
        std::vector<double> ga(g.size());
        std::transform(g.begin(), g.end(), ga.begin(), [](double v) { return std::abs(v); });
        const double lhs_b = std::sinh(x.back()) * p.derivs.back();
        const double lhs_a = std::sinh(x.front()) * p.derivs[1];
        out.residual = std::abs(lhs_b - lhs_a - simpson(x, g)) /
                       (std::abs(lhs_b) + std::abs(lhs_a) + simpson(x, ga));
        return out;
    }

    // Strip.
    if (!(grid.h > 0.0) || !(grid.xi_max - grid.xi_min > 20.0 * grid.h)) {
        throw Error(ErrorCode::invalid_argument, "strip mode grid is too small");
    }
    const auto nx = static_cast<std::size_t>(std::lround((grid.xi_max - grid.xi_min) / grid.h));
    const double h = (grid.xi_max - grid.xi_min) / static_cast<double>(nx);
    std::vector<double> xi(nx + 1);
    for (std::size_t i = 0; i <= nx; ++i) xi[i] = grid.xi_min + h * static_cast<double>(i);
    std::vector<double> values(nx + 1);

    if (base == ModeBase::zero && mode_index == 0) {
        for (std::size_t i = 0; i <= nx; ++i) values[i] = std::exp(alpha * xi[i]);
        out.residual = plane_wave_residual(params, grid);
    } else {
        std::vector<double> fp(nx + 1, pot.fprime(0.0));
        if (base == ModeBase::parabolic_ode) {
            const auto u0 = base_profile_for(params, grid.base_profile);
            for (std::size_t i = 0; i <= nx; ++i) fp[i] = pot.fprime(u0->value_at(xi[i]));
        }
        const double beta = 0.5 * (1.0 - std::sqrt(1.0 + 4.0 * pot.fprime(1.0)));
        const Tridiag op = strip_mode_operator(mode_index, xi, fp, h, beta);
        std::vector<double> d(nx + 1, 0.0);
        d[0] = std::exp(alpha * xi[0]);
        values = d;
        op.solve(values);
        const auto applied = op.apply(values);
        double worst = 0.0;
        double scale = 0.0;
        for (std::size_t i = 0; i <= nx; ++i) {
            worst = std::max(worst, std::abs(applied[i] - d[i]));
            scale = std::max(scale, std::abs(op.b[i] * values[i]));
        }
        out.residual = worst / scale;
        if (mode_index != 0) {
            for (std::size_t i = 0; i < nx; ++i) {
                if (values[i] < 0.0) {
                    throw Error(ErrorCode::no_decay_solution, "strip mode changes sign before decaying");
                }
            }
        }
    }
    out.profile = make_profile(Chart::log_x_xi, xi, values, params);
    const double span = grid.xi_max - grid.xi_min;
    try {
        out.fit = fit_decay_exponent(out.profile, {grid.xi_min, grid.xi_min + span / 3.0}, DecayTarget::to_zero);
    } catch (const Error& e) {
        throw Error(ErrorCode::no_decay_solution, std::string("strip mode decay fit failed: ") + e.what());
    }
    out.exponent_at_boundary = out.fit.exponent;
    if (mode_index != 0) {
        // Far field e^{-2 pi |k| x}: slope of log v against x where v has
        // dropped by 4 to 12 decades from its peak.
        const double peak = *std::max_element(values.begin(), values.end());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int cnt = 0;
        for (std::size_t i = 0; i <= nx; ++i) {
            const double rel = values[i] / peak;
            if (xi[i] > 0.0 && rel < 1e-4 && rel > 1e-12) {
                const double x = std::exp(xi[i]);
                const double y = std::log(values[i]);
                sx += x; sy += y; sxx += x * x; sxy += x * y;
                ++cnt;
            }
        }
        if (cnt >= 3) out.far_rate = -(cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
        out.far_rate_predicted = 2.0 * pi * mode_index;
    }
    return out;
}

double plane_wave_residual(const ProblemParams& params, const ModeGrid& grid) {
    const double alpha = alpha_minus_of(params);
    const double lambda = params.potential.lambda;
    double worst = 0.0;
    const auto nx = static_cast<std::size_t>(std::lround((grid.xi_max - grid.xi_min) / grid.h));
    for (std::size_t i = 0; i <= nx; ++i) {
        const double xi = grid.xi_min + (grid.xi_max - grid.xi_min) * static_cast<double>(i) / static_cast<double>(nx);
        const double s = std::exp(alpha * xi);
        const double d1 = alpha * s;
        const double d2 = alpha * alpha * s;
        worst = std::max(worst, std::abs(d2 - d1 + lambda * s) / (std::abs(d2) + std::abs(d1) + lambda * s));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Disk contraction

PerturbedSolution contract_elliptic(const ProblemParams& params, const std::vector<FourierTerm>& phi0,
                                    double amplitude, const EllipticGrid& grid, double tol,
                                    const ContractOptions& opts) {
    const double alpha = alpha_minus_of(params);
    if (!(std::abs(amplitude) <= opts.amplitude_ceiling)) {
        throw Error(ErrorCode::invalid_argument, "amplitude above the contraction ceiling");
    }
    if (grid.Nr < 50 || grid.Ntheta < 8 || grid.Ntheta % 2 != 0 || !(grid.R > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "elliptic grid needs Nr >= 50 and even Ntheta >= 8");
    }
    if (!(tol > 0.0)) throw Error(ErrorCode::invalid_argument, "tolerance must be positive");
    const auto& pot = params.potential;
    const double lambda = pot.lambda;
    const int Nr = grid.Nr;
    const int Nt = grid.Ntheta;
    const auto rows = static_cast<std::size_t>(Nr) + 1;
    const auto cols = static_cast<std::size_t>(Nt);
    const double dr = grid.R / Nr;

    PerturbedSolution sol;
    sol.base = ModeBase::zero;
    sol.phi0 = scaled_terms(phi0, amplitude);
    for (const auto& t : sol.phi0) {
        if (t.index > Nt / 2) throw Error(ErrorCode::invalid_argument, "phi0 index beyond the angular resolution");
    }
    for (std::size_t i = 0; i < rows; ++i) sol.coord1.push_back(dr * static_cast<double>(i));
    for (std::size_t j = 0; j < cols; ++j) sol.coord2.push_back(2.0 * pi * static_cast<double>(j) / Nt);
    sol.base_field.assign(rows * cols, 0.0);
    sol.correction.assign(rows * cols, 0.0);
    sol.total.assign(rows * cols, 0.0);

    const int modes = Nt / 2 + 1;
    std::vector<DiskModeOperator> ops;
    ops.reserve(static_cast<std::size_t>(modes));
    for (int m = 0; m < modes; ++m) ops.emplace_back(m, grid.R, Nr, lambda);
    sol.pivot_ratio.assign(static_cast<std::size_t>(modes), 0.0);

    // Boundary spectrum of rho(R)^alpha phi0.
    std::vector<double> gb(cols);
    for (std::size_t j = 0; j < cols; ++j) gb[j] = std::pow(rho(grid.R), alpha) * fourier_value(sol.phi0, sol.coord2[j]);
    RealFFT fft(Nt);
    const auto gspec = fft.forward(gb);

    // L^{-1}: rows 0..Nr-1 solved, row Nr holds Dirichlet data `edge`.
    auto solve_field = [&](const std::vector<double>& q, bool with_data) {
        return spectral_apply(q, rows, Nt, [&](int m, std::vector<cplx>& col) {
            const auto& mo = ops[static_cast<std::size_t>(m)];
            const cplx edge = with_data ? gspec[static_cast<std::size_t>(m)] : cplx(0.0);
            std::vector<cplx> d(static_cast<std::size_t>(Nr));
            for (int i = 0; i < Nr; ++i) d[static_cast<std::size_t>(i)] = mo.volume[static_cast<std::size_t>(i)] * col[static_cast<std::size_t>(i)];
            if (m != 0) d[0] = 0.0;
            d[static_cast<std::size_t>(Nr - 1)] -= mo.boundary_coupling * edge;
            sol.pivot_ratio[static_cast<std::size_t>(m)] = mo.op.solve(d);
            for (int i = 0; i < Nr; ++i) col[static_cast<std::size_t>(i)] = d[static_cast<std::size_t>(i)];
            col[static_cast<std::size_t>(Nr)] = edge;
        });
    };
    auto nonlinear = [&](const std::vector<double>& u) {
        std::vector<double> q(u.size());
        for (std::size_t p = 0; p < u.size(); ++p) q[p] = pot.f(u[p]) + lambda * u[p];
        return q;
    };

    if (all_zero(sol.phi0)) {
        sol.leading_fit = {};
        return sol;
    }
    const std::vector<double> P = solve_field(std::vector<double>(rows * cols, 0.0), true);
    std::vector<double> w(rows * cols, 0.0);
    for (int it = 0;; ++it) {
        if (it >= opts.max_iterations) {
            throw Error(ErrorCode::max_iterations, "elliptic contraction did not reach the tolerance");
        }
        std::vector<double> u(rows * cols);
        for (std::size_t p = 0; p < u.size(); ++p) u[p] = P[p] + w[p];
        auto w_next = solve_field(nonlinear(u), false);
        const double inc = sup_diff(w_next, w);
        w = std::move(w_next);
        ++sol.iterations;
        record_increment(sol, inc);
        if (inc < tol) break;
    }
    sol.correction = w;
    for (std::size_t p = 0; p < w.size(); ++p) sol.total[p] = P[p] + w[p];
    {
        const auto check = solve_field(nonlinear(sol.total), false);
        sol.residual = sup_diff(check, w);
    }

    const auto tot_sup = row_sup(sol.total, rows, cols);
    const auto w_sup = row_sup(w, rows, cols);
    const auto lead = make_profile(Chart::geodesic_r, sol.coord1, tot_sup, params);
    sol.leading_fit = fit_decay_exponent(lead, {0.5 * grid.R, grid.R}, DecayTarget::to_zero);
    const auto corr = make_profile(Chart::geodesic_r, sol.coord1, w_sup, params);
    sol.correction_fit = fit_decay_exponent(corr, {grid.R / 3.0, 2.0 * grid.R / 3.0}, DecayTarget::to_zero);
    const std::size_t mid = rows / 2;
    double lo = 1e300, hi = -1e300;
    for (std::size_t j = 0; j < cols; ++j) {
        lo = std::min(lo, sol.total_at(mid, j));
        hi = std::max(hi, sol.total_at(mid, j));
    }
    sol.angular_spread = hi - lo;
    return sol;
}

// ---------------------------------------------------------------------------
// Strip contraction

PerturbedSolution contract_parabolic(const ProblemParams& params, const std::vector<FourierTerm>& phi0,
                                     double amplitude, const StripGrid& grid, double tol,
                                     const ContractOptions& opts) {
    const double alpha = alpha_minus_of(params);
    for (const auto& t : phi0) {
        if (t.index == 0 && (t.cos_coeff != 0.0 || t.sin_coeff != 0.0)) {
            throw Error(ErrorCode::mean_not_zero, "phi0 must have zero mean in y");
        }
    }
    if (!(std::abs(amplitude) <= opts.amplitude_ceiling)) {
        throw Error(ErrorCode::invalid_argument, "amplitude above the contraction ceiling");
    }
    if (grid.Ny < 8 || grid.Ny % 2 != 0 || !(grid.h > 0.0) || !(grid.xi_max - grid.xi_min > 100.0 * grid.h)) {
        throw Error(ErrorCode::invalid_argument, "strip grid needs even Ny >= 8 and at least 100 cells");
    }
    if (!(tol > 0.0)) throw Error(ErrorCode::invalid_argument, "tolerance must be positive");
    const auto& pot = params.potential;
    const auto u0 = base_profile_for(params, grid.base_profile);
    if (u0->grid.front() > grid.xi_min || u0->grid.back() < grid.xi_max) {
        throw Error(ErrorCode::invalid_argument, "base profile does not cover the strip");
    }

    const auto nx = static_cast<std::size_t>(std::lround((grid.xi_max - grid.xi_min) / grid.h));
    const double h = (grid.xi_max - grid.xi_min) / static_cast<double>(nx);
    const std::size_t rows = nx + 1;
    const auto cols = static_cast<std::size_t>(grid.Ny);

    PerturbedSolution sol;
    sol.base = ModeBase::parabolic_ode;
    sol.phi0 = scaled_terms(phi0, amplitude);
    for (const auto& t : sol.phi0) {
        if (t.index > grid.Ny / 2) throw Error(ErrorCode::invalid_argument, "phi0 index beyond the y resolution");
    }
    std::vector<double> ub(rows), fp(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        const double xi = grid.xi_min + h * static_cast<double>(i);
        sol.coord1.push_back(xi);
        ub[i] = u0->value_at(xi);
        fp[i] = pot.fprime(ub[i]);
    }
    for (std::size_t j = 0; j < cols; ++j) sol.coord2.push_back(static_cast<double>(j) / grid.Ny);
    sol.base_field.resize(rows * cols);
    for (std::size_t i = 0; i < rows; ++i) std::fill_n(sol.base_field.begin() + static_cast<long>(i * cols), cols, ub[i]);
    sol.correction.assign(rows * cols, 0.0);
    sol.total = sol.base_field;
    sol.mean_correction.assign(rows, 0.0);

    const int modes = grid.Ny / 2 + 1;
    const double beta = 0.5 * (1.0 - std::sqrt(1.0 + 4.0 * pot.fprime(1.0)));
    std::vector<Tridiag> ops;
    for (int k = 0; k < modes; ++k) ops.push_back(strip_mode_operator(k, sol.coord1, fp, h, beta));
    sol.pivot_ratio.assign(static_cast<std::size_t>(modes), 0.0);

    std::vector<double> gb(cols);
    for (std::size_t j = 0; j < cols; ++j) {
        gb[j] = std::exp(alpha * grid.xi_min) * fourier_value(sol.phi0, 2.0 * pi * sol.coord2[j]);
    }
    RealFFT fft(grid.Ny);
    const auto gspec = fft.forward(gb);

    auto solve_field = [&](const std::vector<double>& q, bool with_data) {
        return spectral_apply(q, rows, grid.Ny, [&](int k, std::vector<cplx>& col) {
            const auto ks = static_cast<std::size_t>(k);
            std::vector<cplx> d(rows);
            for (std::size_t i = 1; i + 1 < rows; ++i) d[i] = h * h * col[i];
            d[0] = with_data ? gspec[ks] : cplx(0.0);
            d[rows - 1] = k == 0 ? h * h * col[rows - 1] : cplx(0.0);
            sol.pivot_ratio[ks] = ops[ks].solve(d);
            col = std::move(d);
        });
    };
    // Q relative to the base: f(u0 + s) - f(u0) - f'(u0) s.
    auto nonlinear = [&](const std::vector<double>& s) {
        std::vector<double> q(s.size());
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < cols; ++j) {
                const std::size_t p = i * cols + j;
                q[p] = pot.f(ub[i] + s[p]) - pot.f(ub[i]) - fp[i] * s[p];
            }
        }
        return q;
    };

    if (all_zero(sol.phi0)) return sol;

    const std::vector<double> P = solve_field(std::vector<double>(rows * cols, 0.0), true);
    std::vector<double> w(rows * cols, 0.0);
    for (int it = 0;; ++it) {
        if (it >= opts.max_iterations) {
            throw Error(ErrorCode::max_iterations, "strip contraction did not reach the tolerance");
        }
        std::vector<double> s(rows * cols);
        for (std::size_t p = 0; p < s.size(); ++p) s[p] = P[p] + w[p];
        auto w_next = solve_field(nonlinear(s), false);
        const double inc = sup_diff(w_next, w);
        w = std::move(w_next);
        ++sol.iterations;
        record_increment(sol, inc);
        if (inc < tol) break;
    }
    std::vector<double> s(rows * cols);
    for (std::size_t p = 0; p < s.size(); ++p) {
        s[p] = P[p] + w[p];
        sol.correction[p] = s[p];
        sol.total[p] = sol.base_field[p] + s[p];
    }
    {
        const auto check = solve_field(nonlinear(s), false);
        sol.residual = sup_diff(check, w);
    }

    // c(x) is the y-mean of the correction; v = correction - c.
    double defect = 0.0;
    double spread = 0.0;
    std::vector<double> v_sup(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        double mean = 0.0;
        for (std::size_t j = 0; j < cols; ++j) mean += s[i * cols + j];
        mean /= static_cast<double>(cols);
        sol.mean_correction[i] = mean;
        double lo = 1e300, hi = -1e300;
        for (std::size_t j = 0; j < cols; ++j) {
            const double v = s[i * cols + j] - mean;
            lo = std::min(lo, sol.total[i * cols + j]);
            hi = std::max(hi, sol.total[i * cols + j]);
            v_sup[i] = std::max(v_sup[i], std::abs(v));
        }
        spread = std::max(spread, hi - lo);
    }
    {
        // Cusp-form condition: k = 0 coefficient of v at every xi.
        for (std::size_t i = 0; i < rows; ++i) {
            std::vector<double> row(cols);
            for (std::size_t j = 0; j < cols; ++j) row[j] = s[i * cols + j] - sol.mean_correction[i];
            defect = std::max(defect, std::abs(fft.forward(row)[0]) / static_cast<double>(cols));
        }
    }
    sol.cusp_form_defect = defect;
    sol.angular_spread = spread;
    double far = 0.0;
    for (std::size_t j = 0; j < cols; ++j) far = std::max(far, std::abs(sol.total_at(rows - 1, j) - 1.0));
    sol.far_deviation = far;

    const double span = grid.xi_max - grid.xi_min;
    const auto lead = make_profile(Chart::log_x_xi, sol.coord1, v_sup, params);
    sol.leading_fit = fit_decay_exponent(lead, {grid.xi_min, grid.xi_min + span / 3.0}, DecayTarget::to_zero);

    // Recovered boundary coefficient of each input mode at xi_min + span / 6.
    const auto probe = static_cast<std::size_t>(std::lround(span / 6.0 / h));
    std::vector<double> row(cols);
    for (std::size_t j = 0; j < cols; ++j) row[j] = s[probe * cols + j];
    const auto spec = fft.forward(row);
    const double xa = std::exp(-alpha * sol.coord1[probe]);
    for (const auto& t : sol.phi0) {
        const double mag = 2.0 * std::abs(spec[static_cast<std::size_t>(t.index)]) / static_cast<double>(cols);
        sol.recovered_phi0.emplace_back(t.index, mag * xa);
    }
    return sol;
}

void write_perturbed(const PerturbedSolution& sol, const std::filesystem::path& csv_path) {
    std::ofstream out(csv_path);
    if (!out) throw Error(ErrorCode::io, "cannot write " + csv_path.string());
    out << "x_or_r,y_or_theta,u\n";
    const bool strip = sol.base == ModeBase::parabolic_ode;
    for (std::size_t i = 0; i < sol.coord1.size(); ++i) {
        const double c1 = strip ? std::exp(sol.coord1[i]) : sol.coord1[i];
        const std::string a = format_double(c1);
        for (std::size_t j = 0; j < sol.coord2.size(); ++j) {
            out << a << ',' << format_double(sol.coord2[j]) << ',' << format_double(sol.total_at(i, j)) << '\n';
        }
    }
    nlohmann::ordered_json meta;
    meta["base"] = strip ? "parabolic_ode" : "zero";
    meta["phi0"] = nlohmann::json::array();
    for (const auto& t : sol.phi0) meta["phi0"].push_back({t.index, t.cos_coeff, t.sin_coeff});
    meta["iterations"] = sol.iterations;
    meta["contraction_history"] = sol.contraction_history;
    meta["max_ratio"] = sol.max_ratio;
    meta["residual"] = sol.residual;
    meta["leading_exponent"] = sol.leading_fit.exponent;
    if (!strip) meta["correction_exponent"] = sol.correction_fit.exponent;
    meta["angular_spread"] = sol.angular_spread;
    if (strip) {
        meta["cusp_form_defect"] = sol.cusp_form_defect;
        meta["far_deviation"] = sol.far_deviation;
    }
    meta["pivot_ratio"] = sol.pivot_ratio;
    auto json_path = csv_path;
    json_path.replace_extension(".json");
    std::ofstream js(json_path);
    if (!js) throw Error(ErrorCode::io, "cannot write " + json_path.string());
    js << meta.dump(2) << '\n';
}

}  // namespace hypac
