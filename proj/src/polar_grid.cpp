#include "hypac/polar_grid.hpp"

#include "hypac/error.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>

namespace hypac {

namespace {
constexpr double pi = boost::math::constants::pi<double>();
}

DiskGrid make_disk_grid(double R, int Nr, int Ntheta, ThetaLattice lattice, double eps) {
    if (!(R > 0.0) || Nr < 4 || Ntheta < 8) {
        throw Error(ErrorCode::invalid_argument, "disk grid needs R > 0, Nr >= 4, Ntheta >= 8");
    }
    if (Ntheta % 2 != 0) throw Error(ErrorCode::invalid_argument, "Ntheta must be even");
    if (lattice == ThetaLattice::clustered && Ntheta % 4 != 0) {
        throw Error(ErrorCode::invalid_argument, "clustered lattice needs Ntheta divisible by 4");
    }
    DiskGrid g;
    g.R = R;
    g.Nr = Nr;
    g.Ntheta = Ntheta;
    g.lattice = lattice;
    g.r.resize(static_cast<std::size_t>(Nr) + 1);
    for (int i = 0; i <= Nr; ++i) g.r[static_cast<std::size_t>(i)] = R * i / Nr;

    const auto nt = static_cast<std::size_t>(Ntheta);
    g.theta.resize(nt);
    if (lattice == ThetaLattice::uniform) {
        for (std::size_t j = 0; j < nt; ++j) g.theta[j] = 2.0 * pi * static_cast<double>(j) / Ntheta;
    } else {
        if (eps <= 0.0) eps = R > 3.0 ? 1.0 / std::sinh(R - 2.0) : 1e-3;
        g.cluster_eps = eps;
        const int q = Ntheta / 4;
        const double L = std::log1p(0.5 * pi / eps);
        std::vector<double> quarter(static_cast<std::size_t>(q) + 1);
        for (int s = 0; s <= q; ++s) quarter[static_cast<std::size_t>(s)] = eps * std::expm1(L * s / q);
        quarter.back() = 0.5 * pi;
        for (int s = 0; s < q; ++s) {
            const auto k = static_cast<std::size_t>(s);
            g.theta[k] = quarter[k];                                          // [0, pi/2)
            g.theta[static_cast<std::size_t>(q) + k] = pi - quarter[static_cast<std::size_t>(q - s)];  // [pi/2, pi)
            g.theta[static_cast<std::size_t>(2 * q) + k] = pi + quarter[k];   // [pi, 3pi/2)
            g.theta[static_cast<std::size_t>(3 * q) + k] = 2.0 * pi - quarter[static_cast<std::size_t>(q - s)];
        }
    }
    g.gap.resize(nt);
    for (std::size_t j = 0; j < nt; ++j) {
        const double next = j + 1 < nt ? g.theta[j + 1] : g.theta[0] + 2.0 * pi;
        g.gap[j] = next - g.theta[j];
    }
    g.width.resize(nt);
    for (std::size_t j = 0; j < nt; ++j) {
        const double prev = g.gap[j == 0 ? nt - 1 : j - 1];
        g.width[j] = 0.5 * (prev + g.gap[j]);
    }
    return g;
}

PolarOperator assemble_polar_operator(const DiskGrid& g) {
    const double dr = g.dr();
    const int nt = g.Ntheta;
    const std::size_t n = g.unknowns();
    PolarOperator op;
    op.volume.assign(n, 0.0);
    op.boundary_coupling.assign(static_cast<std::size_t>(nt), 0.0);
    op.diagonal.assign(n, 0.0);

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(5 * n + static_cast<std::size_t>(nt));
    auto couple = [&](std::size_t a, std::size_t b, double c) {
        trips.emplace_back(a, b, -c);
        trips.emplace_back(b, a, -c);
        op.diagonal[a] += c;
        op.diagonal[b] += c;
    };

    // Pole: disk of radius dr/2.
    const double half = 0.5 * dr;
    op.volume[0] = 2.0 * boost::math::constants::pi<double>() * (std::cosh(half) - 1.0);
    for (int j = 0; j < nt; ++j) {
        const double c = std::sinh(half) * g.width[static_cast<std::size_t>(j)] / dr;
        couple(0, g.index(1, j), c);
    }
    // log tanh(r/2) antiderivative of 1/sinh r.
    auto inv_sinh_integral = [](double a, double b) {
        return std::log(std::tanh(0.5 * b)) - std::log(std::tanh(0.5 * a));
    };
    for (int i = 1; i < g.Nr; ++i) {
        const double r_in = (i - 0.5) * dr;
        const double r_out = (i + 0.5) * dr;
        const double ang = inv_sinh_integral(r_in, r_out);
        for (int j = 0; j < nt; ++j) {
            const auto js = static_cast<std::size_t>(j);
            const std::size_t p = g.index(i, j);
            op.volume[p] = (std::cosh(r_out) - std::cosh(r_in)) * g.width[js];
            const double radial = std::sinh(r_out) * g.width[js] / dr;
            if (i + 1 < g.Nr) {
                couple(p, g.index(i + 1, j), radial);
            } else {
                op.boundary_coupling[js] = radial;
                op.diagonal[p] += radial;
            }
            const int jn = (j + 1) % nt;
            couple(p, g.index(i, jn), ang / g.gap[js]);
        }
    }
    for (std::size_t p = 0; p < n; ++p) trips.emplace_back(p, p, op.diagonal[p]);
    op.neg_laplacian.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    op.neg_laplacian.setFromTriplets(trips.begin(), trips.end());
    return op;
}

}  // namespace hypac
