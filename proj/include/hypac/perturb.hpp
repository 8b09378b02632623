#pragma once

#include "hypac/diagnostics.hpp"
#include "hypac/model.hpp"

#include <complex>
#include <memory>
#include <utility>
#include <vector>

namespace hypac {

// Non-symmetric solutions near a symmetric one (n = 2 only):
//   disk:  u = P(phi0) + w around u0 = 0, with (Delta + lambda) w = Q(u),
//          Q(u) = f(u) + lambda u;
//   strip: u = u0(x) + c(x) + v(x, y) on the half-space quotient with period 1
//          in y, u0 the parabolic heteroclinic, v mean free in y.

enum class ModeDomain { disk, strip };
enum class ModeBase { zero, parabolic_ode };

struct ModeGrid {
    // disk: regular shot from the pole over [0, R]
    double R = 24.0;
    int points_per_unit = 200;
    // strip: xi = log x on [xi_min, xi_max] with spacing h
    double xi_min = -30.0;
    double xi_max = 30.0;
    double h = 0.01;
    /// Parabolic base; computed from the potential when null.
    std::shared_ptr<const Profile1D> base_profile;
};

struct ModeSolution {
    ModeDomain domain = ModeDomain::disk;
    int mode_index = 0;
    /// geodesic_r chart (disk) or log_x_xi chart (strip).
    Profile1D profile;
    DecayFit fit;                       ///< towards the ideal boundary (r -> inf, x -> 0)
    double exponent_at_boundary = 0.0;
    double residual = 0.0;              ///< relative residual of the mode ODE
    /// Strip, k != 0: fitted -d log|v| / dx at large x, and 2 pi |k|.
    double far_rate = 0.0;
    double far_rate_predicted = 0.0;
};

/// Disk: v'' + coth r v' - m^2 v / sinh^2 r = f'(0) v, regular at r = 0, scaled
/// so that v(R) = rho(R)^{alpha_-} with rho = 1 - tanh(r/2). Exponent fitted
/// on [R/2, R].
/// Strip: v'' - v' - 4 pi^2 k^2 e^{2 xi} v = f'(u0) v in xi = log x, with
/// v = x^{alpha_-} at xi_min and v -> 0 at xi_max; exponent fitted on the
/// first third of the window. Base zero with k = 0 returns x^{alpha_-} itself.
/// ComplexRootsError when lambda > 1/4; NoDecaySolution when the decaying
/// branch cannot be isolated.
ModeSolution poisson_mode(const ProblemParams& params, ModeDomain domain, ModeBase base,
                          int mode_index, const ModeGrid& grid = {});

/// sup over the xi grid of |sigma'' - sigma' + lambda sigma| / |sigma| for
/// sigma = x^{alpha_-}.
double plane_wave_residual(const ProblemParams& params, const ModeGrid& grid = {});

struct FourierTerm {
    int index = 0;
    double cos_coeff = 0.0;
    double sin_coeff = 0.0;
};

struct ContractOptions {
    double amplitude_ceiling = 0.05;
    int max_iterations = 50;
};

struct EllipticGrid {
    double R = 24.0;
    int Nr = 1200;
    int Ntheta = 64;
};

struct StripGrid {
    double xi_min = -30.0;
    double xi_max = 30.0;
    double h = 0.01;
    int Ny = 64;
    std::shared_ptr<const Profile1D> base_profile;
};

struct PerturbedSolution {
    ModeBase base = ModeBase::zero;
    std::vector<FourierTerm> phi0;  ///< already multiplied by the amplitude
    /// First coordinate: r (disk) or xi (strip); second: theta or y.
    std::vector<double> coord1;
    std::vector<double> coord2;
    /// Row-major, coord1 major: value(i, j) = field[i * coord2.size() + j].
    std::vector<double> base_field;   ///< u0 (strip), zero (disk)
    std::vector<double> correction;   ///< w (disk) or c + v (strip)
    std::vector<double> total;
    std::vector<double> mean_correction;  ///< c(x) (strip only)
    std::vector<double> contraction_history;  ///< sup-norm increments
    double max_ratio = 0.0;   ///< largest ratio of successive increments
    int iterations = 0;
    double residual = 0.0;    ///< sup |u - L^{-1}(boundary data, Q(u))|, recomputed from u
    std::vector<double> pivot_ratio;  ///< per mode, min/max |pivot| of the tridiagonal solve

    // Measured diagnostics.
    DecayFit leading_fit;     ///< angular sup of (total - base) towards the boundary
    DecayFit correction_fit;  ///< angular sup of w (disk only)
    double angular_spread = 0.0;  ///< max - min over theta at r = R/2, or over y at mid xi
    std::vector<std::pair<int, double>> recovered_phi0;  ///< strip: per input mode, |coefficient|
    double cusp_form_defect = 0.0;  ///< sup over xi of |mean over y of v|
    double far_deviation = 0.0;     ///< strip: sup over y of |total - 1| at xi_max

    std::size_t cols() const { return coord2.size(); }
    double total_at(std::size_t i, std::size_t j) const { return total[i * cols() + j]; }
};

/// Disk contraction. The linear solves are the spectral-in-theta form of the
/// finite-volume polar operator with Dirichlet zero data at r = R.
/// InvalidArgument above the amplitude ceiling, ContractionFailure when an
/// increment fails to shrink.
PerturbedSolution contract_elliptic(const ProblemParams& params, const std::vector<FourierTerm>& phi0,
                                    double amplitude, const EllipticGrid& grid = {},
                                    double tol = 1e-10, const ContractOptions& opts = {});

/// Strip contraction around the parabolic heteroclinic. The k = 0 part of Q is
/// carried by the mean correction c(x) (Dirichlet at xi_min, decaying Robin
/// at xi_max); v keeps k != 0 only. MeanNotZero if phi0 has a k = 0 term.
PerturbedSolution contract_parabolic(const ProblemParams& params, const std::vector<FourierTerm>& phi0,
                                     double amplitude, const StripGrid& grid = {},
                                     double tol = 1e-10, const ContractOptions& opts = {});

/// CSV `x_or_r,y_or_theta,u` plus a `<stem>.json` with the contraction history.
void write_perturbed(const PerturbedSolution& sol, const std::filesystem::path& csv_path);

}  // namespace hypac
