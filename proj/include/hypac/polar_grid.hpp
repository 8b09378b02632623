#pragma once

#include <Eigen/SparseCore>

#include <cstddef>
#include <vector>

namespace hypac {

enum class ThetaLattice { uniform, clustered };

/// Geodesic polar lattice on the disk of radius R: r_i = i R / Nr for
/// i = 0..Nr (ring Nr carries the Dirichlet data), and Ntheta periodic angles.
///
/// The clustered lattice refines geometrically towards theta = 0 and pi, where
/// level sets of the signed distance to the horizontal geodesic crowd together
/// (their angular width near radius r is about 1/sinh r). In each quarter the
/// nodes are eps (e^{s L} - 1), s uniform on [0, 1], L = log(1 + (pi/2)/eps),
/// mirrored into the other three quarters.
struct DiskGrid {
    double R = 0.0;
    int Nr = 0;
    int Ntheta = 0;
    ThetaLattice lattice = ThetaLattice::uniform;
    double cluster_eps = 0.0;
    std::vector<double> r;      ///< Nr + 1 radii, r[0] = 0
    std::vector<double> theta;  ///< Ntheta angles in [0, 2 pi), increasing
    std::vector<double> width;  ///< angular extent of the control volume of each theta node
    std::vector<double> gap;    ///< theta[j+1] - theta[j] (periodic)

    double dr() const { return R / Nr; }
    /// Unknown index: 0 is the pole, ring i in 1..Nr-1 at angle j follows.
    std::size_t index(int i, int j) const {
        return 1 + static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(Ntheta) +
               static_cast<std::size_t>(j);
    }
    std::size_t unknowns() const {
        return 1 + static_cast<std::size_t>(Nr - 1) * static_cast<std::size_t>(Ntheta);
    }
};

/// Requires R > 0, Nr >= 4, Ntheta >= 8; the clustered lattice needs Ntheta
/// divisible by 4. eps <= 0 selects 1 / sinh(R - 2) (or 1e-3 when R <= 3).
DiskGrid make_disk_grid(double R, int Nr, int Ntheta, ThetaLattice lattice, double eps = 0.0);

/// Finite-volume form of the hyperbolic Laplacian (n = 2) on the grid:
///   (A u)_p = sum over faces of coefficient * (u_nb - u_p),
/// integrated over each control volume. The pole owns the disk of radius
/// dr/2. Stored as the symmetric positive definite matrix -A restricted to the
/// unknowns, with the couplings to the Dirichlet ring kept separately.
struct PolarOperator {
    Eigen::SparseMatrix<double> neg_laplacian;  ///< lower and upper parts stored
    std::vector<double> volume;                 ///< hyperbolic area of each control volume
    std::vector<double> boundary_coupling;      ///< per theta node, for ring Nr-1
    std::vector<double> diagonal;               ///< diagonal of neg_laplacian
};

PolarOperator assemble_polar_operator(const DiskGrid& grid);

}  // namespace hypac
