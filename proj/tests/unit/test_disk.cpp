#include "hypac/disk.hpp"
#include "hypac/hyperbolic.hpp"

#include "oracle_values.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

using namespace hypac;

namespace {

const ProblemParams& params() {
    static const auto p = make_params(2, cubic_potential(2.0 / 9.0));
    return p;
}

int mirror_index(const DiskGrid& g, int j) {
    // node at 2 pi - theta_j
    const double target = std::fmod(2 * M_PI - g.theta[static_cast<std::size_t>(j)], 2 * M_PI);
    int best = 0;
    for (int m = 0; m < g.Ntheta; ++m) {
        const double d = std::abs(std::remainder(g.theta[static_cast<std::size_t>(m)] - target, 2 * M_PI));
        if (d < std::abs(std::remainder(g.theta[static_cast<std::size_t>(best)] - target, 2 * M_PI))) best = m;
    }
    return best;
}

}  // namespace

TEST_SUITE("disk") {

TEST_CASE("polar grid") {
    const auto g = make_disk_grid(12.0, 40, 64, ThetaLattice::clustered);
    CHECK(g.cluster_eps == doctest::Approx(1 / std::sinh(10.0)));
    CHECK(g.r.size() == 41);
    CHECK(g.unknowns() == 1 + 39 * 64);
    double total = 0.0;
    for (double w : g.width) total += w;
    CHECK(total == doctest::Approx(2 * M_PI).epsilon(1e-12));
    for (int j = 0; j < g.Ntheta; ++j) {
        CHECK(std::abs(g.theta[static_cast<std::size_t>(mirror_index(g, j))] -
                       std::fmod(2 * M_PI - g.theta[static_cast<std::size_t>(j)], 2 * M_PI)) < 1e-12);
    }
    CHECK(error_code_of([] { make_disk_grid(12.0, 3, 64, ThetaLattice::uniform); }) == ErrorCode::invalid_argument);
    CHECK(error_code_of([] { make_disk_grid(12.0, 40, 66, ThetaLattice::clustered); }) ==
          ErrorCode::invalid_argument);
}

TEST_CASE("operator is symmetric and annihilates constants") {
    const auto g = make_disk_grid(4.0, 20, 32, ThetaLattice::clustered);
    const auto op = assemble_polar_operator(g);
    const Eigen::SparseMatrix<double> At = op.neg_laplacian.transpose();
    CHECK((op.neg_laplacian - At).norm() < 1e-12 * op.neg_laplacian.norm());
    // row sums equal the coupling to the Dirichlet ring
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(g.unknowns()));
    const Eigen::VectorXd rs = op.neg_laplacian * ones;
    for (int j = 0; j < g.Ntheta; ++j) {
        CHECK(rs[static_cast<Eigen::Index>(g.index(g.Nr - 1, j))] ==
              doctest::Approx(op.boundary_coupling[static_cast<std::size_t>(j)]).epsilon(1e-10));
    }
    CHECK(std::abs(rs[static_cast<Eigen::Index>(g.index(3, 5))]) < 1e-10);
    double area = 0.0;
    for (double v : op.volume) area += v;
    // area of the disk of radius R - dr/2, 2 pi (cosh - 1)
    CHECK(area == doctest::Approx(2 * M_PI * (std::cosh(4.0 - 0.1) - 1)).epsilon(1e-10));
}

TEST_CASE("constant data") {
    const auto g = make_disk_grid(6.0, 30, 32, ThetaLattice::clustered);
    const auto one = solve_disk(params(), constant_boundary(1.0), g, 1e-10);
    CHECK(one.newton_iterations == 0);
    for (double v : one.values) CHECK(v == 1.0);
    CHECK(symmetry_deviation(one, {0.0, 1.0}) == 0.0);
    const auto zero = solve_disk(params(), constant_boundary(0.0), g, 1e-10);
    for (double v : zero.values) CHECK(v == 0.0);
}

TEST_CASE("radial Dirichlet problem matches an independent shooting solve") {
    const auto g = make_disk_grid(4.0, 160, 16, ThetaLattice::uniform);
    const auto a = solve_disk(params(), constant_boundary(0.5), g, 1e-10);
    CHECK(std::abs(a.pole() - oracle::disk_pole_c05) < 2e-4);
    const auto b = solve_disk(params(), constant_boundary(-0.8), g, 1e-10);
    CHECK(std::abs(b.pole() - oracle::disk_pole_cm08) < 2e-4);
    // radial data gives a radial solution
    double spread = 0.0;
    for (int i = 1; i < g.Nr; ++i) {
        for (int j = 1; j < g.Ntheta; ++j) spread = std::max(spread, std::abs(a.at(i, j) - a.at(i, 0)));
    }
    CHECK(spread < 1e-12);
}

TEST_CASE("step data") {
    const auto g = make_disk_grid(8.0, 80, 64, ThetaLattice::clustered);
    const auto sol = solve_disk(params(), hh_step_boundary(), g, 1e-10);
    CHECK(sol.residual_norm < 1e-10);
    CHECK(max_principle_violation(sol) < 1e-12);
    for (int i = 0; i < g.Nr; ++i) {
        for (int j = 0; j < g.Ntheta; ++j) CHECK(std::abs(sol.at(i, j)) < 1.0);
    }
    CHECK(symmetry_deviation(sol, {0.0}) < 5e-3);
    CHECK(std::abs(sol.pole()) < 1e-10);
    CHECK(error_code_of([&] { symmetry_deviation(sol, {6.5}); }) == ErrorCode::empty_level_set);
}

TEST_CASE("reflection equivariance (property)") {
    const auto g = make_disk_grid(6.0, 40, 32, ThetaLattice::clustered);
    auto data = [](double th) { return 0.6 * std::cos(th) + 0.3 * std::sin(2 * th) - 0.2 * std::sin(th); };
    const auto a = solve_disk(params(), function_boundary("g", data), g, 1e-10);
    const auto b = solve_disk(params(), function_boundary("g mirrored", [&](double th) { return data(-th); }), g,
                              1e-10);
    double dev = 0.0;
    for (int i = 0; i <= g.Nr; ++i) {
        for (int j = 0; j < g.Ntheta; ++j) dev = std::max(dev, std::abs(a.at(i, j) - b.at(i, mirror_index(g, j))));
    }
    CHECK(dev < 1e-9);
    // odd data gives an odd solution
    const auto odd = solve_disk(params(), function_boundary("odd", [](double th) { return 0.7 * std::sin(th); }), g,
                                1e-10);
    double odd_dev = 0.0;
    for (int i = 0; i <= g.Nr; ++i) {
        for (int j = 0; j < g.Ntheta; ++j) odd_dev = std::max(odd_dev, std::abs(odd.at(i, j) + odd.at(i, mirror_index(g, j))));
    }
    CHECK(odd_dev < 1e-9);
}

TEST_CASE("comparison with the hyperbolic profile") {
    const auto mini = minimize_profile(params(), 20.0, 4000, 1e-9);
    const auto U = newton_profile(params(), 20.0, 4000, 1e-10, mini.profile).profile;
    const auto g = make_disk_grid(8.0, 160, 128, ThetaLattice::clustered);
    const auto sol = solve_disk(params(), profile_trace_boundary(U), g, 1e-10);
    CHECK(compare_with_profile(sol, U) < 1e-2);
    Profile1D zero = U;
    for (auto& v : zero.values) v = 0.0;
    for (auto& d : zero.derivs) d = 0.0;
    const auto z = solve_disk(params(), constant_boundary(0.0), g, 1e-10);
    CHECK(compare_with_profile(z, zero) == 0.0);
    Profile1D wrong = U;
    wrong.chart = Chart::geodesic_r;
    CHECK(error_code_of([&] { profile_trace_boundary(wrong); }) == ErrorCode::chart_mismatch);
}

TEST_CASE("interior values are insensitive to the truncation radius" * doctest::may_fail()) {
    // same eps and dr for both radii; compare on r <= 6
    const double eps = 1 / std::sinh(8.0);
    const auto small = make_disk_grid(10.0, 200, 128, ThetaLattice::clustered, eps);
    const auto large = make_disk_grid(14.0, 280, 128, ThetaLattice::clustered, eps);
    const auto a = solve_disk(params(), hh_step_boundary(), small, 1e-10);
    const auto b = solve_disk(params(), hh_step_boundary(), large, 1e-10);
    double dev = 0.0;
    for (int i = 0; i <= 120; ++i) {
        for (int j = 0; j < 128; ++j) dev = std::max(dev, std::abs(a.at(i, j) - b.at(i, j)));
    }
    MESSAGE("sup |u_10 - u_14| on r <= 6: " << dev);
    CHECK(dev < 2e-3);
    CHECK(dev < 1e-3);
}

TEST_CASE("signed distance") {
    CHECK(signed_distance_t(0.0, 0.0) == 0.0);
    CHECK(signed_distance_t(0.0, 0.5) == doctest::Approx(std::asinh(4.0 / 3.0)).epsilon(1e-14));
    for (const auto& row : oracle::t_brute) {
        CHECK(signed_distance_t(row[0], row[1]) == doctest::Approx(row[2]).epsilon(1e-9));
    }
}

TEST_CASE("signed distance is odd and chart independent (property)") {
    for (double r = 0.1; r < 6; r += 0.37) {
        for (double th = 0.05; th < 2 * M_PI; th += 0.29) {
            const double rho = std::tanh(r / 2);
            const double z1 = rho * std::cos(th), z2 = rho * std::sin(th);
            CHECK(signed_distance_t(z1, z2) == doctest::Approx(signed_distance_polar(r, th)).epsilon(1e-11));
            CHECK(signed_distance_t(z1, -z2) == doctest::Approx(-signed_distance_t(z1, z2)).epsilon(1e-14));
            CHECK(std::abs(signed_distance_polar(r, th)) <= r + 1e-12);
        }
    }
}

TEST_CASE("argument checks") {
    const auto g = make_disk_grid(6.0, 30, 32, ThetaLattice::clustered);
    CHECK(error_code_of([&] { solve_disk(make_params(3, cubic_potential(1.0)), constant_boundary(0.0), g, 1e-10); }) ==
          ErrorCode::invalid_argument);
    CHECK(error_code_of([&] { solve_disk(params(), constant_boundary(1.5), g, 1e-10); }) ==
          ErrorCode::invalid_argument);
    CHECK(error_code_of([&] { solve_disk(params(), constant_boundary(0.5), g, 1e-12); }) ==
          ErrorCode::invalid_argument);
}

TEST_CASE("CSV output") {
    const auto g = make_disk_grid(6.0, 30, 32, ThetaLattice::clustered);
    const auto sol = solve_disk(params(), hh_step_boundary(), g, 1e-10);
    const auto dir = std::filesystem::temp_directory_path() / "hypac_disk_test";
    std::filesystem::create_directories(dir);
    write_disk_solution(sol, dir / "d.csv");
    std::ifstream in(dir / "d.csv");
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 1 + 1 + 30 * 32);
    CHECK(std::filesystem::exists(dir / "d.json"));
    std::filesystem::remove_all(dir);
}

}
