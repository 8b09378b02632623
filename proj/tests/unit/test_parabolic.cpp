#include "hypac/parabolic.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace hypac;

TEST_SUITE("parabolic") {

TEST_CASE("fixed point classification") {
    auto fps = classify_fixed_points(make_params(2, cubic_potential(2.0 / 9.0)));
    REQUIRE(fps.size() == 3);
    CHECK(fps[1].kind == FixedPointKind::unstable_node);
    CHECK(fps[1].eigenvalues[0].real() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(fps[1].eigenvalues[1].real() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(fps[0].kind == FixedPointKind::saddle);
    CHECK(fps[2].kind == FixedPointKind::saddle);

    fps = classify_fixed_points(make_params(2, cubic_potential(1.0)));
    CHECK(fps[1].kind == FixedPointKind::unstable_spiral);
    CHECK_FALSE(fps[1].real_eigenvalues);
}

TEST_CASE("wells are saddles for any n and k (property)") {
    for (int n : {2, 3, 4, 7}) {
        for (double k : {0.05, 0.3, 1.0, 4.0}) {
            const auto fps = classify_fixed_points(make_params(n, cubic_potential(k)));
            for (int w : {0, 2}) {
                CHECK(fps[w].kind == FixedPointKind::saddle);
                const auto& e = fps[w].eigenvalues;
                CHECK(e[0].real() * e[1].real() == doctest::Approx(-2 * k).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("manifold shots") {
    const auto p = make_params(2, cubic_potential(2.0 / 9.0));
    const auto fps = classify_fixed_points(p);
    const auto up = shoot_manifold(p, fps[0], Branch::unstable_up, 1e-6, 60.0, 1e-10);
    CHECK(up.outcome == OrbitOutcome::passes_above);
    CHECK(up.event_state[1] > 0);
    const auto down = shoot_manifold(p, fps[2], Branch::stable_backward_down, 1e-6, 200.0, 1e-10);
    CHECK(down.outcome == OrbitOutcome::converges_to);
    CHECK(std::abs(down.target_fp[0]) < 1e-12);
    CHECK(error_code_of([&] { shoot_manifold(p, fps[0], Branch::unstable_up, 1e-2, 60.0, 1e-10); }) ==
          ErrorCode::invalid_argument);
    const auto spiral = make_params(2, cubic_potential(1.0));
    CHECK(error_code_of([&] {
              shoot_manifold(spiral, classify_fixed_points(spiral)[1], Branch::unstable_up, 1e-6, 60.0, 1e-10);
          }) == ErrorCode::eigenvector_undefined);
}

TEST_CASE("halving the offset only translates the orbit") {
    const auto p = make_params(2, cubic_potential(2.0 / 9.0));
    const double tol = 1e-10;
    HeteroclinicOptions a, b;
    a.offset = 2e-8;
    b.offset = 1e-8;
    const auto ha = heteroclinic_profile(p, tol, a);
    const auto hb = heteroclinic_profile(p, tol, b);
    double dev = 0.0;
    for (double xi = -15; xi <= 15; xi += 0.05) {
        dev = std::max(dev, std::abs(ha.xi_profile.value_at(xi) - hb.xi_profile.value_at(xi)));
    }
    CHECK(dev < 10 * tol);
}

TEST_CASE("heteroclinic matches the explicit solution") {
    for (int n : {2, 3, 4}) {
        const double k = 2.0 * (n - 1) * (n - 1) / 9.0, a = (n - 1) / 3.0;
        const auto het = heteroclinic_profile(make_params(n, cubic_potential(k)), 1e-11);
        double err = 0.0;
        for (std::size_t i = 0; i < het.xi_profile.size(); ++i) {
            const double s = std::exp(a * het.xi_profile.grid[i]);
            err = std::max(err, std::abs(het.xi_profile.values[i] - s / (1 + s)));
        }
        CHECK(err < 1e-6);
        CHECK(energy_identity_residual(het.xi_profile) < 1e-6);
    }
}

TEST_CASE("explicit solution residual settles the sign convention") {
    CHECK(explicit_solution_residual(2) < 1e-10);
    CHECK(explicit_solution_residual(5) < 1e-10);
    const double flipped = explicit_solution_residual(2, true);
    // 2 max |k u (1 - u^2)| over u in [0, 1]
    const double scale = 2 * (2.0 / 9.0) * 2 / (3 * std::sqrt(3.0));
    CHECK(flipped > 0.5 * scale);
    CHECK(flipped < 1.01 * scale);
}

TEST_CASE("nonexistence certificate") {
    auto cert = nonexistence_certificate(make_params(2, cubic_potential(2.0 / 9.0)), 1e-10);
    CHECK(cert.certified);
    CHECK(cert.v_at_crossing > 0);
    CHECK(cert.identity_residual < 1e-6);
    cert = nonexistence_certificate(make_params(3, cubic_potential(1.0)), 1e-10);
    CHECK(cert.certified);
}

TEST_CASE("certificate across parameters (property)") {
    for (int n : {2, 3, 4}) {
        for (double k : {0.05, 0.2, 0.6, 1.5}) {
            CHECK(nonexistence_certificate(make_params(n, cubic_potential(k)), 1e-10).certified);
        }
    }
}

TEST_CASE("sign of the connection in the spiral and node regimes") {
    CHECK(connection_min_u(2, 0.01).positive);
    CHECK_FALSE(connection_min_u(2, 0.3).positive);
    CHECK(connection_min_u(2, 0.3).min_u < 0);
}

TEST_CASE("threshold bisection") {
    const auto th = monotonicity_threshold(2, {0.2, 0.3}, 1e-4);
    CHECK(th.gamma > 0);
    CHECK(th.gamma <= 0.25 + 1e-4);
    CHECK(th.node_spiral_transition == doctest::Approx(0.25));
    CHECK(error_code_of([] { monotonicity_threshold(2, {0.01, 0.02}, 1e-4); }) == ErrorCode::bracket_invalid);
}

}
