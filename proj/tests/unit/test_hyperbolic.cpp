#include "hypac/hyperbolic.hpp"

#include "oracle_values.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace hypac;

namespace {

double sup_diff(const Profile1D& a, const Profile1D& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.values[i] - b.values[i]));
    return d;
}

}  // namespace

TEST_SUITE("hyperbolic") {

TEST_CASE("minimizer is odd and monotone") {
    const auto p = make_params(2, cubic_potential(2.0 / 9.0));
    const auto run = minimize_profile(p, 20.0, 4000, 1e-9);
    CHECK(check_monotone(run.profile).monotone);
    CHECK(std::abs(run.profile.value_at(0.0)) < 1e-8);
    CHECK_FALSE(forbidden_extremum(run.profile));
}

TEST_CASE("energy identity on the half line") {
    // over [-T, T] the identity is automatic for odd profiles; [0, T] is not
    const auto run = minimize_profile(make_params(2, cubic_potential(2.0 / 9.0)), 20.0, 16000, 1e-10);
    Profile1D half = run.profile;
    half.grid.clear();
    half.values.clear();
    half.derivs.clear();
    for (std::size_t i = 0; i < run.profile.size(); ++i) {
        if (run.profile.grid[i] < -1e-12) continue;
        half.grid.push_back(run.profile.grid[i]);
        half.values.push_back(run.profile.values[i]);
        half.derivs.push_back(run.profile.derivs[i]);
    }
    const double r = energy_identity_residual(half);
    MESSAGE("half-line energy identity residual: " << r);
    CHECK(r < 1e-5);
}

TEST_CASE("minimizer does not depend on the initial guess") {
    const auto p = make_params(2, cubic_potential(2.0 / 9.0));
    MinimizeOptions ramp;
    ramp.init = InitialGuess::ramp;
    const auto a = minimize_profile(p, 20.0, 4000, 1e-10);
    const auto b = minimize_profile(p, 20.0, 4000, 1e-10, ramp);
    CHECK(sup_diff(a.profile, b.profile) < 1e-6);
}

TEST_CASE("Newton polish agrees with the minimizer") {
    const auto p = make_params(2, cubic_potential(2.0 / 9.0));
    const auto mini = minimize_profile(p, 20.0, 16000, 1e-10);
    const auto newt = newton_profile(p, 20.0, 16000, 1e-10, mini.profile);
    CHECK(newt.iterations <= 5);
    CHECK(sup_diff(mini.profile, newt.profile) < 1e-6);
}

TEST_CASE("profile matches an independent BVP solver") {
    const auto p2 = make_params(2, cubic_potential(2.0 / 9.0));
    const auto a = newton_profile(p2, 8.0, 3200, 1e-10, initial_profile(p2, 8.0, 3200, InitialGuess::tanh));
    CHECK(std::abs(a.profile.value_at(1.0) - oracle::hyp_n2_U1) < 2e-5);
    CHECK(std::abs(a.profile.value_at(2.0) - oracle::hyp_n2_U2) < 2e-5);
    CHECK(std::abs(a.profile.value_at(4.0) - oracle::hyp_n2_U4) < 2e-5);
    const auto p3 = make_params(3, cubic_potential(1.0));
    const auto b = newton_profile(p3, 8.0, 3200, 1e-10, initial_profile(p3, 8.0, 3200, InitialGuess::tanh));
    CHECK(std::abs(b.profile.value_at(1.0) - oracle::hyp_n3_k1_U1) < 2e-5);
    CHECK(std::abs(b.profile.value_at(2.0) - oracle::hyp_n3_k1_U2) < 2e-5);
}

TEST_CASE("second-order convergence") {
    const auto rr = richardson_ratio(make_params(2, cubic_potential(2.0 / 9.0)), 10.0, 400, 1e-10);
    CHECK(rr.ratio == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("monotonicity checks on synthetic profiles") {
    Profile1D dip;
    dip.chart = Chart::signed_dist_t;
    dip.grid = {-2, -1, 0, 1, 2};
    dip.values = {-1, 0.3, 0.1, 0.6, 1};
    dip.derivs = {0, 0, 0, 0, 0};
    const auto m = check_monotone(dip);
    CHECK_FALSE(m.monotone);
    REQUIRE(m.first_violation);
    CHECK(*m.first_violation == doctest::Approx(0.0));
    REQUIRE(forbidden_extremum(dip));
    CHECK(*forbidden_extremum(dip) == doctest::Approx(0.0));

    Profile1D lin = dip;
    lin.values = {-1, -0.5, 0, 0.5, 1};
    CHECK(check_monotone(lin).monotone);
    CHECK_FALSE(forbidden_extremum(lin));
}

TEST_CASE("minimizers are monotone across parameters (property)") {
    for (int n : {2, 3, 4}) {
        for (double k : {0.2, 1.0}) {
            const auto run = minimize_profile(make_params(n, cubic_potential(k)), 10.0, 1000, 1e-9);
            CHECK(check_monotone(run.profile).monotone);
            CHECK(energy_identity_residual(run.profile) < 1e-5);
        }
    }
}

TEST_CASE("continuation in T") {
    const auto rep = continuation_in_T(make_params(2, cubic_potential(2.0 / 9.0)), {10, 15, 20, 30}, 200, 1e-10);
    REQUIRE(rep.rows.size() == 4);
    CHECK(rep.rows.back().sup_change < 1e-6);
    CHECK(rep.center_bounded);
    for (const auto& r : rep.rows) CHECK(std::abs(r.zero_location) < 1e-8);
}

TEST_CASE("tail rates follow the linearization") {
    const auto run = minimize_profile(make_params(2, cubic_potential(2.0 / 9.0)), 20.0, 8000, 1e-10);
    const auto tr = tail_rates(run);
    CHECK(tr.predicted == doctest::Approx(-4.0 / 3.0).epsilon(1e-12));
    CHECK(std::abs(tr.right_rate / tr.predicted - 1) < 0.03);
    CHECK(tr.left_rate == doctest::Approx(tr.right_rate).epsilon(1e-6));
    auto short_run = minimize_profile(make_params(2, cubic_potential(2.0 / 9.0)), 10.0, 1000, 1e-9);
    CHECK(error_code_of([&] { tail_rates(short_run); }) == ErrorCode::invalid_argument);
}

TEST_CASE("balanced wells") {
    for (double k : {0.1, 2.0 / 9.0, 1.0}) CHECK(std::abs(balanced_wells_check(cubic_potential(k))) < 1e-12);
    const auto tilted = custom_potential(
        "tilted", [](double s) { return s * (s * s - 1) + 0.1 * (1 - s * s); },
        [](double s) { return s * s * s * s / 4 - s * s / 2 + 0.1 * (s - s * s * s / 3); },
        [](double s) { return 3 * s * s - 1 - 0.2 * s; });
    CHECK(balanced_wells_check(tilted) == doctest::Approx(0.4 / 3.0).epsilon(1e-12));
}

TEST_CASE("argument checks") {
    const auto p = make_params(2, cubic_potential(2.0 / 9.0));
    CHECK(error_code_of([&] { minimize_profile(p, 3.0, 400, 1e-9); }) == ErrorCode::invalid_argument);
    CHECK(error_code_of([&] { minimize_profile(p, 10.0, 100, 1e-9); }) == ErrorCode::invalid_argument);
    CHECK(error_code_of([&] { minimize_profile(p, 10.0, 401, 1e-9); }) == ErrorCode::invalid_argument);
}

}
