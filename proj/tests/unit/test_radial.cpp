#include "hypac/radial.hpp"

#include "oracle_values.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace hypac;

TEST_SUITE("radial") {

TEST_CASE("fixed points give constant runs") {
    const auto p = make_params(3, cubic_potential(1.0));
    const auto zero = integrate_radial(p, 0.0, 12.0, 1e-10);
    CHECK(zero.outcome == RadialOutcome::tends_to_zero);
    CHECK(zero.max_abs_u == 0.0);
    const auto one = integrate_radial(p, 1.0, 12.0, 1e-10);
    CHECK(one.outcome == RadialOutcome::constant_pm1);
    for (double v : one.profile.values) CHECK(v == 1.0);
}

TEST_CASE("profile matches an independent integrator") {
    const auto run = integrate_radial(make_params(3, cubic_potential(0.5)), 0.5, 12.0, 1e-12);
    CHECK(run.profile.value_at(2.0) == doctest::Approx(oracle::radial_n3_k05_u2).epsilon(1e-9));
    CHECK(run.profile.value_at(5.0) == doctest::Approx(oracle::radial_n3_k05_u5).epsilon(1e-9));
    CHECK(run.profile.value_at(10.0) == doctest::Approx(oracle::radial_n3_k05_u10).epsilon(1e-8));
}

TEST_CASE("orbit tends to zero") {
    const auto p = make_params(3, cubic_potential(1.0));
    const auto run = integrate_radial(p, 0.5, 15.0, 1e-10);
    CHECK(run.outcome == RadialOutcome::tends_to_zero);
    CHECK(std::abs(run.profile.values.back()) < 1e-3);
    CHECK(std::abs(run.profile.values.back() - oracle::radial_n3_k1_u15) < 1e-9);
    CHECK(integrate_radial(p, 0.9, 25.0, 1e-10).outcome == RadialOutcome::tends_to_zero);
}

TEST_CASE("a short transient stays undetermined") {
    const auto run = integrate_radial(make_params(3, cubic_potential(1.0)), 0.999, 10.0, 1e-10);
    CHECK(run.outcome == RadialOutcome::undetermined);
    CHECK(std::abs(run.profile.value_at(5.0)) > 0.5);
}

TEST_CASE("argument checks") {
    const auto p = make_params(3, cubic_potential(1.0));
    CHECK(error_code_of([&] { integrate_radial(p, 1.5, 12.0, 1e-10); }) == ErrorCode::invalid_argument);
    CHECK(error_code_of([&] { integrate_radial(p, 0.5, 5.0, 1e-10); }) == ErrorCode::invalid_argument);
    CHECK(error_code_of([&] { integrate_radial(p, 0.5, 12.0, 1e-3); }) == ErrorCode::invalid_argument);
    RadialOptions o;
    o.r0 = 0.1;
    CHECK(error_code_of([&] { integrate_radial(p, 0.5, 12.0, 1e-10, o); }) == ErrorCode::series_radius_too_large);
}

TEST_CASE("sweep decays at alpha_-") {
    const auto rep = sweep_family(make_params(3, cubic_potential(0.5)), {0.1, 0.3, 0.5, 0.7}, 30.0, 1e-10);
    CHECK(rep.alpha_minus == doctest::Approx(1 - std::sqrt(0.5)));
    CHECK(rep.all_tend_to_zero);
    CHECK(rep.exponents_agree);
    for (const auto& e : rep.entries) {
        REQUIRE(e.fit);
        CHECK(std::abs(e.fit->exponent - rep.alpha_minus) < 0.02 * rep.alpha_minus);
    }
    const auto trivial = sweep_family(make_params(3, cubic_potential(0.5)), {0.0}, 30.0, 1e-10);
    REQUIRE(trivial.entries.size() == 1);
    CHECK_FALSE(trivial.entries[0].fit);
}

TEST_CASE("odd nonlinearity gives odd profiles (property)") {
    const auto p = make_params(3, cubic_potential(1.0));
    for (double a : {0.2, 0.45, 0.8}) {
        const auto up = integrate_radial(p, a, 12.0, 1e-10);
        const auto down = integrate_radial(p, -a, 12.0, 1e-10);
        REQUIRE(up.profile.size() == down.profile.size());
        double dev = 0.0;
        for (std::size_t i = 0; i < up.profile.size(); ++i) {
            dev = std::max(dev, std::abs(up.profile.values[i] + down.profile.values[i]));
        }
        CHECK(dev < 1e-10);
    }
}

TEST_CASE("solutions stay in [-1, 1] (property)") {
    for (int n : {2, 3, 5}) {
        for (double k : {0.1, 0.5, 1.0}) {
            for (double a : {-0.95, -0.3, 0.6, 0.99}) {
                const auto run = integrate_radial(make_params(n, cubic_potential(k)), a, 12.0, 1e-10);
                CHECK(run.max_abs_u <= 1.0);
                CHECK(run.max_abs_u <= std::abs(a) + 1e-12);
            }
        }
    }
}

}
