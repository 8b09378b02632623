#include "hypac/diagnostics.hpp"
#include "hypac/hyperbolic.hpp"
#include "hypac/radial.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

using namespace hypac;

namespace {

Profile1D sampled(Chart chart, double a, double b, int N, double (*u)(double), double (*du)(double),
                  ProblemParams params = make_params(2, cubic_potential(2.0 / 9.0))) {
    Profile1D p;
    p.chart = chart;
    p.params = params;
    for (int i = 0; i <= N; ++i) {
        const double s = a + (b - a) * i / N;
        p.grid.push_back(s);
        p.values.push_back(u(s));
        p.derivs.push_back(du(s));
    }
    return p;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("exact exponential decay") {
    const auto p = sampled(Chart::geodesic_r, 0, 20, 2000, [](double r) { return std::exp(-0.5 * r); },
                           [](double r) { return -0.5 * std::exp(-0.5 * r); });
    const auto fit = fit_decay_exponent(p, {5.0, 15.0}, DecayTarget::to_zero);
    CHECK(fit.exponent == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fit.rms_residual < 1e-10);
}

TEST_CASE("explicit parabolic solution decays like x^(1/3)") {
    const auto p = sampled(Chart::halfspace_x, 1e-12, 1e-6, 4000,
                           [](double x) { return std::cbrt(x) / (1 + std::cbrt(x)); },
                           [](double x) { return std::cbrt(x) / (3 * x * std::pow(1 + std::cbrt(x), 2)); });
    const auto fit = fit_decay_exponent(p, {1e-12, 1e-6}, DecayTarget::to_zero);
    CHECK(fit.exponent == doctest::Approx(1.0 / 3.0).epsilon(1e-2));
}

TEST_CASE("fit failures") {
    const auto p = sampled(Chart::geodesic_r, 0, 1, 5, [](double r) { return std::exp(-r); },
                           [](double r) { return -std::exp(-r); });
    CHECK(error_code_of([&] { fit_decay_exponent(p, {0.0, 1.0}, DecayTarget::to_zero); }) ==
          ErrorCode::window_too_small);
    const auto z = sampled(Chart::geodesic_r, 0, 1, 50, [](double) { return 0.0; }, [](double) { return 0.0; });
    CHECK(error_code_of([&] { fit_decay_exponent(z, {0.0, 1.0}, DecayTarget::to_zero); }).has_value());
}

TEST_CASE("energy identity on trivial profiles") {
    const auto one = sampled(Chart::geodesic_r, 0, 10, 100, [](double) { return 1.0; }, [](double) { return 0.0; });
    CHECK(energy_identity_residual(one) == 0.0);
    auto xi = one;
    xi.chart = Chart::log_x_xi;
    CHECK(energy_identity_residual(xi) == 0.0);
    auto hx = one;
    hx.chart = Chart::halfspace_x;
    CHECK(error_code_of([&] { energy_identity_residual(hx); }) == ErrorCode::chart_mismatch);
}

TEST_CASE("identities on an integrated radial orbit") {
    const auto run = integrate_radial(make_params(3, cubic_potential(1.0)), 0.5, 15.0, 1e-10);
    CHECK(energy_identity_residual(run.profile) < 1e-6);
    CHECK(flux_identity_residual(run.profile, 1.0, 5.0) < 1e-6);
}

TEST_CASE("energy identity on the hyperbolic minimizer") {
    const auto run = minimize_profile(make_params(2, cubic_potential(2.0 / 9.0)), 20.0, 4000, 1e-9);
    CHECK(energy_identity_residual(run.profile) < 1e-5);
}

TEST_CASE("flux identity on constants") {
    for (double c : {-1.0, 0.0, 1.0}) {
        Profile1D p;
        p.params = make_params(3, cubic_potential(1.0));
        for (int i = 0; i <= 100; ++i) {
            p.grid.push_back(0.1 * i);
            p.values.push_back(c);
            p.derivs.push_back(0.0);
        }
        CHECK(flux_identity_residual(p, 1.0, 5.0) == 0.0);
    }
}

TEST_CASE("Simpson is exact for quadratics on arbitrary grids (property)") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> step(0.01, 0.3), coef(-2.0, 2.0);
    std::uniform_int_distribution<int> sizes(3, 40);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x{0.0}, y;
        const int m = sizes(rng);
        for (int i = 1; i < m; ++i) x.push_back(x.back() + step(rng));
        const double a = coef(rng), b = coef(rng), c = coef(rng);
        for (double s : x) y.push_back(a + b * s + c * s * s);
        const double L = x.back();
        const double exact = a * L + b * L * L / 2 + c * L * L * L / 3;
        CHECK(std::abs(simpson(x, y) - exact) < 1e-11 * (1 + std::abs(exact)));
    }
}

TEST_CASE("chart names round trip") {
    for (auto c : {Chart::geodesic_r, Chart::log_x_xi, Chart::halfspace_x, Chart::signed_dist_t}) {
        CHECK(chart_from_string(to_string(c)) == c);
    }
    CHECK(error_code_of([] { chart_from_string("polar"); }).has_value());
}

TEST_CASE("profile CSV round trip") {
    const auto p = sampled(Chart::signed_dist_t, -3, 3, 60, [](double t) { return std::tanh(t); },
                           [](double t) { return 1 - std::tanh(t) * std::tanh(t); });
    const auto dir = std::filesystem::temp_directory_path() / "hypac_diag_test";
    std::filesystem::create_directories(dir);
    write_profile(p, dir / "p.csv");
    CHECK(std::filesystem::exists(dir / "p.json"));
    const auto q = read_profile(dir / "p.csv", p.params, Chart::signed_dist_t);
    REQUIRE(q.size() == p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        CHECK(q.grid[i] == p.grid[i]);
        CHECK(q.values[i] == p.values[i]);
        CHECK(q.derivs[i] == p.derivs[i]);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("profile validation") {
    Profile1D p;
    p.grid = {0.0, 1.0, 1.0};
    p.values = {0, 0, 0};
    p.derivs = {0, 0, 0};
    CHECK(error_code_of([&] { p.validate(); }) == ErrorCode::invalid_argument);
    p.grid = {0.0, 1.0};
    CHECK(error_code_of([&] { p.validate(); }) == ErrorCode::invalid_argument);
}

}
