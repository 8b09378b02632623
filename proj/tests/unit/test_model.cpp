#include "hypac/model.hpp"

#include "oracle_values.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace hypac;

TEST_SUITE("model") {

TEST_CASE("cubic potential values and constants") {
    const auto p = cubic_potential(1.0);
    CHECK(p.f(0.5) == doctest::Approx(-0.375).epsilon(1e-15));
    CHECK(p.lambda == doctest::Approx(1.0));
    CHECK(p.lipschitz == doctest::Approx(2.0));
    for (double k : {0.01, 2.0 / 9.0, 1.0, 3.0}) {
        const auto q = cubic_potential(k);
        CHECK(q.f(1.0) == 0.0);
        CHECK(q.f(-1.0) == 0.0);
        CHECK(q.f(0.0) == 0.0);
        CHECK(q.F(1.0) == 0.0);
        CHECK(q.fprime(0.0) == doctest::Approx(-k));
    }
    CHECK(cubic_potential(2.0 / 9.0).lipschitz == doctest::Approx(4.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("F is an antiderivative of f (property)") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ks(0.01, 3.0), us(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = cubic_potential(ks(rng));
        const double u = us(rng), h = 1e-5;
        CHECK(std::abs((p.F(u + h) - p.F(u - h)) / (2 * h) - p.f(u)) < 1e-8);
        CHECK(std::abs((p.f(u + h) - p.f(u - h)) / (2 * h) - p.fprime(u)) < 1e-7);
    }
}

TEST_CASE("validation accepts the canonical double well") {
    CHECK(validate_potential(cubic_potential(1.0)).all_passed());
    CHECK(validate_potential(cubic_potential(2.0 / 9.0)).all_passed());
}

TEST_CASE("validation rejects a lifted well") {
    const auto p = custom_potential(
        "lifted", [](double u) { return 4 * u * (u * u - 1); },
        [](double u) { return (u * u - 1) * (u * u - 1) + 0.1; }, [](double u) { return 12 * u * u - 4; });
    const auto rep = validate_potential(p);
    CHECK_FALSE(rep.all_passed());
    CHECK_FALSE(rep.at(checks::zero_set).passed);
}

TEST_CASE("validation flags the flipped sign convention") {
    const double k = 2.0 / 9.0;
    const auto p = custom_potential(
        "flipped", [k](double u) { return k * u * (1 - u * u); },
        [k](double u) { return -k / 4 * (u * u - 1) * (u * u - 1); }, [k](double u) { return k * (1 - 3 * u * u); });
    const auto rep = validate_potential(p);
    CHECK_FALSE(rep.at(checks::unstable_origin).passed);
}

TEST_CASE("Lipschitz constant") {
    CHECK(lipschitz_on_interval(cubic_potential(1.0)) == doctest::Approx(2.0));
    const auto lin = custom_potential(
        "linear", [](double u) { return -u; }, [](double u) { return -u * u / 2; }, [](double) { return -1.0; });
    CHECK(lipschitz_on_interval(lin) == doctest::Approx(1.0).epsilon(1e-10));
    // non-cubic: f = sin(pi u), max |f'| = pi at u = 0 and +-1
    const auto s = custom_potential(
        "sine", [](double u) { return std::sin(M_PI * u); }, [](double u) { return -std::cos(M_PI * u) / M_PI; },
        [](double u) { return M_PI * std::cos(M_PI * u); });
    CHECK(lipschitz_on_interval(s) == doctest::Approx(M_PI).epsilon(1e-9));
}

TEST_CASE("indicial roots") {
    auto r = indicial_roots(2, 2.0 / 9.0);
    CHECK(r.lo == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(r.hi == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    r = indicial_roots(4, 9.0 / 4.0);
    CHECK(r.lo == doctest::Approx(1.5));
    CHECK(r.hi == doctest::Approx(1.5));
    r = indicial_roots(3, 0.75);
    CHECK(r.lo == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(r.hi == doctest::Approx(1.5).epsilon(1e-14));
    CHECK_THROWS_AS(indicial_roots(2, 0.3), ComplexRootsError);
}

TEST_CASE("indicial roots satisfy the quadratic and Vieta (property)") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> ns(2, 12);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = ns(rng);
        const double b = n - 1.0, mu = frac(rng) * b * b / 4;
        const auto r = indicial_roots(n, mu);
        CHECK(r.lo <= r.hi);
        CHECK(std::abs(r.lo + r.hi - b) < 1e-12 * b);
        CHECK(std::abs(r.lo * r.lo - b * r.lo + mu) < 1e-10 * b * b);
        CHECK(std::abs(r.hi * r.hi - b * r.hi + mu) < 1e-10 * b * b);
    }
}

TEST_CASE("root chain") {
    auto rep = root_chain_check(make_params(3, cubic_potential(1.0)));
    CHECK(rep.roots.alpha_minus == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(rep.roots.alpha_plus == doctest::Approx(1.0).epsilon(1e-7));
    CHECK_FALSE(rep.roots.beta_real);
    CHECK_FALSE(rep.applicable);
    CHECK_FALSE(rep.holds);

    rep = root_chain_check(make_params(10, cubic_potential(2.0)));
    CHECK(rep.applicable);
    CHECK(rep.holds);
    CHECK(rep.roots.alpha_minus == doctest::Approx(oracle::n10_k2_alpha_minus).epsilon(1e-12));
    CHECK(rep.roots.beta_minus == doctest::Approx(oracle::n10_k2_beta_minus).epsilon(1e-12));

    // lambda = L: both quadratics coincide
    const auto lin = custom_potential(
        "linear", [](double u) { return -0.5 * u; }, [](double u) { return -0.25 * u * u; },
        [](double) { return -0.5; });
    const auto eq = compute_indicial_roots(make_params(3, lin));
    CHECK(eq.alpha_minus == doctest::Approx(eq.beta_minus));
    CHECK(eq.alpha_plus == doctest::Approx(eq.beta_plus));
}

TEST_CASE("root chain holds whenever it applies (property)") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> ns(2, 12);
    std::uniform_real_distribution<double> frac(0.001, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = ns(rng);
        const double b = n - 1.0;
        const double k = frac(rng) * b * b / 8;  // L = 2k <= (n-1)^2/4
        const auto rep = root_chain_check(make_params(n, cubic_potential(k)));
        CHECK(rep.applicable);
        CHECK(rep.holds);
    }
}

TEST_CASE("make_params rejects n < 2") {
    CHECK(error_code_of([] { make_params(1, cubic_potential(1.0)); }) == ErrorCode::invalid_argument);
}

TEST_CASE("tabulated potential reproduces a cubic") {
    std::ostringstream csv;
    csv.precision(17);
    csv << "s,f,fprime\n";
    const auto c = cubic_potential(0.5);
    for (int i = 0; i <= 400; ++i) {
        const double s = -2.0 + 0.01 * i;
        csv << s << ',' << c.f(s) << ',' << c.fprime(s) << '\n';
    }
    std::istringstream in(csv.str());
    const auto t = tabulated_potential(in);
    for (double s : {-1.7, -0.9, -0.31, 0.0, 0.42, 1.0, 1.55}) {
        CHECK(std::abs(t.f(s) - c.f(s)) < 1e-8);
        CHECK(std::abs(t.F(s) - c.F(s)) < 1e-8);
        CHECK(std::abs(t.fprime(s) - c.fprime(s)) < 1e-5);
    }
    CHECK(t.lambda == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(error_code_of([&] { t.f(2.5); }).has_value());
}

}
