#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sitmark/price_process.hpp"
#include "support/stat_tests.hpp"

using namespace sitmark;

TEST_CASE("long_term_mean at reference points") {
    ProcessParams params;  // Table defaults
    CHECK(long_term_mean(0.0, params) == doctest::Approx(params.theta0).epsilon(1e-15));
    CHECK(long_term_mean(params.t_season, params) ==
          doctest::Approx(params.theta0 + params.beta * params.t_season).epsilon(1e-12));
    // Quarter period: theta0 - 0.0875 + 0.08.
    CHECK(long_term_mean(0.25, params) ==
          doctest::Approx(std::numbers::ln2 - 0.0875 + 0.08).epsilon(1e-12));
    CHECK(std::exp(long_term_mean(0.25, params)) == doctest::Approx(1.985).epsilon(1e-3));
}

TEST_CASE("theta_integral matches independent quadrature") {
    ProcessParams params;
    params.beta = -0.27;
    params.gamma = 0.11;
    params.t_season = 0.8;
    const auto integrand = [&](double t1) {
        return [&, t1](double s) {
            return params.kappa * std::exp(-params.kappa * (t1 - s)) *
                   long_term_mean(s, params);
        };
    };
    for (const auto [t0, t1] : {std::pair{0.0, 0.3}, {0.1, 0.1004}, {1.7, 2.9}}) {
        const double got = theta_integral(params, t0, t1);
        const double want = testsupport::integrate(integrand(t1), t0, t1, 1e-13);
        CHECK(got == doctest::Approx(want).epsilon(1e-10));
    }
    CHECK(theta_integral(params, 0.4, 0.4) == 0.0);
}

TEST_CASE("noise-free path equals the closed-form ODE solution") {
    ProcessParams params;
    params.sigma = 0.0;
    params.lambda = 0.0;
    const double x0 = 1.1;
    const double horizon = 3.0;
    const double dt = 1.0 / 252.0;
    const PricePath path = simulate_path(params, x0, horizon, dt, 1);

    // Independent oracle: x(t) = x0 e^{-kappa t} + kappa int e^{-kappa(t-s)} theta_s ds
    // with the integral done by quadrature of the raw integrand.
    double max_err = 0.0;
    for (std::size_t k = 0; k < path.times.size(); k += 36) {
        const double t = path.times[k];
        const double integral = testsupport::integrate(
            [&](double s) {
                return params.kappa * std::exp(-params.kappa * (t - s)) *
                       long_term_mean(s, params);
            },
            0.0, t, 1e-13);
        const double want = x0 * std::exp(-params.kappa * t) + integral;
        max_err = std::max(max_err, std::abs(path.log_prices[k] - want));
    }
    CHECK(max_err < 1e-10);
}

TEST_CASE("grid construction and path invariants") {
    ProcessParams params;
    const PricePath path = simulate_path(params, 0.2, 1.0, 1.0 / 252.0, 5);
    REQUIRE(path.times.size() == 253);
    REQUIRE(path.log_prices.size() == 253);
    REQUIRE(path.jump_marks.size() == 252);
    for (std::size_t k = 1; k < path.times.size(); ++k) {
        CHECK(path.times[k] > path.times[k - 1]);
    }
    for (double x : path.log_prices) {
        const double price = std::exp(x);
        CHECK(std::isfinite(price));
        CHECK(price > 0.0);
    }
}

TEST_CASE("simulate input validation") {
    ProcessParams params;
    CHECK_THROWS_AS(simulate_path(params, 0.0, 0.0, 0.1, 1), std::domain_error);
    CHECK_THROWS_AS(simulate_path(params, 0.0, 1.0, 2.0, 1), std::domain_error);
    params.kappa = -1.0;
    CHECK_THROWS_AS(simulate_path(params, 0.0, 1.0, 0.1, 1), std::domain_error);

    ProcessParams bad_sigma;
    bad_sigma.sigma = -0.5;
    CHECK_THROWS_AS(bad_sigma.validate(), std::domain_error);
    ProcessParams bad_season;
    bad_season.t_season = 0.0;
    CHECK_THROWS_AS(bad_season.validate(), std::domain_error);
}

TEST_CASE("terminal sampler degenerate cases") {
    ProcessParams params;
    // T == t returns x_t exactly.
    const auto same = sample_terminal_log_prices(params, 0.37, 1.0, 1.0, 64, 7);
    for (double x : same) {
        CHECK(x == 0.37);
    }
    // No noise, no jumps: exact ODE mean.
    ProcessParams quiet;
    quiet.sigma = 0.0;
    quiet.lambda = 0.0;
    const auto det = sample_terminal_log_prices(quiet, 0.5, 0.25, 1.75, 16, 3);
    const double want = ode_mean(quiet, 0.5, 0.25, 1.75);
    for (double x : det) {
        CHECK(x == doctest::Approx(want).epsilon(1e-14));
    }
}
