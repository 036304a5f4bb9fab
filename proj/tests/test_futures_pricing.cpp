#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "sitmark/futures_pricing.hpp"

using namespace sitmark;

TEST_CASE("expiry convergence: F(T,T) equals spot") {
    ProcessParams params;
    std::mt19937_64 gen(321);
    std::uniform_real_distribution<double> logp(-1.0, 2.0);
    std::uniform_real_distribution<double> when(0.0, 5.0);
    for (int i = 0; i < 100; ++i) {
        const double x = logp(gen);
        const double t = when(gen);
        CHECK(futures_price(x, t, t, params) ==
              doctest::Approx(std::exp(x)).epsilon(1e-12));
    }
}

TEST_CASE("degenerate deterministic case equals the ODE forward") {
    ProcessParams params;
    params.sigma = 0.0;
    params.lambda = 0.0;
    const double x0 = std::log(2.0);
    for (double maturity : {0.1, 0.5, 1.0, 2.5}) {
        const double want = std::exp(ode_mean(params, x0, 0.0, maturity));
        CHECK(futures_price(x0, 0.0, maturity, params) ==
              doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("maturity ordering is validated") {
    ProcessParams params;
    CHECK_THROWS_AS((void)futures_price(0.0, 1.0, 0.5, params), std::domain_error);
}

TEST_CASE("oracle degenerate cases") {
    ProcessParams params;
    const auto at_expiry = mc_futures_oracle(0.4, 2.0, 2.0, params, 500, 9);
    CHECK(at_expiry.mean == std::exp(0.4));
    CHECK(at_expiry.std_error == 0.0);

    ProcessParams quiet;
    quiet.sigma = 0.0;
    quiet.lambda = 0.0;
    const auto det = mc_futures_oracle(0.4, 0.0, 1.0, quiet, 500, 9);
    CHECK(det.mean == doctest::Approx(std::exp(ode_mean(quiet, 0.4, 0.0, 1.0))).epsilon(1e-12));
    CHECK(det.std_error == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS_AS((void)mc_futures_oracle(0.4, 0.0, 1.0, params, 50, 9),
                    std::invalid_argument);
}

TEST_CASE("semi-analytic price sits within 3 MC standard errors (spot check)") {
    ProcessParams params;
    const double x0 = std::log(2.0);
    for (double maturity : {1.0 / 12.0, 0.5}) {
        const double analytic = futures_price(x0, 0.0, maturity, params);
        const auto mc = mc_futures_oracle(x0, 0.0, maturity, params, 400000, 77);
        CHECK(std::abs(analytic - mc.mean) <= 3.0 * mc.std_error);
    }
}

TEST_CASE("curve continuity in maturity") {
    ProcessParams params;
    const double x0 = 0.5;
    const double base = futures_price(x0, 0.0, 1.0, params);
    double prev_gap = 1.0;
    for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
        const double gap = std::abs(futures_price(x0, 0.0, 1.0 + eps, params) - base);
        CHECK(gap < prev_gap + 1e-15);
        prev_gap = gap;
    }
    CHECK(prev_gap < 1e-6);
}

TEST_CASE("declining trend without jumps gives backwardation at long maturities") {
    ProcessParams params;
    params.lambda = 0.0;  // isolate the trend
    const double x0 = params.theta0;
    // Sample at whole years so the seasonal term cancels.
    const double f1 = futures_price(x0, 0.0, 1.0, params);
    const double f2 = futures_price(x0, 0.0, 2.0, params);
    const double f3 = futures_price(x0, 0.0, 3.0, params);
    CHECK(f2 < f1);
    CHECK(f3 < f2);
    // Slope direction matches the deterministic ODE forward.
    ProcessParams quiet = params;
    quiet.sigma = 0.0;
    CHECK(std::exp(ode_mean(quiet, x0, 0.0, 3.0)) < std::exp(ode_mean(quiet, x0, 0.0, 2.0)));
}

TEST_CASE("jump intensity with positive mean jump raises the futures price") {
    ProcessParams params;
    const double x0 = std::log(2.0);
    double prev = futures_price(x0, 0.0, 1.0, ProcessParams{.lambda = 0.0});
    for (double lambda : {1.0, 3.0, 6.0}) {
        ProcessParams jumpy;
        jumpy.lambda = lambda;
        const double price = futures_price(x0, 0.0, 1.0, jumpy);
        CHECK(price > prev);
        prev = price;
    }
}

TEST_CASE("futures curve helpers") {
    ProcessParams params;
    const double x0 = std::log(2.0);
    const double curve_point[] = {0.0};
    const auto singleton = futures_curve(x0, 0.0, curve_point, params);
    REQUIRE(singleton.size() == 1);
    CHECK(singleton[0].price == doctest::Approx(2.0).epsilon(1e-12));

    const auto calendar_curve =
        futures_curve_from_calendar(x0, 0.0, {2026, 1, 2}, params);
    REQUIRE(calendar_curve.size() == 10);  // 6 monthly + 4 quarterly
    for (std::size_t i = 1; i < calendar_curve.size(); ++i) {
        CHECK(calendar_curve[i].maturity > calendar_curve[i - 1].maturity);
    }

    CHECK_THROWS_AS((void)futures_curve(x0, 0.0, {}, params), std::invalid_argument);
}

TEST_CASE("risk premium shift moves the price in beta's direction") {
    ProcessParams params;
    const double x0 = std::log(2.0);
    const double base = futures_price(x0, 0.0, 1.0, params, 0.0);
    CHECK(futures_price(x0, 0.0, 1.0, params, 0.10) > base);
    CHECK(futures_price(x0, 0.0, 1.0, params, -0.10) < base);
}
