#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "sitmark/hedging.hpp"

using namespace sitmark;

TEST_CASE("optimal hedge ratio reference values") {
    CHECK(optimal_hedge_ratio({0.0, 0.3, 0.3}) == 0.0);
    CHECK(optimal_hedge_ratio({1.0, 0.4, 0.4}) == 1.0);
    CHECK(optimal_hedge_ratio({0.85, 0.40, 0.38}) ==
          doctest::Approx(0.8947).epsilon(1e-4));
    CHECK_THROWS_AS((void)optimal_hedge_ratio({0.5, 0.3, 0.0}), std::domain_error);
    CHECK_THROWS_AS((void)optimal_hedge_ratio({1.5, 0.3, 0.3}), std::domain_error);
}

TEST_CASE("hedged variance quadratic") {
    const HedgeInputs inputs{0.7, 0.5, 0.4, 1.0};
    CHECK(hedged_variance(0.0, inputs) == doctest::Approx(0.25).epsilon(1e-14));
    const double h_star = optimal_hedge_ratio(inputs);
    CHECK(hedged_variance(h_star, inputs) ==
          doctest::Approx(0.25 * (1.0 - 0.49)).epsilon(1e-12));
}

TEST_CASE("grid search locates the variance minimum at h*") {
    std::mt19937_64 gen(12);
    std::uniform_real_distribution<double> rho(-0.99, 0.99);
    std::uniform_real_distribution<double> vol(0.05, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        HedgeInputs inputs{rho(gen), vol(gen), vol(gen), 1.0};
        const double h_star = optimal_hedge_ratio(inputs);
        if (std::abs(h_star) > 1.9) {
            continue;
        }
        double best_h = -2.0;
        double best_v = hedged_variance(-2.0, inputs);
        for (int i = 1; i <= 40000; ++i) {
            const double h = -2.0 + 1e-4 * i;
            const double v = hedged_variance(h, inputs);
            if (v < best_v) {
                best_v = v;
                best_h = h;
            }
        }
        CHECK(std::abs(best_h - h_star) <= 1e-4 + 1e-12);
        CHECK(hedged_variance(h_star, inputs) <= best_v + 1e-15);
    }
}

TEST_CASE("hedge efficiency is rho squared") {
    CHECK(hedge_efficiency(0.85) == doctest::Approx(0.7225).epsilon(1e-15));
    CHECK(hedge_efficiency(0.0) == 0.0);
    CHECK(hedge_efficiency(-0.85) == doctest::Approx(0.7225).epsilon(1e-15));
    CHECK_THROWS_AS((void)hedge_efficiency(1.2), std::domain_error);

    // Algebraic identity with the variance quadratic.
    const HedgeInputs inputs{0.6, 0.5, 0.3, 1.0};
    const double h_star = optimal_hedge_ratio(inputs);
    const double efficiency =
        1.0 - hedged_variance(h_star, inputs) / hedged_variance(0.0, inputs);
    CHECK(efficiency == doctest::Approx(hedge_efficiency(0.6)).epsilon(1e-12));
}

TEST_CASE("argmin scaling invariances") {
    const HedgeInputs base{0.6, 0.5, 0.3, 1.0};
    const double h0 = optimal_hedge_ratio(base);
    CHECK(optimal_hedge_ratio({0.6, 2.0 * 0.5, 2.0 * 0.3, 1.0}) ==
          doctest::Approx(h0).epsilon(1e-14));
    CHECK(optimal_hedge_ratio({0.6, 2.0 * 0.5, 0.3, 1.0}) ==
          doctest::Approx(2.0 * h0).epsilon(1e-14));
}

TEST_CASE("estimate_from_series on exact relationships") {
    std::vector<double> spot = {0.1, -0.2, 0.3, 0.05, -0.12, 0.2};
    const auto identical = estimate_from_series(spot, spot);
    CHECK(identical.rho == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(optimal_hedge_ratio(identical) == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<double> doubled;
    for (double s : spot) {
        doubled.push_back(2.0 * s);
    }
    const auto scaled = estimate_from_series(spot, doubled);
    CHECK(scaled.rho == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(optimal_hedge_ratio(scaled) == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS((void)estimate_from_series(spot, std::vector<double>{1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        (void)estimate_from_series(spot, std::vector<double>(spot.size(), 3.0)),
        std::invalid_argument);
}

TEST_CASE("perfect hedge limit: no basis noise, h=1, terminal procurement") {
    ProcessParams params;
    params.lambda = 0.0;  // keep the futures a clean function of spot
    BacktestConfig config;
    config.horizon_months = 1;
    config.roll_days_before_expiry = 0;  // hold the front month to expiry
    config.use_optimal_h = false;
    config.fixed_h = 1.0;
    config.procurement = Procurement::kTerminal;
    config.basis.sigma_b = 0.0;  // no basis noise

    const double horizon = 1.0 / 12.0;
    const double dt = horizon / 21.0;
    const Ensemble ensemble =
        simulate_ensemble(params, params.theta0, horizon, dt, 2000, 13);
    const HedgeReport report = backtest_hedge(ensemble, params, config);

    // Holding the expiring contract against a terminal purchase: the hedge
    // P&L telescopes to S_T - F(0,T), leaving zero cost variance.
    CHECK(report.hedged_std < 1e-10 * report.unhedged_std + 1e-12);
    CHECK(report.variance_reduction == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("single-period in-sample variance reduction equals realized rho squared") {
    ProcessParams params;
    BacktestConfig config;
    config.horizon_months = 1;
    config.roll_days_before_expiry = 0;
    config.use_optimal_h = true;
    config.procurement = Procurement::kTerminal;
    config.basis.sigma_b = 1.5;  // fixed, uncalibrated basis noise

    const double horizon = 1.0 / 12.0;
    const double dt = horizon / 21.0;
    const Ensemble ensemble =
        simulate_ensemble(params, params.theta0, horizon, dt, 4000, 29);
    const HedgeReport report = backtest_hedge(ensemble, params, config);
    CHECK(report.variance_reduction ==
          doctest::Approx(report.rho_realized * report.rho_realized).epsilon(1e-9));
}

TEST_CASE("backtest rejects an ensemble shorter than the horizon") {
    ProcessParams params;
    BacktestConfig config;
    config.horizon_months = 12;
    const Ensemble short_run =
        simulate_ensemble(params, params.theta0, 0.5, 1.0 / 252.0, 16, 3);
    CHECK_THROWS_AS((void)backtest_hedge(short_run, params, config),
                    std::invalid_argument);
}
