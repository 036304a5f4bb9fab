#include <doctest.h>

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "sitmark/mc_engine.hpp"
#include "sitmark/stats.hpp"

using namespace sitmark;

TEST_CASE("scenario overrides merge onto the base parameters") {
    ProcessParams base;
    ScenarioSpec empty;
    empty.name = "baseline";
    CHECK(empty.apply(base) == base);

    ScenarioSpec optimistic;
    optimistic.beta = 0.10;
    optimistic.lambda = 4.5;
    const ProcessParams merged = optimistic.apply(base);
    CHECK(merged.beta == 0.10);
    CHECK(merged.lambda == 4.5);
    CHECK(merged.sigma == base.sigma);

    ScenarioSpec invalid;
    invalid.kappa = -2.0;
    CHECK_THROWS_AS((void)invalid.apply(base), std::domain_error);
}

TEST_CASE("empty overrides reproduce the baseline ensemble bit for bit") {
    ProcessParams base;
    ScenarioSpec scenario;
    const Ensemble via_scenario = run_scenario(scenario, base, 32, 0.25, 1.0 / 252.0, 11);
    const Ensemble direct =
        simulate_ensemble(base, base.theta0, 0.25, 1.0 / 252.0, 32, 11);
    for (std::size_t p = 0; p < 32; ++p) {
        const auto a = via_scenario.log_prices(p);
        const auto b = direct.log_prices(p);
        CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
    }
}

TEST_CASE("deterministic override collapses all paths onto one curve") {
    ProcessParams base;
    ScenarioSpec quiet;
    quiet.sigma = 0.0;
    quiet.lambda = 0.0;
    const Ensemble ensemble = run_scenario(quiet, base, 8, 0.5, 1.0 / 252.0, 17);
    const auto first = ensemble.log_prices(0);
    for (std::size_t p = 1; p < ensemble.n_paths(); ++p) {
        const auto other = ensemble.log_prices(p);
        CHECK(std::memcmp(first.data(), other.data(), first.size() * sizeof(double)) == 0);
    }
}

TEST_CASE("summarize: bands ordered, degenerate ensembles flagged") {
    ProcessParams base;
    const Ensemble ensemble =
        simulate_ensemble(base, base.theta0, 0.5, 1.0 / 252.0, 500, 23);
    const EnsembleStats stats = summarize(ensemble);
    REQUIRE(stats.times.size() == ensemble.n_steps() + 1);
    for (std::size_t k = 0; k < stats.times.size(); ++k) {
        CHECK(stats.p5[k] <= stats.p25[k]);
        CHECK(stats.p25[k] <= stats.p75[k]);
        CHECK(stats.p75[k] <= stats.p95[k]);
    }
    CHECK_FALSE(stats.skewness_degenerate);

    ScenarioSpec quiet;
    quiet.sigma = 0.0;
    quiet.lambda = 0.0;
    const Ensemble flat = run_scenario(quiet, base, 16, 0.25, 1.0 / 252.0, 5);
    const EnsembleStats flat_stats = summarize(flat);
    CHECK(flat_stats.skewness_degenerate);
    CHECK(flat_stats.terminal_skewness == 0.0);
    for (std::size_t k = 0; k < flat_stats.times.size(); ++k) {
        CHECK(flat_stats.p5[k] == doctest::Approx(flat_stats.p95[k]).epsilon(1e-12));
    }
}

TEST_CASE("vol term structure: single low-reversion scenario is flat at sigma") {
    ProcessParams base;
    base.kappa = 0.05;  // nearly Brownian over the horizon
    base.lambda = 0.0;
    base.beta = 0.0;
    base.gamma = 0.0;
    ScenarioSpec only;
    only.mixture_weight = 1.0;
    const std::vector<ScenarioSpec> scenarios = {only};
    const std::pair<double, double> buckets[] = {{0.0, 0.25}, {0.25, 0.5}, {0.5, 1.0}};
    const auto ts = vol_term_structure(scenarios, base, 4000, 1.0, 1.0 / 252.0, buckets, 7);
    REQUIRE(ts.size() == 3);
    for (const auto& bucket : ts) {
        CHECK(bucket.vol == doctest::Approx(base.sigma).epsilon(0.02));
    }
}

TEST_CASE("vol term structure: divergent-beta mixture lifts mid-horizon vol") {
    ProcessParams base;
    base.kappa = 0.5;
    base.sigma = 0.20;
    base.lambda = 0.0;
    base.beta = 0.0;
    base.gamma = 0.0;
    ScenarioSpec up;
    up.name = "up";
    up.mixture_weight = 0.5;
    up.beta = 1.0;
    ScenarioSpec down;
    down.name = "down";
    down.mixture_weight = 0.5;
    down.beta = -1.0;
    const std::vector<ScenarioSpec> scenarios = {up, down};
    const std::pair<double, double> buckets[] = {{0.0, 0.25}, {0.75, 1.25}};
    const auto ts =
        vol_term_structure(scenarios, base, 4000, 1.25, 1.0 / 252.0, buckets, 71);
    REQUIRE(ts.size() == 2);
    CHECK(ts[1].vol > ts[0].vol);
}

TEST_CASE("vol term structure input validation") {
    ProcessParams base;
    ScenarioSpec only;
    only.mixture_weight = 1.0;
    const std::vector<ScenarioSpec> scenarios = {only};
    const std::pair<double, double> empty_bucket[] = {{0.9991, 0.9992}};
    CHECK_THROWS_AS((void)vol_term_structure(scenarios, base, 64, 1.0, 1.0 / 252.0,
                                             empty_bucket, 7),
                    std::invalid_argument);

    ScenarioSpec half;
    half.mixture_weight = 0.5;
    const std::vector<ScenarioSpec> bad_weights = {half};
    const std::pair<double, double> buckets[] = {{0.0, 1.0}};
    CHECK_THROWS_AS((void)vol_term_structure(bad_weights, base, 64, 1.0, 1.0 / 252.0,
                                             buckets, 7),
                    std::invalid_argument);
}

TEST_CASE("sensitivity sweep basics") {
    ProcessParams base;
    SweepConfig config;
    config.n_paths = 400;
    config.horizon = 1.0;
    config.base_seed = 99;

    const double single[] = {base.beta};
    const auto row = sensitivity_sweep("beta", single, base, "terminal_mean", config);
    REQUIRE(row.size() == 1);
    CHECK(row[0].value == base.beta);

    CHECK_THROWS_AS(
        (void)sensitivity_sweep("not_a_param", single, base, "terminal_mean", config),
        std::invalid_argument);
    CHECK_THROWS_AS(
        (void)sensitivity_sweep("beta", single, base, "not_a_metric", config),
        std::invalid_argument);
}

TEST_CASE("common random numbers make terminal prices pathwise monotone in beta") {
    ProcessParams base;
    SweepConfig config;
    config.n_paths = 300;
    config.horizon = 2.0;
    config.base_seed = 1234;

    ProcessParams low = base;
    low.beta = -0.5;
    ProcessParams high = base;
    high.beta = 0.1;
    const Ensemble a = simulate_ensemble(low, base.theta0, config.horizon, config.dt,
                                         config.n_paths, config.base_seed);
    const Ensemble b = simulate_ensemble(high, base.theta0, config.horizon, config.dt,
                                         config.n_paths, config.base_seed);
    for (std::size_t p = 0; p < a.n_paths(); ++p) {
        CHECK(b.log_prices(p)[a.n_steps()] >= a.log_prices(p)[a.n_steps()]);
    }

    // The p90 metric inherits the ordering.
    const double betas[] = {-0.5, -0.2, 0.1};
    const auto sweep = sensitivity_sweep("beta", betas, base, "terminal_p90", config);
    CHECK(sweep[0].metric <= sweep[1].metric);
    CHECK(sweep[1].metric <= sweep[2].metric);
}
