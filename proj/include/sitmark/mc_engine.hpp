// mc_engine.hpp — scenario ensembles, summary statistics, sensitivity sweeps.
//
// Scenarios overlay partial parameter overrides on a base parameter set.
// summarize() produces the fan-chart bands, terminal skewness, and tail
// metrics; vol_term_structure() measures cross-sectional annualized
// volatility per horizon bucket on a scenario mixture; sensitivity_sweep()
// reruns a named metric across parameter values with common random numbers.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sitmark/hedging.hpp"
#include "sitmark/price_process.hpp"

namespace sitmark {

struct ScenarioSpec {
    std::string name;
    double mixture_weight = 1.0;
    std::optional<double> kappa;
    std::optional<double> theta0;
    std::optional<double> beta;
    std::optional<double> sigma;
    std::optional<double> lambda;
    std::optional<double> mu_j;
    std::optional<double> sigma_j;
    std::optional<double> gamma;
    std::optional<double> t_season;

    bool operator==(const ScenarioSpec&) const = default;

    // Base parameters with the overrides applied (validated).
    ProcessParams apply(const ProcessParams& base) const;
};

// Documented non-paper defaults: baseline w=0.5 (no overrides),
// optimistic w=0.3 {beta +0.10, lambda 4.5, mu_j 0.15},
// pessimistic w=0.2 {beta -0.55}.
std::vector<ScenarioSpec> default_scenarios();

struct VolBucket {
    double t_begin = 0.0;
    double t_end = 0.0;
    double vol = 0.0;  // annualized
};

struct EnsembleStats {
    std::vector<double> times;
    std::vector<double> mean_price;
    std::vector<double> p5, p25, p75, p95;
    double terminal_skewness = 0.0;
    bool skewness_degenerate = false;
    // Tail metrics (per-path, across the whole horizon):
    double frac_rise_100 = 0.0;   // max_t P_t >= 2 * P_0
    double frac_swing_5x = 0.0;   // max/min price ratio > 5 within a 1y window
    // Cross-sectional annualized vol per default horizon bucket.
    std::vector<VolBucket> vol_buckets;
    std::size_t n_paths = 0;
};

Ensemble run_scenario(const ScenarioSpec& scenario, const ProcessParams& base,
                      std::size_t n_paths, double horizon, double dt,
                      std::uint64_t base_seed, int threads = 0,
                      kernels::Backend backend = kernels::Backend::kAuto);

EnsembleStats summarize(const Ensemble& ensemble);

// Default horizon buckets (quarters out to one year, then yearly), clipped
// to the ensemble horizon.
std::vector<std::pair<double, double>> default_vol_buckets(double horizon);

// Cross-sectional annualized volatility std(X_t - X_0)/sqrt(t) averaged over
// grid times inside each bucket, on the weight-mixed scenario ensemble.
// Throws std::invalid_argument for a bucket containing no grid times.
std::vector<VolBucket> vol_term_structure(std::span<const ScenarioSpec> scenarios,
                                          const ProcessParams& base, std::size_t n_paths,
                                          double horizon, double dt,
                                          std::span<const std::pair<double, double>> buckets,
                                          std::uint64_t base_seed, int threads = 0,
                                          kernels::Backend backend = kernels::Backend::kAuto);

struct SweepPoint {
    double value = 0.0;
    double metric = 0.0;
};

struct SweepConfig {
    std::size_t n_paths = 2000;
    double horizon = 3.0;
    double dt = 1.0 / 252.0;
    std::uint64_t base_seed = 42;
    int threads = 0;
    BacktestConfig backtest;  // used by hedging metrics
};

// parameter: a ProcessParams field name or "target_rho".
// metric: terminal_mean | terminal_p90 | frac_rise_100 | hedged_cost_std |
//         variance_reduction.
std::vector<SweepPoint> sensitivity_sweep(const std::string& parameter,
                                          std::span<const double> values,
                                          const ProcessParams& base,
                                          const std::string& metric,
                                          const SweepConfig& config);

}  // namespace sitmark
