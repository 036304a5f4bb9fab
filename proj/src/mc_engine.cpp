#include "sitmark/mc_engine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "sitmark/rng.hpp"
#include "sitmark/stats.hpp"

namespace sitmark {

ProcessParams ScenarioSpec::apply(const ProcessParams& base) const {
    ProcessParams params = base;
    if (kappa) params.kappa = *kappa;
    if (theta0) params.theta0 = *theta0;
    if (beta) params.beta = *beta;
    if (sigma) params.sigma = *sigma;
    if (lambda) params.lambda = *lambda;
    if (mu_j) params.mu_j = *mu_j;
    if (sigma_j) params.sigma_j = *sigma_j;
    if (gamma) params.gamma = *gamma;
    if (t_season) params.t_season = *t_season;
    params.validate();
    return params;
}

std::vector<ScenarioSpec> default_scenarios() {
    ScenarioSpec baseline;
    baseline.name = "baseline";
    baseline.mixture_weight = 0.5;

    ScenarioSpec optimistic;
    optimistic.name = "optimistic";
    optimistic.mixture_weight = 0.3;
    optimistic.beta = 0.10;
    optimistic.lambda = 4.5;
    optimistic.mu_j = 0.15;

    ScenarioSpec pessimistic;
    pessimistic.name = "pessimistic";
    pessimistic.mixture_weight = 0.2;
    pessimistic.beta = -0.55;

    return {baseline, optimistic, pessimistic};
}

Ensemble run_scenario(const ScenarioSpec& scenario, const ProcessParams& base,
                      std::size_t n_paths, double horizon, double dt,
                      std::uint64_t base_seed, int threads, kernels::Backend backend) {
    const ProcessParams params = scenario.apply(base);
    return simulate_ensemble(params, params.theta0, horizon, dt, n_paths, base_seed,
                             threads, backend);
}

EnsembleStats summarize(const Ensemble& ensemble) {
    const std::size_t n_paths = ensemble.n_paths();
    const std::size_t n_times = ensemble.n_steps() + 1;
    if (n_paths < 2) {
        throw std::invalid_argument("summarize: need at least 2 paths");
    }

    EnsembleStats out;
    out.times = ensemble.times();
    out.n_paths = n_paths;
    out.mean_price.resize(n_times);
    out.p5.resize(n_times);
    out.p25.resize(n_times);
    out.p75.resize(n_times);
    out.p95.resize(n_times);

    const double cuts[4] = {0.05, 0.25, 0.75, 0.95};
    std::vector<double> column(n_paths);
    for (std::size_t k = 0; k < n_times; ++k) {
        for (std::size_t p = 0; p < n_paths; ++p) {
            column[p] = std::exp(ensemble.log_prices(p)[k]);
        }
        out.mean_price[k] = stats::mean(column);
        const auto qs = stats::quantiles(column, cuts);
        out.p5[k] = qs[0];
        out.p25[k] = qs[1];
        out.p75[k] = qs[2];
        out.p95[k] = qs[3];
    }

    std::vector<double> terminal(n_paths);
    std::size_t rises = 0;
    std::size_t swings = 0;
    const double log2 = std::log(2.0);
    const double log5 = std::log(5.0);
    // Swing window: one year of grid steps (whole path if shorter).
    const std::size_t window =
        std::min<std::size_t>(n_times - 1,
                              static_cast<std::size_t>(std::llround(1.0 / ensemble.dt())));
    std::deque<std::size_t> max_q;
    std::deque<std::size_t> min_q;
    for (std::size_t p = 0; p < n_paths; ++p) {
        const auto x = ensemble.log_prices(p);
        terminal[p] = std::exp(x[n_times - 1]);

        double max_vs_start = 0.0;
        for (std::size_t k = 1; k < n_times; ++k) {
            max_vs_start = std::max(max_vs_start, x[k] - x[0]);
        }
        if (max_vs_start >= log2) {
            ++rises;
        }

        // Largest max/min spread within any rolling window (monotone deques).
        max_q.clear();
        min_q.clear();
        bool swung = false;
        for (std::size_t k = 0; k < n_times && !swung; ++k) {
            while (!max_q.empty() && x[max_q.back()] <= x[k]) {
                max_q.pop_back();
            }
            max_q.push_back(k);
            while (!min_q.empty() && x[min_q.back()] >= x[k]) {
                min_q.pop_back();
            }
            min_q.push_back(k);
            if (k >= window) {
                if (max_q.front() + window < k) {
                    max_q.pop_front();
                }
                if (min_q.front() + window < k) {
                    min_q.pop_front();
                }
            }
            swung = x[max_q.front()] - x[min_q.front()] > log5;
        }
        if (swung) {
            ++swings;
        }
    }
    out.frac_rise_100 = static_cast<double>(rises) / static_cast<double>(n_paths);
    out.frac_swing_5x = static_cast<double>(swings) / static_cast<double>(n_paths);
    out.terminal_skewness = stats::skewness(terminal, &out.skewness_degenerate);

    std::vector<double> dispersion(n_paths);
    for (const auto& [t_begin, t_end] : default_vol_buckets(ensemble.times().back())) {
        double vol_sum = 0.0;
        std::size_t n_grid = 0;
        for (std::size_t k = 1; k < n_times; ++k) {
            const double t = out.times[k];
            if (t <= t_begin || t > t_end) {
                continue;
            }
            for (std::size_t p = 0; p < n_paths; ++p) {
                const auto x = ensemble.log_prices(p);
                dispersion[p] = x[k] - x[0];
            }
            vol_sum += stats::std_dev(dispersion) / std::sqrt(t);
            ++n_grid;
        }
        if (n_grid > 0) {
            out.vol_buckets.push_back({t_begin, t_end,
                                       vol_sum / static_cast<double>(n_grid)});
        }
    }
    return out;
}

std::vector<std::pair<double, double>> default_vol_buckets(double horizon) {
    const std::pair<double, double> shape[] = {
        {0.0, 0.25}, {0.25, 0.5}, {0.5, 1.0}, {1.0, 2.0}, {2.0, 3.0}};
    std::vector<std::pair<double, double>> buckets;
    for (const auto& [a, b] : shape) {
        if (a < horizon) {
            buckets.emplace_back(a, std::min(b, horizon));
        }
    }
    return buckets;
}

std::vector<VolBucket> vol_term_structure(std::span<const ScenarioSpec> scenarios,
                                          const ProcessParams& base, std::size_t n_paths,
                                          double horizon, double dt,
                                          std::span<const std::pair<double, double>> buckets,
                                          std::uint64_t base_seed, int threads,
                                          kernels::Backend backend) {
    if (scenarios.empty()) {
        throw std::invalid_argument("vol_term_structure: no scenarios");
    }
    if (buckets.empty()) {
        throw std::invalid_argument("vol_term_structure: no buckets");
    }
    double total_weight = 0.0;
    for (const auto& scenario : scenarios) {
        if (!(scenario.mixture_weight >= 0.0)) {
            throw std::invalid_argument("vol_term_structure: negative mixture weight");
        }
        total_weight += scenario.mixture_weight;
    }
    if (!(std::abs(total_weight - 1.0) <= 1e-9)) {
        throw std::invalid_argument("vol_term_structure: mixture weights must sum to 1");
    }

    // Allocate paths per scenario by weight; each scenario draws its own
    // deterministic stream family.
    std::vector<Ensemble> mixed;
    std::vector<std::size_t> counts;
    std::size_t assigned = 0;
    for (std::size_t s = 0; s < scenarios.size(); ++s) {
        std::size_t count =
            s + 1 == scenarios.size()
                ? n_paths - assigned
                : static_cast<std::size_t>(
                      std::llround(scenarios[s].mixture_weight * static_cast<double>(n_paths)));
        count = std::min(count, n_paths - assigned);
        assigned += count;
        counts.push_back(count);
        if (count > 0) {
            mixed.push_back(run_scenario(scenarios[s], base, count, horizon, dt,
                                         base_seed ^ rng::mix64(s + 1), threads, backend));
        } else {
            mixed.emplace_back();
        }
    }

    const Ensemble* reference = nullptr;
    for (std::size_t s = 0; s < mixed.size(); ++s) {
        if (counts[s] > 0) {
            reference = &mixed[s];
            break;
        }
    }
    if (!reference) {
        throw std::invalid_argument("vol_term_structure: no paths allocated");
    }
    const std::size_t n_times = reference->n_steps() + 1;
    const auto& times = reference->times();

    std::vector<VolBucket> out;
    std::vector<double> pooled;
    pooled.reserve(n_paths);
    for (const auto& [t_begin, t_end] : buckets) {
        VolBucket bucket{t_begin, t_end, 0.0};
        double vol_sum = 0.0;
        std::size_t n_grid = 0;
        for (std::size_t k = 1; k < n_times; ++k) {
            const double t = times[k];
            if (t <= t_begin || t > t_end) {
                continue;
            }
            pooled.clear();
            for (std::size_t s = 0; s < mixed.size(); ++s) {
                for (std::size_t p = 0; p < counts[s]; ++p) {
                    const auto x = mixed[s].log_prices(p);
                    pooled.push_back(x[k] - x[0]);
                }
            }
            vol_sum += stats::std_dev(pooled) / std::sqrt(t);
            ++n_grid;
        }
        if (n_grid == 0) {
            throw std::invalid_argument("vol_term_structure: bucket contains no grid times");
        }
        bucket.vol = vol_sum / static_cast<double>(n_grid);
        out.push_back(bucket);
    }
    return out;
}

namespace {

double evaluate_metric(const std::string& metric, const ProcessParams& params,
                       double target_rho, const SweepConfig& config) {
    if (metric == "hedged_cost_std" || metric == "variance_reduction") {
        BacktestConfig backtest = config.backtest;
        backtest.basis.target_rho = target_rho;
        backtest.basis.sigma_b = -1.0;  // recalibrate per sweep point
        const double horizon = static_cast<double>(backtest.horizon_months) / 12.0;
        const double dt = horizon / (static_cast<double>(backtest.horizon_months) *
                                     backtest.days_per_month);
        const Ensemble ensemble = simulate_ensemble(params, params.theta0, horizon, dt,
                                                    config.n_paths, config.base_seed,
                                                    config.threads);
        const HedgeReport report = backtest_hedge(ensemble, params, backtest);
        return metric == "hedged_cost_std" ? report.hedged_std : report.variance_reduction;
    }

    const Ensemble ensemble =
        simulate_ensemble(params, params.theta0, config.horizon, config.dt, config.n_paths,
                          config.base_seed, config.threads);
    if (metric == "terminal_mean" || metric == "terminal_p90") {
        std::vector<double> terminal(ensemble.n_paths());
        for (std::size_t p = 0; p < ensemble.n_paths(); ++p) {
            terminal[p] = std::exp(ensemble.log_prices(p)[ensemble.n_steps()]);
        }
        return metric == "terminal_mean" ? stats::mean(terminal)
                                         : stats::quantile(terminal, 0.90);
    }
    if (metric == "frac_rise_100") {
        return summarize(ensemble).frac_rise_100;
    }
    throw std::invalid_argument("sensitivity_sweep: unknown metric '" + metric + "'");
}

}  // namespace

std::vector<SweepPoint> sensitivity_sweep(const std::string& parameter,
                                          std::span<const double> values,
                                          const ProcessParams& base,
                                          const std::string& metric,
                                          const SweepConfig& config) {
    if (values.empty()) {
        throw std::invalid_argument("sensitivity_sweep: no values");
    }

    std::vector<SweepPoint> out;
    out.reserve(values.size());
    for (double value : values) {
        ProcessParams params = base;
        double target_rho = config.backtest.basis.target_rho;
        if (parameter == "kappa") {
            params.kappa = value;
        } else if (parameter == "theta0") {
            params.theta0 = value;
        } else if (parameter == "beta") {
            params.beta = value;
        } else if (parameter == "sigma") {
            params.sigma = value;
        } else if (parameter == "lambda") {
            params.lambda = value;
        } else if (parameter == "mu_j") {
            params.mu_j = value;
        } else if (parameter == "sigma_j") {
            params.sigma_j = value;
        } else if (parameter == "gamma") {
            params.gamma = value;
        } else if (parameter == "t_season") {
            params.t_season = value;
        } else if (parameter == "target_rho") {
            target_rho = value;
        } else {
            throw std::invalid_argument("sensitivity_sweep: unknown parameter '" +
                                        parameter + "'");
        }
        params.validate();
        out.push_back({value, evaluate_metric(metric, params, target_rho, config)});
    }
    return out;
}

}  // namespace sitmark
