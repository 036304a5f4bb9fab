// price_process.cpp — exact-step simulation of the spot model.

#include "sitmark/price_process.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace sitmark {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require(bool ok, const char* msg) {
    if (!ok) {
        throw std::domain_error(msg);
    }
}

}  // namespace

void ProcessParams::validate() const {
    require(std::isfinite(kappa) && kappa > 0.0, "ProcessParams: kappa must be > 0");
    require(std::isfinite(theta0), "ProcessParams: theta0 must be finite");
    require(std::isfinite(beta), "ProcessParams: beta must be finite");
    require(std::isfinite(sigma) && sigma >= 0.0, "ProcessParams: sigma must be >= 0");
    require(std::isfinite(lambda) && lambda >= 0.0, "ProcessParams: lambda must be >= 0");
    require(std::isfinite(mu_j), "ProcessParams: mu_j must be finite");
    require(std::isfinite(sigma_j) && sigma_j >= 0.0, "ProcessParams: sigma_j must be >= 0");
    require(std::isfinite(gamma), "ProcessParams: gamma must be finite");
    require(std::isfinite(t_season) && t_season > 0.0, "ProcessParams: t_season must be > 0");
}

double long_term_mean(double t, const ProcessParams& params) {
    return params.theta0 + params.beta * t +
           params.gamma * std::sin(kTwoPi * t / params.t_season);
}

double theta_integral(const ProcessParams& params, double t0, double t1) {
    const double kappa = params.kappa;
    const double dt = t1 - t0;
    const double phi = std::exp(-kappa * dt);
    const double one_minus_phi = -std::expm1(-kappa * dt);

    // Constant + linear part of theta.
    double result = (params.theta0 + params.beta * t1) * one_minus_phi -
                    (params.beta / kappa) * (1.0 - phi * (1.0 + kappa * dt));

    // Seasonal part: kappa * int exp(-kappa (t1-s)) sin(omega s) ds.
    if (params.gamma != 0.0) {
        const double omega = kTwoPi / params.t_season;
        const double denom = kappa * kappa + omega * omega;
        const double at_t1 = kappa * std::sin(omega * t1) - omega * std::cos(omega * t1);
        const double at_t0 = kappa * std::sin(omega * t0) - omega * std::cos(omega * t0);
        result += params.gamma * kappa * (at_t1 - phi * at_t0) / denom;
    }
    return result;
}

double ode_mean(const ProcessParams& params, double x0, double t0, double t1) {
    return std::exp(-params.kappa * (t1 - t0)) * x0 + theta_integral(params, t0, t1);
}

Ensemble::Ensemble(std::size_t n_paths, std::size_t n_steps, double dt)
    : n_paths_(n_paths), n_steps_(n_steps), dt_(dt) {
    times_.resize(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k) {
        times_[k] = static_cast<double>(k) * dt;
    }
    log_prices_.resize(n_paths * (n_steps + 1));
    jump_counts_.resize(n_paths * n_steps);
}

std::span<const double> Ensemble::log_prices(std::size_t path) const {
    return {log_prices_.data() + path * (n_steps_ + 1), n_steps_ + 1};
}

std::span<double> Ensemble::log_prices(std::size_t path) {
    return {log_prices_.data() + path * (n_steps_ + 1), n_steps_ + 1};
}

std::span<const std::uint16_t> Ensemble::jump_counts(std::size_t path) const {
    return {jump_counts_.data() + path * n_steps_, n_steps_};
}

std::span<std::uint16_t> Ensemble::jump_counts(std::size_t path) {
    return {jump_counts_.data() + path * n_steps_, n_steps_};
}

kernels::StepPlan make_step_plan(const ProcessParams& params, double x0,
                                 double horizon, double dt) {
    params.validate();
    require(std::isfinite(x0), "simulate: x0 must be finite");
    require(horizon > 0.0, "simulate: horizon must be > 0");
    require(dt > 0.0 && dt <= horizon, "simulate: dt must satisfy 0 < dt <= horizon");

    kernels::StepPlan plan;
    const auto n_steps = static_cast<std::size_t>(std::llround(horizon / dt));
    plan.n_steps = n_steps < 1 ? 1 : n_steps;
    const double dt_eff = horizon / static_cast<double>(plan.n_steps);

    plan.x0 = x0;
    plan.decay = std::exp(-params.kappa * dt_eff);
    const double variance =
        params.sigma * params.sigma * -std::expm1(-2.0 * params.kappa * dt_eff) /
        (2.0 * params.kappa);
    plan.noise_scale = std::sqrt(variance);
    plan.jump_mean = params.mu_j;
    plan.jump_std = params.sigma_j;

    plan.drift.resize(plan.n_steps);
    for (std::size_t k = 0; k < plan.n_steps; ++k) {
        const double t0 = static_cast<double>(k) * dt_eff;
        const double t1 = static_cast<double>(k + 1) * dt_eff;
        plan.drift[k] = theta_integral(params, t0, t1);
    }

    plan.poisson_cdf = kernels::poisson_cdf_table(params.lambda * dt_eff);
    plan.draw_stride = 2 + plan.poisson_cdf.size();
    return plan;
}

std::vector<double> sample_terminal_log_prices(const ProcessParams& params, double x_t,
                                               double t, double T, std::size_t n_paths,
                                               std::uint64_t base_seed, int threads,
                                               kernels::Backend backend) {
    params.validate();
    require(std::isfinite(x_t), "sample_terminal: x_t must be finite");
    require(T >= t, "sample_terminal: T must be >= t");
    require(n_paths >= 1, "sample_terminal: n_paths must be >= 1");

    const double span = T - t;
    kernels::TerminalPlan plan;
    plan.x_t = x_t;
    plan.decay = std::exp(-params.kappa * span);
    plan.mean_shift = theta_integral(params, t, T);
    plan.noise_scale = std::sqrt(params.sigma * params.sigma *
                                 -std::expm1(-2.0 * params.kappa * span) /
                                 (2.0 * params.kappa));
    plan.jump_mean = params.mu_j;
    plan.jump_std = params.sigma_j;
    plan.kappa_dt = params.kappa * span;
    plan.poisson_cdf = kernels::poisson_cdf_table(params.lambda * span);
    plan.draw_stride = 2 + 2 * plan.poisson_cdf.size();

    std::vector<double> out(n_paths);
    std::size_t n_workers = threads > 0
                                ? static_cast<std::size_t>(threads)
                                : std::max<std::size_t>(1, std::thread::hardware_concurrency());
    n_workers = std::min(n_workers, n_paths);
    if (n_workers <= 1) {
        kernels::sample_terminal(plan, base_seed, 0, n_paths, out.data(), backend);
        return out;
    }
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    const std::size_t chunk = (n_paths + n_workers - 1) / n_workers;
    for (std::size_t w = 0; w < n_workers; ++w) {
        const std::size_t first = w * chunk;
        if (first >= n_paths) {
            break;
        }
        const std::size_t count = std::min(chunk, n_paths - first);
        pool.emplace_back([&, first, count] {
            kernels::sample_terminal(plan, base_seed, first, count, out.data() + first, backend);
        });
    }
    for (auto& worker : pool) {
        worker.join();
    }
    return out;
}

PricePath simulate_path(const ProcessParams& params, double x0, double horizon,
                        double dt, std::uint64_t seed, kernels::Backend backend) {
    const kernels::StepPlan plan = make_step_plan(params, x0, horizon, dt);
    const double dt_eff = horizon / static_cast<double>(plan.n_steps);

    PricePath path;
    path.seed = seed;
    path.times.resize(plan.n_steps + 1);
    for (std::size_t k = 0; k <= plan.n_steps; ++k) {
        path.times[k] = static_cast<double>(k) * dt_eff;
    }
    path.log_prices.resize(plan.n_steps + 1);
    path.jump_marks.resize(plan.n_steps);
    kernels::simulate_paths(plan, seed, 0, 1, path.log_prices.data(),
                            path.jump_marks.data(), backend);
    return path;
}

Ensemble simulate_ensemble(const ProcessParams& params, double x0, double horizon,
                           double dt, std::size_t n_paths, std::uint64_t base_seed,
                           int threads, kernels::Backend backend) {
    require(n_paths >= 1, "simulate_ensemble: n_paths must be >= 1");
    const kernels::StepPlan plan = make_step_plan(params, x0, horizon, dt);
    const double dt_eff = horizon / static_cast<double>(plan.n_steps);

    Ensemble ensemble(n_paths, plan.n_steps, dt_eff);
    ensemble.base_seed = base_seed;
    ensemble.x0 = x0;

    std::size_t n_workers = threads > 0
                                ? static_cast<std::size_t>(threads)
                                : std::max<std::size_t>(1, std::thread::hardware_concurrency());
    n_workers = std::min(n_workers, n_paths);

    double* prices = ensemble.log_prices(0).data();
    std::uint16_t* jumps = plan.n_steps > 0 ? ensemble.jump_counts(0).data() : nullptr;

    if (n_workers <= 1) {
        kernels::simulate_paths(plan, base_seed, 0, n_paths, prices, jumps, backend);
        return ensemble;
    }

    // Contiguous path blocks per worker; block boundaries do not affect
    // results because every path draws from its own counter-based stream.
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    const std::size_t chunk = (n_paths + n_workers - 1) / n_workers;
    const std::size_t row = plan.n_steps + 1;
    for (std::size_t w = 0; w < n_workers; ++w) {
        const std::size_t first = w * chunk;
        if (first >= n_paths) {
            break;
        }
        const std::size_t count = std::min(chunk, n_paths - first);
        pool.emplace_back([&, first, count] {
            kernels::simulate_paths(plan, base_seed, first, count, prices + first * row,
                                    jumps ? jumps + first * plan.n_steps : nullptr, backend);
        });
    }
    for (auto& worker : pool) {
        worker.join();
    }
    return ensemble;
}

}  // namespace sitmark
