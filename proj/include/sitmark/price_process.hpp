// price_process.hpp — mean-reverting jump-diffusion spot model.
//
// Log price X_t = ln P_t follows
//     dX = kappa*(theta_t - X) dt + sigma dW + J dN,
//     theta_t = theta0 + beta*t + gamma*sin(2*pi*t / t_season),
// with N a Poisson process of intensity lambda and J ~ N(mu_j, sigma_j^2).
// Simulation uses the exact conditional Gaussian step for the diffusive
// part (the theta integral evaluated in closed form), with compound-Poisson
// jumps applied undamped at step end. Paths are reproducible: path i of an
// ensemble draws from a counter-based stream keyed on (base_seed, i), so
// results do not depend on thread count or SIMD width.

#pragma once

#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "sitmark/kernels.hpp"

namespace sitmark {

struct ProcessParams {
    double kappa = 2.5;                     // mean-reversion speed, 1/year
    double theta0 = std::numbers::ln2;      // initial long-term mean, log price
    double beta = -0.35;                    // trend, 1/year
    double sigma = 0.40;                    // diffusion volatility, 1/sqrt(year)
    double lambda = 3.0;                    // jump intensity, 1/year
    double mu_j = 0.10;                     // mean log-jump size
    double sigma_j = 0.25;                  // log-jump size std dev
    double gamma = 0.08;                    // seasonal amplitude
    double t_season = 1.0;                  // seasonal period, years

    // Throws std::domain_error naming the offending field.
    void validate() const;

    double half_life_years() const { return std::numbers::ln2 / kappa; }

    bool operator==(const ProcessParams&) const = default;
};

// theta_t of the long-term mean function.
double long_term_mean(double t, const ProcessParams& params);

// kappa * integral_{t0}^{t1} exp(-kappa*(t1-s)) * theta_s ds, closed form.
double theta_integral(const ProcessParams& params, double t0, double t1);

// Noise-free mean: solution of dx = kappa*(theta_t - x) dt from (t0, x0).
double ode_mean(const ProcessParams& params, double x0, double t0, double t1);

struct PricePath {
    std::vector<double> times;             // n_steps + 1 entries, times[0] = 0
    std::vector<double> log_prices;        // same length as times
    std::vector<std::uint16_t> jump_marks; // per-step jump counts, n_steps entries
    std::uint64_t seed = 0;
};

// Row-major bundle of paths sharing one time grid.
class Ensemble {
public:
    Ensemble() = default;
    Ensemble(std::size_t n_paths, std::size_t n_steps, double dt);

    std::size_t n_paths() const { return n_paths_; }
    std::size_t n_steps() const { return n_steps_; }
    double dt() const { return dt_; }
    const std::vector<double>& times() const { return times_; }

    std::span<const double> log_prices(std::size_t path) const;
    std::span<double> log_prices(std::size_t path);
    std::span<const std::uint16_t> jump_counts(std::size_t path) const;
    std::span<std::uint16_t> jump_counts(std::size_t path);

    std::uint64_t base_seed = 0;
    double x0 = 0.0;

private:
    std::size_t n_paths_ = 0;
    std::size_t n_steps_ = 0;
    double dt_ = 0.0;
    std::vector<double> times_;
    std::vector<double> log_prices_;
    std::vector<std::uint16_t> jump_counts_;
};

// Builds the per-step constants shared by all paths of one grid.
kernels::StepPlan make_step_plan(const ProcessParams& params, double x0,
                                 double horizon, double dt);

// Exact-law samples of X_T given X_t = x_t. The Ornstein-Uhlenbeck part uses
// its closed-form conditional distribution and each jump decays by
// exp(-kappa*(T - tau)) from a uniformly drawn arrival time tau, so there is
// no time grid and no discretization bias. Path i draws from stream
// (base_seed, i), same determinism contract as simulate_ensemble.
std::vector<double> sample_terminal_log_prices(
    const ProcessParams& params, double x_t, double t, double T,
    std::size_t n_paths, std::uint64_t base_seed, int threads = 0,
    kernels::Backend backend = kernels::Backend::kAuto);

// One path from stream (seed, 0). Grid: n_steps = round(horizon/dt) steps of
// equal length horizon/n_steps. Bit-identical for identical arguments.
PricePath simulate_path(const ProcessParams& params, double x0, double horizon,
                        double dt, std::uint64_t seed,
                        kernels::Backend backend = kernels::Backend::kAuto);

// n_paths independent paths, path i drawn from stream (base_seed, i).
// Distributed over threads; results independent of thread count.
Ensemble simulate_ensemble(const ProcessParams& params, double x0, double horizon,
                           double dt, std::size_t n_paths, std::uint64_t base_seed,
                           int threads = 0,
                           kernels::Backend backend = kernels::Backend::kAuto);

}  // namespace sitmark
