// kernels.hpp — simulation inner loops, scalar reference + SIMD variants.
//
// Two kernels do the heavy arithmetic: the per-step path recurrence and the
// exact terminal-law sampler. Each exists as a scalar reference and an AVX2
// variant selected at runtime; both consume the same counter-based random
// streams and execute the same IEEE operation sequence per path, so their
// outputs are bit-identical (equivalence-tested in the suite). Reductions
// are deliberately kept out of the kernels: they fill per-path arrays and
// shared scalar code aggregates, keeping results independent of backend,
// thread count, and path-block boundaries.
//
// Per-path draw layout (counter-based, stride fixed by the plan):
//   step kernel:      counter = step*stride + d, d=0 diffusion normal,
//                     d=1 Poisson uniform, d=2+j j-th jump normal
//   terminal kernel:  d=0 diffusion normal, d=1 Poisson uniform,
//                     d=2+2i jump-time uniform, d=3+2i jump-size normal

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace sitmark::kernels {

enum class Backend {
    kAuto,    // pick the best available at runtime
    kScalar,
    kAvx2,
};

bool avx2_available();
Backend resolve(Backend backend);
const char* backend_name(Backend backend);

// Precomputed constants for the uniform-grid path recurrence
//   x_{k+1} = decay*x_k + drift[k] + noise_scale*z + sum of jumps.
struct StepPlan {
    std::size_t n_steps = 0;
    double x0 = 0.0;
    double decay = 0.0;
    double noise_scale = 0.0;
    double jump_mean = 0.0;
    double jump_std = 0.0;
    std::vector<double> drift;        // n_steps entries
    std::vector<double> poisson_cdf;  // P(N <= k) for Poisson(lambda*dt)
    std::uint64_t draw_stride = 0;    // 2 + poisson_cdf.size()
};

// Precomputed constants for sampling X_T given X_t in one shot:
//   X_T = decay*x_t + mean_shift + noise_scale*z
//         + sum_i (jump_mean + jump_std*z_i) * exp(-kappa_dt*(1 - u_i)).
struct TerminalPlan {
    double x_t = 0.0;
    double decay = 0.0;
    double mean_shift = 0.0;
    double noise_scale = 0.0;
    double jump_mean = 0.0;
    double jump_std = 0.0;
    double kappa_dt = 0.0;            // kappa * (T - t)
    std::vector<double> poisson_cdf;  // P(N <= k) for Poisson(lambda*(T-t))
    std::uint64_t draw_stride = 0;    // 2 + 2*poisson_cdf.size()
};

// CDF table for Poisson(mean), extended until the tail mass is below 1e-18
// (capped at 512 entries). Sampling maps a uniform u to #{k : u >= cdf[k]}.
std::vector<double> poisson_cdf_table(double mean);

// Simulates paths [first_path, first_path + n_paths) of the stream family
// keyed on base_seed. log_prices is row-major [n_paths][n_steps+1] and
// receives x0 in column 0; jump_counts is [n_paths][n_steps] and may be null.
void simulate_paths(const StepPlan& plan, std::uint64_t base_seed,
                    std::uint64_t first_path, std::size_t n_paths,
                    double* log_prices, std::uint16_t* jump_counts,
                    Backend backend = Backend::kAuto);

// Draws terminal log prices for paths [first_path, first_path + n_paths).
void sample_terminal(const TerminalPlan& plan, std::uint64_t base_seed,
                     std::uint64_t first_path, std::size_t n_paths,
                     double* log_terminal, Backend backend = Backend::kAuto);

namespace detail {
void simulate_paths_scalar(const StepPlan&, std::uint64_t, std::uint64_t,
                           std::size_t, double*, std::uint16_t*);
void sample_terminal_scalar(const TerminalPlan&, std::uint64_t, std::uint64_t,
                            std::size_t, double*);
#if defined(__x86_64__) || defined(_M_X64)
void simulate_paths_avx2(const StepPlan&, std::uint64_t, std::uint64_t,
                         std::size_t, double*, std::uint16_t*);
void sample_terminal_avx2(const TerminalPlan&, std::uint64_t, std::uint64_t,
                          std::size_t, double*);
#endif
}  // namespace detail

}  // namespace sitmark::kernels
