// kernels_scalar.cpp — reference implementations of the simulation kernels.
//
// This file defines the canonical IEEE operation sequence per path. The AVX2
// variants in kernels_avx2.cpp mirror it exactly (including additions of
// zero-valued jump sums), which is what makes backend results bit-identical.

#include "sitmark/kernels.hpp"

#include "sitmark/fastmath.hpp"
#include "sitmark/rng.hpp"

namespace sitmark::kernels::detail {

void simulate_paths_scalar(const StepPlan& plan, std::uint64_t base_seed,
                           std::uint64_t first_path, std::size_t n_paths,
                           double* log_prices, std::uint16_t* jump_counts) {
    const std::size_t n_steps = plan.n_steps;
    const std::size_t row = n_steps + 1;
    const std::size_t table = plan.poisson_cdf.size();
    const double* cdf = plan.poisson_cdf.data();

    for (std::size_t p = 0; p < n_paths; ++p) {
        const std::uint64_t key = rng::stream_key(base_seed, first_path + p);
        double* out = log_prices + p * row;
        std::uint16_t* jc = jump_counts ? jump_counts + p * n_steps : nullptr;

        double x = plan.x0;
        out[0] = x;
        for (std::size_t k = 0; k < n_steps; ++k) {
            const std::uint64_t c0 = static_cast<std::uint64_t>(k) * plan.draw_stride;
            const double z = fastmath::norminv(rng::uniform01(rng::at(key, c0)));
            const double un = rng::uniform01(rng::at(key, c0 + 1));

            std::uint32_t count = 0;
            for (std::size_t j = 0; j < table; ++j) {
                count += (un >= cdf[j]) ? 1u : 0u;
            }
            double jump_sum = 0.0;
            for (std::uint32_t j = 0; j < count; ++j) {
                const double zj = fastmath::norminv(rng::uniform01(rng::at(key, c0 + 2 + j)));
                jump_sum += plan.jump_mean + plan.jump_std * zj;
            }

            x = plan.decay * x + plan.drift[k];
            x = x + plan.noise_scale * z;
            x = x + jump_sum;
            out[k + 1] = x;
            if (jc) {
                jc[k] = static_cast<std::uint16_t>(count);
            }
        }
    }
}

void sample_terminal_scalar(const TerminalPlan& plan, std::uint64_t base_seed,
                            std::uint64_t first_path, std::size_t n_paths,
                            double* log_terminal) {
    const std::size_t table = plan.poisson_cdf.size();
    const double* cdf = plan.poisson_cdf.data();

    for (std::size_t p = 0; p < n_paths; ++p) {
        const std::uint64_t key = rng::stream_key(base_seed, first_path + p);
        const double z = fastmath::norminv(rng::uniform01(rng::at(key, 0)));
        const double un = rng::uniform01(rng::at(key, 1));

        std::uint32_t count = 0;
        for (std::size_t j = 0; j < table; ++j) {
            count += (un >= cdf[j]) ? 1u : 0u;
        }
        double jump_sum = 0.0;
        for (std::uint32_t j = 0; j < count; ++j) {
            const double ut = rng::uniform01(rng::at(key, 2 + 2 * static_cast<std::uint64_t>(j)));
            const double zj =
                fastmath::norminv(rng::uniform01(rng::at(key, 3 + 2 * static_cast<std::uint64_t>(j))));
            const double decay_j = fastmath::det_exp(-plan.kappa_dt * (1.0 - ut));
            jump_sum += (plan.jump_mean + plan.jump_std * zj) * decay_j;
        }

        double x = plan.decay * plan.x_t + plan.mean_shift;
        x = x + plan.noise_scale * z;
        x = x + jump_sum;
        log_terminal[p] = x;
    }
}

}  // namespace sitmark::kernels::detail
