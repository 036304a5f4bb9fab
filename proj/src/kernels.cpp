// kernels.cpp — runtime backend selection and shared plan helpers.

#include "sitmark/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace sitmark::kernels {

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Backend resolve(Backend backend) {
    if (backend == Backend::kAuto) {
        return avx2_available() ? Backend::kAvx2 : Backend::kScalar;
    }
    return backend;
}

const char* backend_name(Backend backend) {
    switch (backend) {
        case Backend::kAuto:
            return "auto";
        case Backend::kScalar:
            return "scalar";
        case Backend::kAvx2:
            return "avx2";
    }
    return "?";
}

std::vector<double> poisson_cdf_table(double mean) {
    if (!(mean >= 0.0)) {
        throw std::domain_error("poisson_cdf_table: mean must be >= 0");
    }
    std::vector<double> cdf;
    double pmf = std::exp(-mean);
    double acc = pmf;
    cdf.push_back(acc);
    std::size_t k = 1;
    while (1.0 - acc > 1e-18 && k < 512) {
        pmf *= mean / static_cast<double>(k);
        acc += pmf;
        cdf.push_back(acc);
        ++k;
    }
    return cdf;
}

void simulate_paths(const StepPlan& plan, std::uint64_t base_seed,
                    std::uint64_t first_path, std::size_t n_paths,
                    double* log_prices, std::uint16_t* jump_counts, Backend backend) {
    switch (resolve(backend)) {
        case Backend::kAvx2:
#if defined(__x86_64__) || defined(_M_X64)
            if (avx2_available()) {
                detail::simulate_paths_avx2(plan, base_seed, first_path, n_paths,
                                            log_prices, jump_counts);
                return;
            }
#endif
            throw std::runtime_error("simulate_paths: AVX2 backend not available on this CPU");
        default:
            detail::simulate_paths_scalar(plan, base_seed, first_path, n_paths,
                                          log_prices, jump_counts);
    }
}

void sample_terminal(const TerminalPlan& plan, std::uint64_t base_seed,
                     std::uint64_t first_path, std::size_t n_paths,
                     double* log_terminal, Backend backend) {
    switch (resolve(backend)) {
        case Backend::kAvx2:
#if defined(__x86_64__) || defined(_M_X64)
            if (avx2_available()) {
                detail::sample_terminal_avx2(plan, base_seed, first_path, n_paths, log_terminal);
                return;
            }
#endif
            throw std::runtime_error("sample_terminal: AVX2 backend not available on this CPU");
        default:
            detail::sample_terminal_scalar(plan, base_seed, first_path, n_paths, log_terminal);
    }
}

}  // namespace sitmark::kernels
