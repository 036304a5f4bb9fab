#include <doctest.h>

#include <bit>
#include <cstring>
#include <vector>

#include "sitmark/futures_pricing.hpp"
#include "sitmark/price_process.hpp"

using namespace sitmark;

namespace {

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        return false;
    }
    return std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::vector<double> flatten(const Ensemble& e) {
    std::vector<double> out;
    out.reserve(e.n_paths() * (e.n_steps() + 1));
    for (std::size_t p = 0; p < e.n_paths(); ++p) {
        const auto x = e.log_prices(p);
        out.insert(out.end(), x.begin(), x.end());
    }
    return out;
}

}  // namespace

TEST_CASE("scalar and AVX2 step kernels produce bit-identical ensembles") {
    if (!kernels::avx2_available()) {
        return;  // nothing to compare on this host
    }
    ProcessParams params;  // calibrated defaults, jumps on
    const Ensemble scalar = simulate_ensemble(params, params.theta0, 0.5, 1.0 / 252.0, 257,
                                              9001, 1, kernels::Backend::kScalar);
    const Ensemble avx2 = simulate_ensemble(params, params.theta0, 0.5, 1.0 / 252.0, 257,
                                            9001, 1, kernels::Backend::kAvx2);
    CHECK(bitwise_equal(flatten(scalar), flatten(avx2)));
    for (std::size_t p = 0; p < scalar.n_paths(); ++p) {
        const auto a = scalar.jump_counts(p);
        const auto b = avx2.jump_counts(p);
        REQUIRE(a.size() == b.size());
        CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(a[0])) == 0);
    }
}

TEST_CASE("scalar and AVX2 terminal kernels produce bit-identical samples") {
    if (!kernels::avx2_available()) {
        return;
    }
    ProcessParams params;
    const auto scalar = sample_terminal_log_prices(params, params.theta0, 0.0, 1.5, 1003,
                                                   55, 1, kernels::Backend::kScalar);
    const auto avx2 = sample_terminal_log_prices(params, params.theta0, 0.0, 1.5, 1003, 55,
                                                 1, kernels::Backend::kAvx2);
    CHECK(bitwise_equal(scalar, avx2));
}

TEST_CASE("kernel equivalence holds at parameter extremes") {
    if (!kernels::avx2_available()) {
        return;
    }
    // Heavy jump traffic, fast reversion, big vol; then the silent limit.
    ProcessParams stressed;
    stressed.kappa = 30.0;
    stressed.sigma = 3.0;
    stressed.lambda = 60.0;
    stressed.mu_j = -0.4;
    stressed.sigma_j = 1.2;
    ProcessParams silent;
    silent.sigma = 0.0;
    silent.lambda = 0.0;
    for (const ProcessParams& params : {stressed, silent}) {
        const Ensemble scalar = simulate_ensemble(params, 0.1, 0.25, 1.0 / 252.0, 101, 616,
                                                  1, kernels::Backend::kScalar);
        const Ensemble avx2 = simulate_ensemble(params, 0.1, 0.25, 1.0 / 252.0, 101, 616,
                                                1, kernels::Backend::kAvx2);
        CHECK(bitwise_equal(flatten(scalar), flatten(avx2)));

        const auto term_scalar = sample_terminal_log_prices(params, 0.1, 0.0, 2.0, 333, 77,
                                                            1, kernels::Backend::kScalar);
        const auto term_avx2 = sample_terminal_log_prices(params, 0.1, 0.0, 2.0, 333, 77,
                                                          1, kernels::Backend::kAvx2);
        CHECK(bitwise_equal(term_scalar, term_avx2));
    }
}

TEST_CASE("results are independent of thread count") {
    ProcessParams params;
    const Ensemble one = simulate_ensemble(params, params.theta0, 0.25, 1.0 / 252.0, 101,
                                           777, 1);
    const Ensemble many = simulate_ensemble(params, params.theta0, 0.25, 1.0 / 252.0, 101,
                                            777, 7);
    CHECK(bitwise_equal(flatten(one), flatten(many)));
}

TEST_CASE("same seed tuple reproduces ensembles bit for bit") {
    ProcessParams params;
    const Ensemble a = simulate_ensemble(params, 0.3, 0.25, 1.0 / 252.0, 64, 31337);
    const Ensemble b = simulate_ensemble(params, 0.3, 0.25, 1.0 / 252.0, 64, 31337);
    CHECK(bitwise_equal(flatten(a), flatten(b)));
    const Ensemble c = simulate_ensemble(params, 0.3, 0.25, 1.0 / 252.0, 64, 31338);
    CHECK_FALSE(bitwise_equal(flatten(a), flatten(c)));
}

TEST_CASE("single-path ensemble equals simulate_path with the derived seed") {
    ProcessParams params;
    const Ensemble ensemble = simulate_ensemble(params, params.theta0, 0.5, 1.0 / 252.0, 1,
                                                4242);
    const PricePath path = simulate_path(params, params.theta0, 0.5, 1.0 / 252.0, 4242);
    const auto row = ensemble.log_prices(0);
    REQUIRE(row.size() == path.log_prices.size());
    CHECK(std::memcmp(row.data(), path.log_prices.data(), row.size() * sizeof(double)) == 0);
}
