// futures_pricing.hpp — futures on the spot index as E[P_T | F_t].
//
// Semi-analytic price:  F(t,T) = exp(decay * x_t + A(t,T)), with
//   A = kappa*int theta term (closed form)
//     + sigma^2/(4 kappa) * (1 - exp(-2 kappa (T-t)))
//     + lambda * int_t^T [exp(mu_j*c(s) + 0.5*sigma_j^2*c(s)^2) - 1] ds,
//   c(s) = exp(-kappa (T-s)), jump integral by adaptive quadrature to 1e-10.
// The Monte Carlo oracle samples the exact terminal law of the same process
// and is the arbiter for the decomposition.
//
// The pricing measure equals the simulation measure by default (zero market
// price of risk); risk_premium_beta shifts the trend under Q when set.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sitmark/clearing_margin.hpp"
#include "sitmark/price_process.hpp"

namespace sitmark {

struct FuturesQuote {
    double valuation_time = 0.0;  // t, years
    double maturity = 0.0;        // T, years
    double price = 0.0;           // currency per million SIT
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

// Semi-analytic futures price; throws std::domain_error for T < t.
double futures_price(double x_t, double t, double T, const ProcessParams& params,
                     double risk_premium_beta = 0.0);

// Sample mean and standard error of exp(X_T) over n_paths exact-law samples.
McEstimate mc_futures_oracle(double x_t, double t, double T, const ProcessParams& params,
                             std::size_t n_paths, std::uint64_t seed, int threads = 0,
                             kernels::Backend backend = kernels::Backend::kAuto);

// futures_price evaluated per maturity.
std::vector<FuturesQuote> futures_curve(double x_t, double t,
                                        std::span<const double> maturities,
                                        const ProcessParams& params,
                                        double risk_premium_beta = 0.0);

// Curve on the standard listing calendar as of `as_of`: maturities are the
// listed contracts' last trading days converted to year fractions from t
// (ACT/365.25).
std::vector<FuturesQuote> futures_curve_from_calendar(double x_t, double t,
                                                      const CivilDate& as_of,
                                                      const ProcessParams& params,
                                                      double risk_premium_beta = 0.0);

}  // namespace sitmark
