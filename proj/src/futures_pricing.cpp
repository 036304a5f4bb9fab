#include "sitmark/futures_pricing.hpp"

#include <cmath>
#include <stdexcept>

namespace sitmark {

namespace {

// Adaptive Simpson to an absolute tolerance; integrands here are smooth.
template <typename F>
double simpson_recurse(const F& f, double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
    if (!(b > a)) {
        return 0.0;
    }
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_recurse(f, a, b, fa, fm, fb, whole, tol, 48);
}

constexpr double kJumpIntegralTol = 1e-10;

}  // namespace

double futures_price(double x_t, double t, double T, const ProcessParams& params,
                     double risk_premium_beta) {
    params.validate();
    if (!(T >= t)) {
        throw std::domain_error("futures_price: maturity T must be >= valuation time t");
    }
    ProcessParams q = params;
    q.beta += risk_premium_beta;

    const double span = T - t;
    const double decay = std::exp(-q.kappa * span);
    double a_term = theta_integral(q, t, T);
    a_term += q.sigma * q.sigma / (4.0 * q.kappa) * -std::expm1(-2.0 * q.kappa * span);
    if (q.lambda > 0.0 && span > 0.0) {
        const double kappa = q.kappa;
        const double mu_j = q.mu_j;
        const double half_var_j = 0.5 * q.sigma_j * q.sigma_j;
        const auto integrand = [&](double s) {
            const double c = std::exp(-kappa * (T - s));
            return std::expm1(mu_j * c + half_var_j * c * c);
        };
        a_term += q.lambda * adaptive_simpson(integrand, t, T, kJumpIntegralTol);
    }
    return std::exp(decay * x_t + a_term);
}

McEstimate mc_futures_oracle(double x_t, double t, double T, const ProcessParams& params,
                             std::size_t n_paths, std::uint64_t seed, int threads,
                             kernels::Backend backend) {
    if (n_paths < 100) {
        throw std::invalid_argument("mc_futures_oracle: n_paths must be >= 100");
    }
    if (T == t) {
        params.validate();
        return {std::exp(x_t), 0.0};  // degenerate interval, nothing to sample
    }
    const std::vector<double> log_terminal =
        sample_terminal_log_prices(params, x_t, t, T, n_paths, seed, threads, backend);

    double sum = 0.0;
    for (double x : log_terminal) {
        sum += std::exp(x);
    }
    const double mean = sum / static_cast<double>(n_paths);
    double ss = 0.0;
    for (double x : log_terminal) {
        const double d = std::exp(x) - mean;
        ss += d * d;
    }
    const double sample_var = ss / static_cast<double>(n_paths - 1);
    return {mean, std::sqrt(sample_var / static_cast<double>(n_paths))};
}

std::vector<FuturesQuote> futures_curve(double x_t, double t,
                                        std::span<const double> maturities,
                                        const ProcessParams& params,
                                        double risk_premium_beta) {
    if (maturities.empty()) {
        throw std::invalid_argument("futures_curve: no maturities given");
    }
    std::vector<FuturesQuote> curve;
    curve.reserve(maturities.size());
    for (double maturity : maturities) {
        curve.push_back({t, maturity, futures_price(x_t, t, maturity, params, risk_premium_beta)});
    }
    return curve;
}

std::vector<FuturesQuote> futures_curve_from_calendar(double x_t, double t,
                                                      const CivilDate& as_of,
                                                      const ProcessParams& params,
                                                      double risk_premium_beta) {
    const auto listings = listing_calendar(as_of);
    const std::int64_t origin = days_from_civil(as_of);
    std::vector<double> maturities;
    maturities.reserve(listings.size());
    for (const auto& listing : listings) {
        const auto days = static_cast<double>(days_from_civil(listing.last_trading_day) - origin);
        maturities.push_back(t + days / 365.25);
    }
    return futures_curve(x_t, t, maturities, params, risk_premium_beta);
}

}  // namespace sitmark
