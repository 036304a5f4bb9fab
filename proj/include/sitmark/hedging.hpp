// hedging.hpp — minimum-variance hedge ratios and rolled-hedge backtests.
//
// Closed-form pieces: h* = rho * sigma_s / sigma_f, hedged portfolio variance
// sigma_s^2 - 2 h rho sigma_s sigma_f + h^2 sigma_f^2, efficiency rho^2.
//
// The backtest prices front-month futures off each simulated spot path and
// multiplies them by exp(b_t), where b_t is an independent zero-mean OU basis
// process. The basis volatility is calibrated by bisection so the pooled
// per-period correlation between spot changes and rolled futures changes hits
// a target (0.85 by default). The buyer procures either a constant quantity
// per day or a single terminal purchase; the hedge is long futures sized to
// the remaining procurement, resized at each roll.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sitmark/clearing_margin.hpp"
#include "sitmark/price_process.hpp"

namespace sitmark {

struct HedgeInputs {
    double rho = 0.0;            // corr of spot and futures changes
    double sigma_s = 0.0;        // std of spot changes
    double sigma_f = 0.0;        // std of futures changes
    double spot_quantity = 1.0;  // exposure size Q_S

    void validate() const;
};

// rho * sigma_s / sigma_f. Throws std::domain_error when sigma_f == 0.
double optimal_hedge_ratio(const HedgeInputs& inputs);

// Variance of the hedged value change per unit Q_S^2.
double hedged_variance(double h, const HedgeInputs& inputs);

// Proportional variance reduction at h*, equal to rho^2.
double hedge_efficiency(double rho);

// Sample moments (n-1 denominators) from paired change series.
HedgeInputs estimate_from_series(std::span<const double> spot_changes,
                                 std::span<const double> futures_changes);

struct BasisSpec {
    double kappa_b = 3.0;         // basis mean-reversion speed, 1/year
    double sigma_b = -1.0;        // basis vol; negative = calibrate to target_rho
    double target_rho = 0.85;     // pooled per-period spot/futures correlation
    std::size_t calib_paths = 4000;

    bool operator==(const BasisSpec&) const = default;
};

enum class Procurement {
    kDaily,     // constant token quantity per day at spot
    kTerminal,  // single purchase at horizon end
};

struct BacktestConfig {
    int horizon_months = 12;
    int days_per_month = 21;           // trading-day grid per contract month
    int roll_days_before_expiry = 5;
    bool use_optimal_h = true;         // estimate h* in-sample per period
    double fixed_h = 1.0;              // used when use_optimal_h is false
    Procurement procurement = Procurement::kDaily;
    BasisSpec basis;
    int threads = 0;
    double ledger_lots = 1000.0;       // position scale for the demo ledger

    bool operator==(const BacktestConfig&) const = default;
};

struct HedgeReport {
    double h_star = 0.0;
    double unhedged_std = 0.0;              // cross-path std of procurement cost
    double hedged_std = 0.0;
    double variance_reduction = 0.0;        // 1 - var_h / var_u
    double std_reduction = 0.0;             // 1 - std_h / std_u
    double efficiency_theoretical = 0.0;    // target rho squared
    double rho_realized = 0.0;              // pooled per-period realized corr
    double basis_sigma = 0.0;
    std::size_t n_paths = 0;
};

// Basis volatility that makes the pooled per-period correlation hit
// config.basis.target_rho on a dedicated calibration ensemble.
double calibrate_basis_sigma(const ProcessParams& params, double x0,
                             const BacktestConfig& config, std::uint64_t base_seed);

// Backtest over a simulated ensemble. The ensemble grid must cover the
// horizon at daily resolution. When ledger_out is non-null, a mark-to-market
// settlement ledger for path 0's hedge account is appended.
HedgeReport backtest_hedge(const Ensemble& ensemble, const ProcessParams& params,
                           const BacktestConfig& config,
                           std::vector<LedgerRow>* ledger_out = nullptr,
                           const ContractSpec& contract = {});

}  // namespace sitmark
