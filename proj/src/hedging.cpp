#include "sitmark/hedging.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sitmark/fastmath.hpp"
#include "sitmark/futures_pricing.hpp"
#include "sitmark/rng.hpp"
#include "sitmark/stats.hpp"

namespace sitmark {

namespace {

// Stream-family salt separating basis noise from the spot ensemble streams.
constexpr std::uint64_t kBasisSeedSalt = 0x6261736973ull;   // "basis"
constexpr std::uint64_t kCalibSeedSalt = 0x63616c6962ull;   // "calib"

void require(bool ok, const char* msg) {
    if (!ok) {
        throw std::domain_error(msg);
    }
}

}  // namespace

void HedgeInputs::validate() const {
    require(rho >= -1.0 && rho <= 1.0, "HedgeInputs: rho must be in [-1, 1]");
    require(sigma_s >= 0.0, "HedgeInputs: sigma_s must be >= 0");
    require(sigma_f >= 0.0, "HedgeInputs: sigma_f must be >= 0");
}

double optimal_hedge_ratio(const HedgeInputs& inputs) {
    inputs.validate();
    if (inputs.sigma_f == 0.0) {
        throw std::domain_error("optimal_hedge_ratio: sigma_f is zero, nothing to hedge with");
    }
    return inputs.rho * inputs.sigma_s / inputs.sigma_f;
}

double hedged_variance(double h, const HedgeInputs& inputs) {
    inputs.validate();
    return inputs.sigma_s * inputs.sigma_s -
           2.0 * h * inputs.rho * inputs.sigma_s * inputs.sigma_f +
           h * h * inputs.sigma_f * inputs.sigma_f;
}

double hedge_efficiency(double rho) {
    require(rho >= -1.0 && rho <= 1.0, "hedge_efficiency: rho must be in [-1, 1]");
    return rho * rho;
}

HedgeInputs estimate_from_series(std::span<const double> spot_changes,
                                 std::span<const double> futures_changes) {
    if (spot_changes.size() != futures_changes.size()) {
        throw std::invalid_argument("estimate_from_series: length mismatch");
    }
    if (spot_changes.size() < 2) {
        throw std::invalid_argument("estimate_from_series: need at least 2 observations");
    }
    const double var_f = stats::variance(futures_changes);
    if (var_f == 0.0) {
        throw std::invalid_argument("estimate_from_series: futures series has zero variance");
    }
    HedgeInputs inputs;
    inputs.sigma_s = stats::std_dev(spot_changes);
    inputs.sigma_f = std::sqrt(var_f);
    inputs.rho = inputs.sigma_s == 0.0 ? 0.0 : stats::correlation(spot_changes, futures_changes);
    return inputs;
}

// ---- backtest ----------------------------------------------------------------

namespace {

// Path-independent description of one backtest grid: which contract is held
// each day, where positions are resized, and the pricing constants for the
// held contract at both ends of each day.
struct BacktestFrame {
    std::size_t n_days = 0;
    std::vector<int> contract;        // per day d: contract held over (d, d+1)
    std::vector<double> decay_begin;  // exp(-kappa (T_m - t_d))
    std::vector<double> a_begin;      // A(t_d, T_m)
    std::vector<double> decay_end;    // exp(-kappa (T_m - t_{d+1}))
    std::vector<double> a_end;
    std::vector<std::size_t> rebalance;  // day indices where the position resets
    std::vector<double> position;     // unit-h futures position held over (d, d+1)
};

// A(t, T) = log F - decay * x, reusing the semi-analytic pricer at x = 0.
double log_price_shift(double t, double T, const ProcessParams& params) {
    return std::log(futures_price(0.0, t, T, params));
}

BacktestFrame build_frame(const Ensemble& ensemble, const ProcessParams& params,
                          const BacktestConfig& config) {
    require(config.horizon_months >= 1, "backtest_hedge: horizon_months must be >= 1");
    require(config.days_per_month >= 2, "backtest_hedge: days_per_month must be >= 2");
    require(config.roll_days_before_expiry >= 0 &&
                config.roll_days_before_expiry < config.days_per_month,
            "backtest_hedge: roll_days_before_expiry must be in [0, days_per_month)");

    BacktestFrame frame;
    frame.n_days = static_cast<std::size_t>(config.horizon_months) *
                   static_cast<std::size_t>(config.days_per_month);
    if (ensemble.n_steps() < frame.n_days) {
        throw std::invalid_argument(
            "backtest_hedge: ensemble horizon shorter than backtest horizon");
    }
    const double dt = ensemble.dt();

    frame.contract.resize(frame.n_days);
    frame.decay_begin.resize(frame.n_days);
    frame.a_begin.resize(frame.n_days);
    frame.decay_end.resize(frame.n_days);
    frame.a_end.resize(frame.n_days);
    frame.rebalance.push_back(0);

    int held = 0;
    for (std::size_t d = 0; d < frame.n_days; ++d) {
        // Front month: earliest contract whose roll date is still ahead.
        int m = held > 0 ? held : 1;
        while (static_cast<std::size_t>(m) * config.days_per_month -
                   config.roll_days_before_expiry <=
               d) {
            ++m;
        }
        if (held > 0 && m != held) {
            frame.rebalance.push_back(d);  // roll: close old month, open new
        }
        held = m;
        frame.contract[d] = m;

        const double t0 = static_cast<double>(d) * dt;
        const double t1 = static_cast<double>(d + 1) * dt;
        const double maturity =
            static_cast<double>(m) * static_cast<double>(config.days_per_month) * dt;
        frame.decay_begin[d] = std::exp(-params.kappa * (maturity - t0));
        frame.a_begin[d] = log_price_shift(t0, maturity, params);
        frame.decay_end[d] = std::exp(-params.kappa * (maturity - t1));
        frame.a_end[d] = log_price_shift(t1, maturity, params);
    }

    // Unit-h position: the mean-reversion-tailed delta of the remaining
    // procurement against the held contract, frozen between rebalances. A
    // shock at t moves the day-j purchase by exp(-kappa (t_j - t)) and the
    // front future by exp(-kappa (T_m - t)); an untailed stack over-hedges
    // transient shocks badly when reversion is fast.
    frame.position.resize(frame.n_days);
    const double inv_days = 1.0 / static_cast<double>(frame.n_days);
    std::size_t next_rebalance = 1;
    double held_position = 0.0;
    for (std::size_t d = 0; d < frame.n_days; ++d) {
        const bool resize =
            d == 0 || (next_rebalance < frame.rebalance.size() &&
                       d == frame.rebalance[next_rebalance]);
        if (resize) {
            if (d != 0) {
                ++next_rebalance;
            }
            const double t = static_cast<double>(d) * dt;
            const double maturity = static_cast<double>(frame.contract[d]) *
                                    static_cast<double>(config.days_per_month) * dt;
            if (config.procurement == Procurement::kDaily) {
                double tail = 0.0;
                for (std::size_t j = d + 1; j <= frame.n_days; ++j) {
                    tail += std::exp(-params.kappa * (static_cast<double>(j) * dt - t));
                }
                held_position = inv_days * tail / std::exp(-params.kappa * (maturity - t));
            } else {
                const double t_end = static_cast<double>(frame.n_days) * dt;
                held_position = std::exp(-params.kappa * (t_end - t)) /
                                std::exp(-params.kappa * (maturity - t));
            }
        }
        frame.position[d] = held_position;
    }
    return frame;
}

// Exact-step OU basis path, stationary start, independent stream per path.
void simulate_basis(std::uint64_t base_seed, std::size_t path, double kappa_b,
                    double sigma_b, double dt, std::span<double> out) {
    const std::uint64_t key = rng::stream_key(base_seed ^ kBasisSeedSalt, path);
    if (sigma_b <= 0.0) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    const double stationary_std = sigma_b / std::sqrt(2.0 * kappa_b);
    const double decay = std::exp(-kappa_b * dt);
    const double step_std =
        sigma_b * std::sqrt(-std::expm1(-2.0 * kappa_b * dt) / (2.0 * kappa_b));
    double b = stationary_std * fastmath::norminv(rng::uniform01(rng::at(key, 0)));
    out[0] = b;
    for (std::size_t d = 1; d < out.size(); ++d) {
        b = decay * b + step_std * fastmath::norminv(rng::uniform01(rng::at(key, d)));
        out[d] = b;
    }
}

struct PathOutcome {
    double cost_unhedged = 0.0;
    double futures_pnl_per_h = 0.0;  // hedge P&L for h = 1
};

// Per-period pooled samples for h estimation / calibration.
struct PeriodSamples {
    std::vector<double> spot_changes;
    std::vector<double> futures_changes;
};

// Walks every path once: accumulates procurement cost, unit-hedge P&L with
// the frame's tailed positions, and per-period changes.
void run_paths(const Ensemble& ensemble, const BacktestFrame& frame,
               const BacktestConfig& config, double sigma_b,
               std::vector<PathOutcome>& outcomes, PeriodSamples* samples) {
    const std::size_t n_paths = ensemble.n_paths();
    const std::size_t n_days = frame.n_days;
    const double dt = ensemble.dt();
    const double inv_days = 1.0 / static_cast<double>(n_days);

    outcomes.assign(n_paths, {});
    std::vector<double> basis(n_days + 1);
    for (std::size_t p = 0; p < n_paths; ++p) {
        simulate_basis(ensemble.base_seed, p, config.basis.kappa_b, sigma_b, dt,
                       std::span<double>(basis));
        const std::span<const double> x = ensemble.log_prices(p);

        double cost = 0.0;
        double pnl_per_h = 0.0;
        std::size_t rebalance_idx = 0;
        double period_spot_start = std::exp(x[0]);
        double period_pnl = 0.0;

        for (std::size_t d = 0; d < n_days; ++d) {
            if (rebalance_idx + 1 < frame.rebalance.size() &&
                d == frame.rebalance[rebalance_idx + 1]) {
                ++rebalance_idx;
                if (samples) {
                    samples->spot_changes.push_back(std::exp(x[d]) - period_spot_start);
                    samples->futures_changes.push_back(period_pnl);
                }
                period_spot_start = std::exp(x[d]);
                period_pnl = 0.0;
            }

            const double f_begin =
                std::exp(frame.decay_begin[d] * x[d] + frame.a_begin[d] + basis[d]);
            const double f_end =
                std::exp(frame.decay_end[d] * x[d + 1] + frame.a_end[d] + basis[d + 1]);
            const double step_pnl = f_end - f_begin;
            pnl_per_h += frame.position[d] * step_pnl;
            period_pnl += step_pnl;

            if (config.procurement == Procurement::kDaily) {
                cost += inv_days * std::exp(x[d + 1]);
            }
        }
        if (config.procurement == Procurement::kTerminal) {
            cost = std::exp(x[n_days]);
        }
        if (samples) {
            samples->spot_changes.push_back(std::exp(x[n_days]) - period_spot_start);
            samples->futures_changes.push_back(period_pnl);
        }
        outcomes[p].cost_unhedged = cost;
        outcomes[p].futures_pnl_per_h = pnl_per_h;
    }
}

double pooled_period_correlation(const Ensemble& ensemble, const BacktestFrame& frame,
                                 const BacktestConfig& config, double sigma_b) {
    std::vector<PathOutcome> outcomes;
    PeriodSamples samples;
    run_paths(ensemble, frame, config, sigma_b, outcomes, &samples);
    return stats::correlation(samples.spot_changes, samples.futures_changes);
}

CivilDate next_trading_day(CivilDate date) {
    std::int64_t days = days_from_civil(date);
    do {
        ++days;
        date = civil_from_days(days);
    } while (day_of_week(date) == 0 || day_of_week(date) == 6);
    return date;
}

// Replays path 0's hedge through a margin account: daily mark-to-market at
// the tick-rounded observed futures settle, re-based at rolls, margin topped
// back up to initial after a call.
void append_hedge_ledger(std::vector<LedgerRow>& ledger, const Ensemble& ensemble,
                         const BacktestFrame& frame, const BacktestConfig& config,
                         const ProcessParams& params, const ContractSpec& contract,
                         double sigma_b, double h) {
    const std::span<const double> x = ensemble.log_prices(0);
    std::vector<double> basis(frame.n_days + 1);
    simulate_basis(ensemble.base_seed, 0, config.basis.kappa_b, sigma_b, ensemble.dt(),
                   std::span<double>(basis));

    const auto observed_begin = [&](std::size_t d) {
        return round_to_tick(
            std::exp(frame.decay_begin[d] * x[d] + frame.a_begin[d] + basis[d]), contract);
    };
    const auto observed_end = [&](std::size_t d) {
        return round_to_tick(
            std::exp(frame.decay_end[d] * x[d + 1] + frame.a_end[d] + basis[d + 1]), contract);
    };

    std::vector<double> settles;
    settles.reserve(frame.n_days + 1);

    const auto sized_lots = [&](std::size_t day) {
        return std::round(h * frame.position[day] * config.ledger_lots);
    };

    const double first_settle = observed_begin(0);
    settles.push_back(first_settle);
    double lots = sized_lots(0);
    double margin = initial_margin(params.sigma, 21.0 / 252.0,
                                   contract_notional(std::max(lots, 1.0), first_settle, contract),
                                   contract);
    MarginAccount account =
        make_margin_account("hedger", lots, margin, margin, first_settle, contract);

    CivilDate date{2026, 1, 2};
    std::size_t rebalance_idx = 0;
    for (std::size_t d = 0; d < frame.n_days; ++d) {
        if (d > 0 && rebalance_idx + 1 < frame.rebalance.size() &&
            d == frame.rebalance[rebalance_idx + 1]) {
            ++rebalance_idx;
            // Old month was closed at yesterday's settle; open the new month
            // at today's price with the position resized to the remaining
            // procurement. Margin is re-set from 20-day realized volatility
            // once enough settle history exists.
            lots = sized_lots(d);
            const double open_price = observed_begin(d);
            const double sigma20 = settles.size() >= 21
                                       ? realized_vol_20d(settles)
                                       : params.sigma;
            margin = initial_margin(sigma20, 21.0 / 252.0,
                                    contract_notional(std::max(lots, 1.0), open_price, contract),
                                    contract);
            account = make_margin_account("hedger", lots, account.balance, margin,
                                          open_price, contract);
        }
        const double settle = observed_end(d);
        MarkToMarketResult marked = mark_to_market(account, settle, contract);
        account = marked.account;
        settles.push_back(settle);
        ledger.push_back({to_iso_date(date), account.account_id, account.position, settle,
                          marked.cashflow, account.balance, marked.margin_call});
        if (marked.margin_call) {
            account.balance = account.initial_margin;  // meet the call
        }
        date = next_trading_day(date);
    }
}

}  // namespace

double calibrate_basis_sigma(const ProcessParams& params, double x0,
                             const BacktestConfig& config, std::uint64_t base_seed) {
    require(config.basis.target_rho > 0.0 && config.basis.target_rho < 1.0,
            "calibrate_basis_sigma: target_rho must be in (0, 1)");
    require(config.basis.kappa_b > 0.0, "calibrate_basis_sigma: kappa_b must be > 0");

    const double horizon = static_cast<double>(config.horizon_months) / 12.0;
    const double dt =
        horizon / (static_cast<double>(config.horizon_months) * config.days_per_month);
    const Ensemble calib = simulate_ensemble(params, x0, horizon, dt,
                                             config.basis.calib_paths,
                                             base_seed ^ kCalibSeedSalt, config.threads);
    const BacktestFrame frame = build_frame(calib, params, config);

    const double rho_at_zero = pooled_period_correlation(calib, frame, config, 0.0);
    if (rho_at_zero <= config.basis.target_rho) {
        throw std::domain_error(
            "calibrate_basis_sigma: target correlation unattainable, model futures "
            "already correlate below the target");
    }

    // Correlation decreases monotonically in the basis volatility: bracket,
    // then bisect.
    double lo = 0.0;
    double hi = 0.1;
    while (pooled_period_correlation(calib, frame, config, hi) > config.basis.target_rho) {
        hi *= 2.0;
        if (hi > 64.0) {
            throw std::domain_error("calibrate_basis_sigma: failed to bracket target rho");
        }
    }
    for (int iter = 0; iter < 60; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double rho = pooled_period_correlation(calib, frame, config, mid);
        if (rho > config.basis.target_rho) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-6 * (1.0 + hi)) {
            break;
        }
    }
    return 0.5 * (lo + hi);
}

HedgeReport backtest_hedge(const Ensemble& ensemble, const ProcessParams& params,
                           const BacktestConfig& config,
                           std::vector<LedgerRow>* ledger_out,
                           const ContractSpec& contract) {
    if (ensemble.n_paths() < 2) {
        throw std::invalid_argument("backtest_hedge: need at least 2 paths");
    }
    const BacktestFrame frame = build_frame(ensemble, params, config);

    double sigma_b = config.basis.sigma_b;
    if (sigma_b < 0.0) {
        sigma_b = calibrate_basis_sigma(params, ensemble.x0, config, ensemble.base_seed);
    }

    std::vector<PathOutcome> outcomes;
    PeriodSamples samples;
    run_paths(ensemble, frame, config, sigma_b, outcomes, &samples);

    double h = config.fixed_h;
    HedgeInputs estimated;
    if (config.use_optimal_h) {
        estimated = estimate_from_series(samples.spot_changes, samples.futures_changes);
        h = optimal_hedge_ratio(estimated);
    }

    const std::size_t n = outcomes.size();
    std::vector<double> cost_u(n);
    std::vector<double> cost_h(n);
    for (std::size_t p = 0; p < n; ++p) {
        cost_u[p] = outcomes[p].cost_unhedged;
        cost_h[p] = outcomes[p].cost_unhedged - h * outcomes[p].futures_pnl_per_h;
    }

    HedgeReport report;
    report.h_star = h;
    report.unhedged_std = stats::std_dev(cost_u);
    report.hedged_std = stats::std_dev(cost_h);
    const double var_u = report.unhedged_std * report.unhedged_std;
    const double var_h = report.hedged_std * report.hedged_std;
    report.variance_reduction = var_u > 0.0 ? 1.0 - var_h / var_u : 0.0;
    report.std_reduction = report.unhedged_std > 0.0
                               ? 1.0 - report.hedged_std / report.unhedged_std
                               : 0.0;
    report.efficiency_theoretical =
        config.basis.target_rho * config.basis.target_rho;
    report.rho_realized = stats::correlation(samples.spot_changes, samples.futures_changes);
    report.basis_sigma = sigma_b;
    report.n_paths = n;

    if (ledger_out) {
        append_hedge_ledger(*ledger_out, ensemble, frame, config, params, contract, sigma_b, h);
    }
    return report;
}

}  // namespace sitmark
