// sitmark.cpp — command-line surface for the token futures toolkit.
//
// Subcommands: run, simulate, price, index, margin, hedge, sensitivity, cost.
// Global flags --config/--seed/--out apply before subcommand flags; the
// SITMARK_CONFIG environment variable supplies a default config path.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sitmark/config.hpp"
#include "sitmark/csv.hpp"
#include "sitmark/futures_pricing.hpp"
#include "sitmark/hedging.hpp"
#include "sitmark/index_tpi.hpp"
#include "sitmark/mc_engine.hpp"
#include "sitmark/pipeline.hpp"
#include "sitmark/supply_cost.hpp"

namespace {

using namespace sitmark;

struct GlobalOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::string backend = "auto";
    int threads = 0;
};

kernels::Backend parse_backend(const std::string& name) {
    if (name == "auto") {
        return kernels::Backend::kAuto;
    }
    if (name == "scalar") {
        return kernels::Backend::kScalar;
    }
    if (name == "avx2") {
        return kernels::Backend::kAvx2;
    }
    throw CLI::ValidationError("--backend must be auto, scalar, or avx2");
}

RunConfig effective_config(const GlobalOpts& opts) {
    RunConfig config;
    std::string path = opts.config_path;
    if (path.empty()) {
        if (const char* env = std::getenv("SITMARK_CONFIG")) {
            path = env;
        }
    }
    if (!path.empty()) {
        config = load_config(path);
    }
    if (opts.seed) {
        config.engine.base_seed = *opts.seed;
    }
    if (!opts.out_dir.empty()) {
        config.output_dir = opts.out_dir;
    }
    if (opts.threads > 0) {
        config.engine.threads = opts.threads;
    }
    if (opts.backend != "auto") {
        config.engine.backend = parse_backend(opts.backend);
    }
    return config;
}

std::string ensemble_csv(const Ensemble& ensemble) {
    std::string out = "path_id,time,price,cumulative_jumps\n";
    for (std::size_t p = 0; p < ensemble.n_paths(); ++p) {
        const auto x = ensemble.log_prices(p);
        const auto jumps = ensemble.jump_counts(p);
        long cumulative = 0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            if (k > 0) {
                cumulative += jumps[k - 1];
            }
            out += std::to_string(p) + ',' + csv::format_double(ensemble.times()[k]) + ',' +
                   csv::format_double(std::exp(x[k])) + ',' + std::to_string(cumulative) +
                   '\n';
        }
    }
    return out;
}

CivilDate parse_date(const std::string& iso) {
    int y = 0, m = 0, d = 0;
    if (std::sscanf(iso.c_str(), "%d-%d-%d", &y, &m, &d) != 3 || m < 1 || m > 12 || d < 1 ||
        d > 31) {
        throw CLI::ValidationError("dates must be ISO-8601 (YYYY-MM-DD)");
    }
    return {y, m, d};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sitmark — token futures simulation, pricing, and risk toolkit"};
    app.require_subcommand(0, 1);

    GlobalOpts opts;
    app.add_option("--config", opts.config_path, "config file (INI-style key=value)");
    app.add_option("--seed", opts.seed, "override engine.base_seed");
    app.add_option("--out", opts.out_dir, "override output directory");
    app.add_option("--threads", opts.threads, "worker threads (0 = hardware)");
    app.add_option("--backend", opts.backend, "simulation backend: auto|scalar|avx2");

    // ---- run -------------------------------------------------------------
    auto* cmd_run = app.add_subcommand("run", "run the full pipeline from the config");

    // ---- simulate ----------------------------------------------------------
    auto* cmd_sim = app.add_subcommand("simulate", "simulate an ensemble, write CSVs");
    std::size_t sim_paths = 0;
    double sim_horizon = 0.0;
    bool sim_dump_paths = false;
    cmd_sim->add_option("--paths", sim_paths, "number of paths (default from config)");
    cmd_sim->add_option("--horizon", sim_horizon, "horizon in years (default from config)");
    cmd_sim->add_flag("--dump-paths", sim_dump_paths,
                      "also write per-path ensemble.csv (large)");

    // ---- price -------------------------------------------------------------
    auto* cmd_price = app.add_subcommand("price", "futures price / curve");
    double price_spot = 2.0, price_t = 0.0;
    std::optional<double> price_T;
    std::string price_asof;
    cmd_price->add_option("--spot", price_spot, "spot price level")->required();
    cmd_price->add_option("--t", price_t, "valuation time in years");
    cmd_price->add_option("--T", price_T, "maturity in years (omit for calendar curve)");
    cmd_price->add_option("--as-of", price_asof,
                          "listing date (YYYY-MM-DD) for the default curve");

    // ---- index -------------------------------------------------------------
    auto* cmd_index = app.add_subcommand("index", "compute the TPI from provider quotes");
    std::string index_quotes;
    double index_cap = kDefaultWeightCap;
    double index_ssit = kDefaultSitScore;
    std::string index_date;
    cmd_index->add_option("--quotes", index_quotes, "provider quote CSV")->required();
    cmd_index->add_option("--cap", index_cap, "single-provider weight cap");
    cmd_index->add_option("--s-sit", index_ssit, "SIT benchmark capability score");
    cmd_index->add_option("--date", index_date, "observation date (ISO-8601)");

    // ---- margin ------------------------------------------------------------
    auto* cmd_margin = app.add_subcommand("margin", "one-shot initial margin evaluation");
    double margin_sigma = 0.0;
    double margin_days = 21.0;
    std::optional<double> margin_notional;
    std::optional<double> margin_lots;
    std::optional<double> margin_price;
    cmd_margin->add_option("--sigma20", margin_sigma, "annualized 20-day volatility")
        ->required();
    cmd_margin->add_option("--holding-days", margin_days, "holding period, trading days");
    cmd_margin->add_option("--notional", margin_notional, "contract notional, currency");
    cmd_margin->add_option("--lots", margin_lots, "position size in lots");
    cmd_margin->add_option("--price", margin_price, "settlement price per M SIT");

    // ---- hedge -------------------------------------------------------------
    auto* cmd_hedge = app.add_subcommand("hedge", "rolled-hedge backtest");
    std::optional<int> hedge_months;
    std::optional<double> hedge_rho;
    std::optional<int> hedge_roll;
    std::optional<double> hedge_h;
    cmd_hedge->add_option("--horizon-months", hedge_months, "backtest horizon");
    cmd_hedge->add_option("--target-rho", hedge_rho, "basis calibration target");
    cmd_hedge->add_option("--roll-days", hedge_roll, "days before expiry to roll");
    cmd_hedge->add_option("--hedge-ratio", hedge_h,
                          "fixed hedge ratio (default: optimal in-sample)");

    // ---- sensitivity ---------------------------------------------------------
    auto* cmd_sens = app.add_subcommand("sensitivity", "parameter sweep of a named metric");
    std::string sens_param, sens_metric = "terminal_p90", sens_values;
    cmd_sens->add_option("--param", sens_param, "parameter to sweep")->required();
    cmd_sens->add_option("--values", sens_values, "comma-separated values")->required();
    cmd_sens->add_option("--metric", sens_metric,
                         "terminal_mean|terminal_p90|frac_rise_100|hedged_cost_std|"
                         "variance_reduction");

    // ---- cost --------------------------------------------------------------
    auto* cmd_cost = app.add_subcommand("cost", "supply and cost decomposition");
    double cost_ce = 0.0, cost_eh = 0.0, cost_ea = 0.0, cost_k = 0.0;
    std::optional<double> cost_train, cost_lifetime;
    cmd_cost->add_option("--energy-cost", cost_ce, "C_E, currency per kWh")->required();
    cmd_cost->add_option("--hardware-eff", cost_eh, "eta_H, FLOPS per currency")->required();
    cmd_cost->add_option("--algo-eff", cost_ea, "eta_A, tokens per FLOP")->required();
    cmd_cost->add_option("--capital", cost_k, "K, investment scale")->required();
    cmd_cost->add_option("--train-cost", cost_train, "C_train for unit-cost decomposition");
    cmd_cost->add_option("--lifetime-tokens", cost_lifetime, "N_lifetime");

    // Let global flags appear after the subcommand name as well.
    for (CLI::App* sub : app.get_subcommands(static_cast<bool (*)(const CLI::App*)>(
             [](const CLI::App*) { return true; }))) {
        sub->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig config = effective_config(opts);
        const kernels::Backend backend = config.engine.backend;

        if (cmd_run->parsed() || app.get_subcommands().empty()) {
            run_pipeline(config, std::cout);
            return 0;
        }

        if (cmd_sim->parsed()) {
            const std::size_t n_paths = sim_paths > 0 ? sim_paths : config.engine.n_paths;
            const double horizon =
                sim_horizon > 0.0 ? sim_horizon : config.engine.horizon_years;
            const Ensemble ensemble =
                simulate_ensemble(config.process, config.x0, horizon, config.engine.dt,
                                  n_paths, config.engine.base_seed, config.engine.threads,
                                  backend);
            std::error_code ec;
            std::filesystem::create_directories(config.output_dir, ec);
            const EnsembleStats stats = summarize(ensemble);
            std::string fan = "time,mean,p5,p25,p75,p95\n";
            for (std::size_t k = 0; k < stats.times.size(); ++k) {
                fan += csv::format_double(stats.times[k]) + ',' +
                       csv::format_double(stats.mean_price[k]) + ',' +
                       csv::format_double(stats.p5[k]) + ',' +
                       csv::format_double(stats.p25[k]) + ',' +
                       csv::format_double(stats.p75[k]) + ',' +
                       csv::format_double(stats.p95[k]) + '\n';
            }
            csv::write_file_atomic(config.output_dir + "/fan_chart.csv", fan);
            if (sim_dump_paths) {
                csv::write_file_atomic(config.output_dir + "/ensemble.csv",
                                       ensemble_csv(ensemble));
            }
            std::cout << "simulated " << n_paths << " paths over " << horizon
                      << "y (mean-reversion half-life "
                      << csv::format_double(config.process.half_life_years())
                      << "y); terminal skewness "
                      << csv::format_double(stats.terminal_skewness) << "\n";
            return 0;
        }

        if (cmd_price->parsed()) {
            const double x_t = std::log(price_spot);
            if (price_T) {
                const double price =
                    futures_price(x_t, price_t, *price_T, config.process);
                std::cout << csv::format_double(price) << "\n";
            } else {
                const CivilDate as_of =
                    price_asof.empty() ? CivilDate{2026, 1, 2} : parse_date(price_asof);
                const auto curve =
                    futures_curve_from_calendar(x_t, price_t, as_of, config.process);
                std::cout << "maturity,price\n";
                for (const auto& quote : curve) {
                    std::cout << csv::format_double(quote.maturity) << ','
                              << csv::format_double(quote.price) << "\n";
                }
            }
            return 0;
        }

        if (cmd_index->parsed()) {
            const auto quotes = csv::read_provider_quotes(index_quotes);
            const IndexSnapshot snapshot =
                compute_tpi(quotes, index_ssit, index_cap, index_date);
            std::string out = "date,tpi\n" + snapshot.timestamp + ',' +
                              csv::format_double(snapshot.tpi) + '\n';
            out += "provider,weight\n";
            for (const auto& [provider, weight] : snapshot.weights) {
                out += provider + ',' + csv::format_double(weight) + '\n';
            }
            std::cout << out;
            if (!opts.out_dir.empty()) {
                std::error_code ec;
                std::filesystem::create_directories(opts.out_dir, ec);
                csv::write_file_atomic(opts.out_dir + "/index.csv", out);
            }
            return 0;
        }

        if (cmd_margin->parsed()) {
            double notional = 0.0;
            if (margin_notional) {
                notional = *margin_notional;
            } else if (margin_lots && margin_price) {
                notional = contract_notional(*margin_lots, *margin_price, config.contract);
            } else {
                std::cerr << "margin: give --notional or both --lots and --price\n";
                return 1;
            }
            const double margin = initial_margin(margin_sigma, margin_days / 252.0,
                                                 notional, config.contract);
            std::cout << "initial_margin," << csv::format_double(margin) << "\n";
            std::cout << "maintenance_margin,"
                      << csv::format_double(margin * config.contract.maintenance_ratio)
                      << "\n";
            return 0;
        }

        if (cmd_hedge->parsed()) {
            BacktestConfig backtest = config.hedging;
            if (hedge_months) backtest.horizon_months = *hedge_months;
            if (hedge_rho) backtest.basis.target_rho = *hedge_rho;
            if (hedge_roll) backtest.roll_days_before_expiry = *hedge_roll;
            if (hedge_h) {
                backtest.use_optimal_h = false;
                backtest.fixed_h = *hedge_h;
            }
            backtest.threads = config.engine.threads;
            const double horizon = static_cast<double>(backtest.horizon_months) / 12.0;
            const double dt = horizon / (static_cast<double>(backtest.horizon_months) *
                                         backtest.days_per_month);
            const Ensemble ensemble =
                simulate_ensemble(config.process, config.x0, horizon, dt,
                                  config.engine.n_paths, config.engine.base_seed,
                                  config.engine.threads, backend);
            const HedgeReport report =
                backtest_hedge(ensemble, config.process, backtest);
            if (!opts.out_dir.empty()) {
                std::error_code ec;
                std::filesystem::create_directories(opts.out_dir, ec);
                std::string out = "statistic,value\n";
                out += "h_star," + csv::format_double(report.h_star) + '\n';
                out += "unhedged_std," + csv::format_double(report.unhedged_std) + '\n';
                out += "hedged_std," + csv::format_double(report.hedged_std) + '\n';
                out += "variance_reduction," +
                       csv::format_double(report.variance_reduction) + '\n';
                out += "std_reduction," + csv::format_double(report.std_reduction) + '\n';
                out += "rho_realized," + csv::format_double(report.rho_realized) + '\n';
                out += "basis_sigma," + csv::format_double(report.basis_sigma) + '\n';
                csv::write_file_atomic(opts.out_dir + "/hedge_report.csv", out);
            }
            std::cout << "h*: " << csv::format_double(report.h_star) << "\n"
                      << "unhedged cost std: " << csv::format_double(report.unhedged_std)
                      << "\nhedged cost std:   " << csv::format_double(report.hedged_std)
                      << "\nvariance reduction: "
                      << csv::format_double(report.variance_reduction)
                      << "\nstd reduction:      " << csv::format_double(report.std_reduction)
                      << "\nrealized rho:       " << csv::format_double(report.rho_realized)
                      << "\nbasis sigma:        " << csv::format_double(report.basis_sigma)
                      << "\n";
            return 0;
        }

        if (cmd_sens->parsed()) {
            std::vector<double> values;
            std::stringstream ss(sens_values);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                values.push_back(std::stod(tok));
            }
            SweepConfig sweep;
            sweep.n_paths = config.engine.n_paths;
            sweep.horizon = config.engine.horizon_years;
            sweep.dt = config.engine.dt;
            sweep.base_seed = config.engine.base_seed;
            sweep.threads = config.engine.threads;
            sweep.backtest = config.hedging;
            const auto rows =
                sensitivity_sweep(sens_param, values, config.process, sens_metric, sweep);
            std::string table = sens_param + ',' + sens_metric + '\n';
            for (const auto& row : rows) {
                table += csv::format_double(row.value) + ',' +
                         csv::format_double(row.metric) + '\n';
            }
            std::cout << table;
            if (!opts.out_dir.empty()) {
                std::error_code ec;
                std::filesystem::create_directories(opts.out_dir, ec);
                csv::write_file_atomic(opts.out_dir + "/sensitivity_" + sens_param + ".csv",
                                       table);
            }
            return 0;
        }

        if (cmd_cost->parsed()) {
            const SupplyFactors factors{cost_ce, cost_eh, cost_ea, cost_k};
            const double supply = token_supply(factors);
            const double marginal = marginal_cost(cost_ce, cost_eh, cost_ea);
            std::cout << "token_supply," << csv::format_double(supply) << "\n";
            std::cout << "marginal_cost," << csv::format_double(marginal) << "\n";
            if (cost_train && cost_lifetime) {
                const CostStructure cost{*cost_train, *cost_lifetime, marginal};
                std::cout << "total_unit_cost," << csv::format_double(total_unit_cost(cost))
                          << "\n";
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
