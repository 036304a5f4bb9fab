#include "sitmark/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "sitmark/csv.hpp"
#include "sitmark/futures_pricing.hpp"
#include "sitmark/hedging.hpp"
#include "sitmark/mc_engine.hpp"
#include "sitmark/stats.hpp"

namespace sitmark {

namespace {

using csv::format_double;

[[noreturn]] void stage_error(const std::string& stage, const std::exception& e) {
    throw std::runtime_error("pipeline stage '" + stage + "': " + e.what());
}

std::string fan_chart_csv(const EnsembleStats& stats) {
    std::string out = "time,mean,p5,p25,p75,p95\n";
    for (std::size_t k = 0; k < stats.times.size(); ++k) {
        out += format_double(stats.times[k]) + ',' + format_double(stats.mean_price[k]) +
               ',' + format_double(stats.p5[k]) + ',' + format_double(stats.p25[k]) + ',' +
               format_double(stats.p75[k]) + ',' + format_double(stats.p95[k]) + '\n';
    }
    return out;
}

std::string summary_csv(const EnsembleStats& stats, const ProcessParams& params) {
    std::string out = "statistic,value\n";
    out += "n_paths," + std::to_string(stats.n_paths) + '\n';
    out += "terminal_skewness," + format_double(stats.terminal_skewness) + '\n';
    out += "skewness_degenerate," + std::string(stats.skewness_degenerate ? "1" : "0") + '\n';
    out += "frac_rise_100," + format_double(stats.frac_rise_100) + '\n';
    out += "frac_swing_5x," + format_double(stats.frac_swing_5x) + '\n';
    out += "mean_reversion_half_life_years," + format_double(params.half_life_years()) + '\n';
    for (const auto& bucket : stats.vol_buckets) {
        out += "baseline_vol_" + format_double(bucket.t_begin) + "_to_" +
               format_double(bucket.t_end) + ',' + format_double(bucket.vol) + '\n';
    }
    return out;
}

std::string curve_csv(const std::vector<FuturesQuote>& curve) {
    std::string out = "maturity,price\n";
    for (const auto& quote : curve) {
        out += format_double(quote.maturity) + ',' + format_double(quote.price) + '\n';
    }
    return out;
}

std::string vol_ts_csv(const std::vector<VolBucket>& buckets) {
    std::string out = "t_begin,t_end,annualized_vol\n";
    for (const auto& bucket : buckets) {
        out += format_double(bucket.t_begin) + ',' + format_double(bucket.t_end) + ',' +
               format_double(bucket.vol) + '\n';
    }
    return out;
}

std::string hedge_csv(const HedgeReport& report) {
    std::string out = "statistic,value\n";
    out += "h_star," + format_double(report.h_star) + '\n';
    out += "unhedged_std," + format_double(report.unhedged_std) + '\n';
    out += "hedged_std," + format_double(report.hedged_std) + '\n';
    out += "variance_reduction," + format_double(report.variance_reduction) + '\n';
    out += "std_reduction," + format_double(report.std_reduction) + '\n';
    out += "efficiency_theoretical," + format_double(report.efficiency_theoretical) + '\n';
    out += "rho_realized," + format_double(report.rho_realized) + '\n';
    out += "basis_sigma," + format_double(report.basis_sigma) + '\n';
    out += "n_paths," + std::to_string(report.n_paths) + '\n';
    return out;
}

std::string ledger_csv(const std::vector<LedgerRow>& rows) {
    std::string out = "date,account,position,settle,cashflow,balance,margin_call\n";
    for (const auto& row : rows) {
        out += row.date + ',' + row.account + ',' + format_double(row.position) + ',' +
               format_double(row.settle) + ',' + format_double(row.cashflow) + ',' +
               format_double(row.balance) + ',' + (row.margin_call ? "1" : "0") + '\n';
    }
    return out;
}

}  // namespace

RunManifest run_pipeline(const RunConfig& config, std::ostream& log) {
    config.validate();

    RunManifest manifest;
    manifest.version = kToolkitVersion;
    manifest.config_hash = csv::fnv1a_hex(save_config(config));
    manifest.base_seed = config.engine.base_seed;

    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec) {
        throw std::runtime_error("pipeline: cannot create output dir '" + config.output_dir +
                                 "': " + ec.message());
    }

    const auto emit = [&](const std::string& name, const std::string& content) {
        const std::string path = config.output_dir + "/" + name;
        csv::write_file_atomic(path, content);
        manifest.file_hashes[name] = csv::fnv1a_hex(content);
        log << "  wrote " << path << "\n";
    };

    const std::vector<ScenarioSpec> scenarios =
        config.scenarios.empty() ? default_scenarios() : config.scenarios;

    // simulate + summarize
    EnsembleStats stats;
    Ensemble baseline;
    try {
        log << "[simulate] " << config.engine.n_paths << " paths, "
            << config.engine.horizon_years << "y horizon\n";
        baseline = simulate_ensemble(config.process, config.x0, config.engine.horizon_years,
                                     config.engine.dt, config.engine.n_paths,
                                     config.engine.base_seed, config.engine.threads,
                                     config.engine.backend);
        stats = summarize(baseline);
        emit("fan_chart.csv", fan_chart_csv(stats));
        emit("summary.csv", summary_csv(stats, config.process));
    } catch (const std::exception& e) {
        stage_error("simulate", e);
    }

    // futures curve on the monthly grid out to the horizon
    try {
        std::vector<double> maturities;
        const int months = static_cast<int>(std::lround(config.engine.horizon_years * 12.0));
        for (int m = 1; m <= months; ++m) {
            maturities.push_back(static_cast<double>(m) / 12.0);
        }
        const auto curve = futures_curve(config.x0, 0.0, maturities, config.process);
        emit("futures_curve.csv", curve_csv(curve));
    } catch (const std::exception& e) {
        stage_error("price", e);
    }

    // vol term structure on the scenario mixture
    try {
        const auto buckets = default_vol_buckets(config.engine.horizon_years);
        const auto ts = vol_term_structure(scenarios, config.process,
                                           std::min<std::size_t>(config.engine.n_paths, 4000),
                                           config.engine.horizon_years, config.engine.dt,
                                           buckets, config.engine.base_seed,
                                           config.engine.threads, config.engine.backend);
        emit("vol_term_structure.csv", vol_ts_csv(ts));
    } catch (const std::exception& e) {
        stage_error("vol_term_structure", e);
    }

    // rolled-hedge backtest with settlement ledger
    try {
        log << "[hedge] " << config.hedging.horizon_months << "-month backtest, target rho "
            << config.hedging.basis.target_rho << "\n";
        const double horizon = static_cast<double>(config.hedging.horizon_months) / 12.0;
        const double dt = horizon / (static_cast<double>(config.hedging.horizon_months) *
                                     config.hedging.days_per_month);
        const Ensemble hedge_ensemble =
            simulate_ensemble(config.process, config.x0, horizon, dt, config.engine.n_paths,
                              config.engine.base_seed, config.engine.threads,
                              config.engine.backend);
        std::vector<LedgerRow> ledger;
        const HedgeReport report = backtest_hedge(hedge_ensemble, config.process,
                                                  config.hedging, &ledger, config.contract);
        emit("hedge_report.csv", hedge_csv(report));
        emit("ledger.csv", ledger_csv(ledger));
    } catch (const std::exception& e) {
        stage_error("hedge", e);
    }

    // manifest last, covering all emitted files
    nlohmann::ordered_json doc;
    doc["version"] = manifest.version;
    doc["config_hash"] = manifest.config_hash;
    doc["base_seed"] = manifest.base_seed;
    doc["files"] = manifest.file_hashes;
    csv::write_file_atomic(config.output_dir + "/manifest.json", doc.dump(2) + "\n");
    log << "  wrote " << config.output_dir << "/manifest.json\n";
    return manifest;
}

}  // namespace sitmark
