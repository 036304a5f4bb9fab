// config.hpp — run configuration: sectioned key-value files.
//
// Format: INI-style sections of key = value pairs, '#' or ';' comments.
// Unknown sections or keys are rejected with file:line context. Omitted keys
// fall back to the documented defaults (the calibrated parameter table for
// the process block). save/load round-trips exactly: doubles serialize with
// full precision.
//
// Sections and keys:
//   [process]   kappa theta0 beta sigma lambda mu_j sigma_j gamma t_season x0
//   [engine]    n_paths horizon_years dt base_seed threads
//   [contract]  lot_size tick limit_tier1 limit_tier2 maintenance_ratio
//               margin_alpha margin_floor_abs margin_floor_frac
//   [hedging]   target_rho horizon_months roll_days_before_expiry
//               days_per_month basis_kappa basis_sigma use_optimal_h fixed_h
//               procurement (daily|terminal) calib_paths ledger_lots
//   [output]    dir
//   [scenario.<name>]  weight + any [process] parameter as an override

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sitmark/clearing_margin.hpp"
#include "sitmark/hedging.hpp"
#include "sitmark/mc_engine.hpp"
#include "sitmark/price_process.hpp"

namespace sitmark {

struct EngineConfig {
    std::size_t n_paths = 10000;
    double horizon_years = 3.0;
    double dt = 1.0 / 252.0;
    std::uint64_t base_seed = 42;
    int threads = 0;
    // Kernel backend; results are bit-identical across backends, so this
    // only affects speed.
    kernels::Backend backend = kernels::Backend::kAuto;

    bool operator==(const EngineConfig&) const = default;
};

struct RunConfig {
    ProcessParams process;
    double x0 = std::numbers::ln2;  // initial log price, defaults to theta0
    EngineConfig engine;
    ContractSpec contract;
    BacktestConfig hedging;
    std::vector<ScenarioSpec> scenarios;  // empty = default_scenarios()
    std::string output_dir = "out";

    void validate() const;
    bool operator==(const RunConfig&) const = default;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& origin);
std::string save_config(const RunConfig& config);

}  // namespace sitmark
