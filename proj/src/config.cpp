#include "sitmark/config.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "sitmark/csv.hpp"

namespace sitmark {

namespace {

struct ParsedLine {
    int line_no = 0;
    int value_col = 0;  // 1-based column of the value text
    std::string key;
    std::string value;
};

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = text.find_last_not_of(" \t");
    return text.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& origin, int line_no, const std::string& message) {
    throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": " + message);
}

[[noreturn]] void fail_at(const std::string& origin, const ParsedLine& line,
                          const std::string& message) {
    throw std::runtime_error(origin + ":" + std::to_string(line.line_no) + ":" +
                             std::to_string(line.value_col) + ": " + message);
}

double to_double(const std::string& origin, const ParsedLine& line) {
    try {
        std::size_t pos = 0;
        const double value = std::stod(line.value, &pos);
        if (pos != line.value.size() || !std::isfinite(value)) {
            throw std::invalid_argument("");
        }
        return value;
    } catch (const std::exception&) {
        fail_at(origin, line, "key '" + line.key + "': invalid number '" + line.value + "'");
    }
}

std::uint64_t to_u64(const std::string& origin, const ParsedLine& line) {
    std::uint64_t value = 0;
    const auto* first = line.value.data();
    const auto* last = first + line.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        fail_at(origin, line,
                "key '" + line.key + "': invalid unsigned integer '" + line.value + "'");
    }
    return value;
}

long to_long(const std::string& origin, const ParsedLine& line) {
    long value = 0;
    const auto* first = line.value.data();
    const auto* last = first + line.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        fail_at(origin, line, "key '" + line.key + "': invalid integer '" + line.value + "'");
    }
    return value;
}

bool to_bool(const std::string& origin, const ParsedLine& line) {
    if (line.value == "true" || line.value == "1") {
        return true;
    }
    if (line.value == "false" || line.value == "0") {
        return false;
    }
    fail_at(origin, line, "key '" + line.key + "': expected true/false");
}

void apply_process_key(const std::string& origin, const ParsedLine& line,
                       ProcessParams& params, double* x0) {
    if (line.key == "kappa") {
        params.kappa = to_double(origin, line);
    } else if (line.key == "theta0") {
        params.theta0 = to_double(origin, line);
    } else if (line.key == "beta") {
        params.beta = to_double(origin, line);
    } else if (line.key == "sigma") {
        params.sigma = to_double(origin, line);
    } else if (line.key == "lambda") {
        params.lambda = to_double(origin, line);
    } else if (line.key == "mu_j") {
        params.mu_j = to_double(origin, line);
    } else if (line.key == "sigma_j") {
        params.sigma_j = to_double(origin, line);
    } else if (line.key == "gamma") {
        params.gamma = to_double(origin, line);
    } else if (line.key == "t_season") {
        params.t_season = to_double(origin, line);
    } else if (x0 != nullptr && line.key == "x0") {
        *x0 = to_double(origin, line);
    } else {
        fail(origin, line.line_no, "unknown key '" + line.key + "' in section [process]");
    }
}

void apply_scenario_key(const std::string& origin, const ParsedLine& line,
                        ScenarioSpec& scenario) {
    if (line.key == "weight") {
        scenario.mixture_weight = to_double(origin, line);
    } else if (line.key == "kappa") {
        scenario.kappa = to_double(origin, line);
    } else if (line.key == "theta0") {
        scenario.theta0 = to_double(origin, line);
    } else if (line.key == "beta") {
        scenario.beta = to_double(origin, line);
    } else if (line.key == "sigma") {
        scenario.sigma = to_double(origin, line);
    } else if (line.key == "lambda") {
        scenario.lambda = to_double(origin, line);
    } else if (line.key == "mu_j") {
        scenario.mu_j = to_double(origin, line);
    } else if (line.key == "sigma_j") {
        scenario.sigma_j = to_double(origin, line);
    } else if (line.key == "gamma") {
        scenario.gamma = to_double(origin, line);
    } else if (line.key == "t_season") {
        scenario.t_season = to_double(origin, line);
    } else {
        fail(origin, line.line_no,
             "unknown key '" + line.key + "' in section [scenario." + scenario.name + "]");
    }
}

void apply_engine_key(const std::string& origin, const ParsedLine& line, EngineConfig& engine) {
    if (line.key == "n_paths") {
        engine.n_paths = static_cast<std::size_t>(to_u64(origin, line));
    } else if (line.key == "horizon_years") {
        engine.horizon_years = to_double(origin, line);
    } else if (line.key == "dt") {
        engine.dt = to_double(origin, line);
    } else if (line.key == "base_seed") {
        engine.base_seed = to_u64(origin, line);
    } else if (line.key == "threads") {
        engine.threads = static_cast<int>(to_long(origin, line));
    } else if (line.key == "backend") {
        if (line.value == "auto") {
            engine.backend = kernels::Backend::kAuto;
        } else if (line.value == "scalar") {
            engine.backend = kernels::Backend::kScalar;
        } else if (line.value == "avx2") {
            engine.backend = kernels::Backend::kAvx2;
        } else {
            fail(origin, line.line_no, "backend must be auto, scalar, or avx2");
        }
    } else {
        fail(origin, line.line_no, "unknown key '" + line.key + "' in section [engine]");
    }
}

void apply_contract_key(const std::string& origin, const ParsedLine& line, ContractSpec& spec) {
    if (line.key == "lot_size") {
        spec.lot_size = to_double(origin, line);
    } else if (line.key == "tick") {
        spec.tick = to_double(origin, line);
    } else if (line.key == "limit_tier1") {
        spec.limit_tier1 = to_double(origin, line);
    } else if (line.key == "limit_tier2") {
        spec.limit_tier2 = to_double(origin, line);
    } else if (line.key == "maintenance_ratio") {
        spec.maintenance_ratio = to_double(origin, line);
    } else if (line.key == "margin_alpha") {
        spec.margin_alpha = to_double(origin, line);
    } else if (line.key == "margin_floor_abs") {
        spec.margin_floor_abs = to_double(origin, line);
    } else if (line.key == "margin_floor_frac") {
        spec.margin_floor_frac = to_double(origin, line);
    } else {
        fail(origin, line.line_no, "unknown key '" + line.key + "' in section [contract]");
    }
}

void apply_hedging_key(const std::string& origin, const ParsedLine& line,
                       BacktestConfig& hedging) {
    if (line.key == "target_rho") {
        hedging.basis.target_rho = to_double(origin, line);
    } else if (line.key == "horizon_months") {
        hedging.horizon_months = static_cast<int>(to_long(origin, line));
    } else if (line.key == "roll_days_before_expiry") {
        hedging.roll_days_before_expiry = static_cast<int>(to_long(origin, line));
    } else if (line.key == "days_per_month") {
        hedging.days_per_month = static_cast<int>(to_long(origin, line));
    } else if (line.key == "basis_kappa") {
        hedging.basis.kappa_b = to_double(origin, line);
    } else if (line.key == "basis_sigma") {
        hedging.basis.sigma_b = to_double(origin, line);
    } else if (line.key == "calib_paths") {
        hedging.basis.calib_paths = static_cast<std::size_t>(to_u64(origin, line));
    } else if (line.key == "use_optimal_h") {
        hedging.use_optimal_h = to_bool(origin, line);
    } else if (line.key == "fixed_h") {
        hedging.fixed_h = to_double(origin, line);
    } else if (line.key == "ledger_lots") {
        hedging.ledger_lots = to_double(origin, line);
    } else if (line.key == "procurement") {
        if (line.value == "daily") {
            hedging.procurement = Procurement::kDaily;
        } else if (line.value == "terminal") {
            hedging.procurement = Procurement::kTerminal;
        } else {
            fail(origin, line.line_no, "procurement must be 'daily' or 'terminal'");
        }
    } else {
        fail(origin, line.line_no, "unknown key '" + line.key + "' in section [hedging]");
    }
}

}  // namespace

void RunConfig::validate() const {
    process.validate();
    if (!std::isfinite(x0)) {
        throw std::domain_error("RunConfig: x0 must be finite");
    }
    if (engine.n_paths < 1) {
        throw std::domain_error("RunConfig: engine.n_paths must be >= 1");
    }
    if (!(engine.horizon_years > 0.0)) {
        throw std::domain_error("RunConfig: engine.horizon_years must be > 0");
    }
    if (!(engine.dt > 0.0 && engine.dt <= engine.horizon_years)) {
        throw std::domain_error("RunConfig: engine.dt must satisfy 0 < dt <= horizon");
    }
    contract.validate();
    if (hedging.horizon_months < 1) {
        throw std::domain_error("RunConfig: hedging.horizon_months must be >= 1");
    }
    if (!(hedging.basis.target_rho > 0.0 && hedging.basis.target_rho < 1.0)) {
        throw std::domain_error("RunConfig: hedging.target_rho must be in (0, 1)");
    }
    if (!scenarios.empty()) {
        double total = 0.0;
        for (const auto& scenario : scenarios) {
            scenario.apply(process);  // validates merged parameters
            total += scenario.mixture_weight;
        }
        if (std::abs(total - 1.0) > 1e-9) {
            throw std::domain_error("RunConfig: scenario weights must sum to 1");
        }
    }
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
    RunConfig config;
    std::istringstream stream(text);
    std::string raw;
    int line_no = 0;
    std::string section;
    ScenarioSpec* scenario = nullptr;

    while (std::getline(stream, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto comment = line.find_first_of("#;"); comment != std::string::npos) {
            line = line.substr(0, comment);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                fail(origin, line_no, "malformed section header '" + line + "'");
            }
            section = trim(line.substr(1, line.size() - 2));
            scenario = nullptr;
            if (section.rfind("scenario.", 0) == 0) {
                const std::string name = section.substr(9);
                if (name.empty()) {
                    fail(origin, line_no, "scenario section needs a name");
                }
                for (const auto& existing : config.scenarios) {
                    if (existing.name == name) {
                        fail(origin, line_no, "duplicate scenario '" + name + "'");
                    }
                }
                config.scenarios.emplace_back();
                config.scenarios.back().name = name;
                scenario = &config.scenarios.back();
            } else if (section != "process" && section != "engine" && section != "contract" &&
                       section != "hedging" && section != "output") {
                fail(origin, line_no, "unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail(origin, line_no, "expected 'key = value', got '" + line + "'");
        }
        auto value_begin = raw.find('=') + 1;
        while (value_begin < raw.size() && (raw[value_begin] == ' ' || raw[value_begin] == '\t')) {
            ++value_begin;
        }
        ParsedLine parsed{line_no, static_cast<int>(value_begin) + 1,
                          trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
        if (parsed.key.empty()) {
            fail(origin, line_no, "empty key");
        }
        if (section.empty()) {
            fail(origin, line_no, "key '" + parsed.key + "' outside any section");
        }
        if (scenario != nullptr) {
            apply_scenario_key(origin, parsed, *scenario);
        } else if (section == "process") {
            apply_process_key(origin, parsed, config.process, &config.x0);
        } else if (section == "engine") {
            apply_engine_key(origin, parsed, config.engine);
        } else if (section == "contract") {
            apply_contract_key(origin, parsed, config.contract);
        } else if (section == "hedging") {
            apply_hedging_key(origin, parsed, config.hedging);
        } else if (section == "output") {
            if (parsed.key == "dir") {
                config.output_dir = parsed.value;
            } else {
                fail(origin, line_no, "unknown key '" + parsed.key + "' in section [output]");
            }
        }
    }

    try {
        config.validate();
    } catch (const std::exception& e) {
        throw std::runtime_error(origin + ": " + e.what());
    }
    return config;
}

RunConfig load_config(const std::string& path) {
    return parse_config(csv::read_file(path), path);
}

std::string save_config(const RunConfig& config) {
    const auto d = [](double value) { return csv::format_double(value); };
    std::ostringstream out;
    out << "[process]\n";
    out << "kappa = " << d(config.process.kappa) << "\n";
    out << "theta0 = " << d(config.process.theta0) << "\n";
    out << "beta = " << d(config.process.beta) << "\n";
    out << "sigma = " << d(config.process.sigma) << "\n";
    out << "lambda = " << d(config.process.lambda) << "\n";
    out << "mu_j = " << d(config.process.mu_j) << "\n";
    out << "sigma_j = " << d(config.process.sigma_j) << "\n";
    out << "gamma = " << d(config.process.gamma) << "\n";
    out << "t_season = " << d(config.process.t_season) << "\n";
    out << "x0 = " << d(config.x0) << "\n";
    out << "\n[engine]\n";
    out << "n_paths = " << config.engine.n_paths << "\n";
    out << "horizon_years = " << d(config.engine.horizon_years) << "\n";
    out << "dt = " << d(config.engine.dt) << "\n";
    out << "base_seed = " << config.engine.base_seed << "\n";
    out << "threads = " << config.engine.threads << "\n";
    out << "backend = " << kernels::backend_name(config.engine.backend) << "\n";
    out << "\n[contract]\n";
    out << "lot_size = " << d(config.contract.lot_size) << "\n";
    out << "tick = " << d(config.contract.tick) << "\n";
    out << "limit_tier1 = " << d(config.contract.limit_tier1) << "\n";
    out << "limit_tier2 = " << d(config.contract.limit_tier2) << "\n";
    out << "maintenance_ratio = " << d(config.contract.maintenance_ratio) << "\n";
    out << "margin_alpha = " << d(config.contract.margin_alpha) << "\n";
    out << "margin_floor_abs = " << d(config.contract.margin_floor_abs) << "\n";
    out << "margin_floor_frac = " << d(config.contract.margin_floor_frac) << "\n";
    out << "\n[hedging]\n";
    out << "target_rho = " << d(config.hedging.basis.target_rho) << "\n";
    out << "horizon_months = " << config.hedging.horizon_months << "\n";
    out << "roll_days_before_expiry = " << config.hedging.roll_days_before_expiry << "\n";
    out << "days_per_month = " << config.hedging.days_per_month << "\n";
    out << "basis_kappa = " << d(config.hedging.basis.kappa_b) << "\n";
    out << "basis_sigma = " << d(config.hedging.basis.sigma_b) << "\n";
    out << "calib_paths = " << config.hedging.basis.calib_paths << "\n";
    out << "use_optimal_h = " << (config.hedging.use_optimal_h ? "true" : "false") << "\n";
    out << "fixed_h = " << d(config.hedging.fixed_h) << "\n";
    out << "ledger_lots = " << d(config.hedging.ledger_lots) << "\n";
    out << "procurement = "
        << (config.hedging.procurement == Procurement::kDaily ? "daily" : "terminal") << "\n";
    out << "\n[output]\n";
    out << "dir = " << config.output_dir << "\n";
    for (const auto& scenario : config.scenarios) {
        out << "\n[scenario." << scenario.name << "]\n";
        out << "weight = " << d(scenario.mixture_weight) << "\n";
        if (scenario.kappa) out << "kappa = " << d(*scenario.kappa) << "\n";
        if (scenario.theta0) out << "theta0 = " << d(*scenario.theta0) << "\n";
        if (scenario.beta) out << "beta = " << d(*scenario.beta) << "\n";
        if (scenario.sigma) out << "sigma = " << d(*scenario.sigma) << "\n";
        if (scenario.lambda) out << "lambda = " << d(*scenario.lambda) << "\n";
        if (scenario.mu_j) out << "mu_j = " << d(*scenario.mu_j) << "\n";
        if (scenario.sigma_j) out << "sigma_j = " << d(*scenario.sigma_j) << "\n";
        if (scenario.gamma) out << "gamma = " << d(*scenario.gamma) << "\n";
        if (scenario.t_season) out << "t_season = " << d(*scenario.t_season) << "\n";
    }
    return out.str();
}

}  // namespace sitmark
