#include "sitmark/supply_cost.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sitmark {

namespace {

void require_positive(double value, const char* name) {
    if (!(std::isfinite(value) && value > 0.0)) {
        throw std::domain_error(std::string("supply_cost: ") + name + " must be > 0");
    }
}

}  // namespace

void SupplyFactors::validate() const {
    require_positive(energy_cost, "energy_cost");
    require_positive(hardware_eff, "hardware_eff");
    require_positive(algo_eff, "algo_eff");
    require_positive(capital, "capital");
}

void CostStructure::validate() const {
    require_positive(lifetime_tokens, "lifetime_tokens");
    if (!(std::isfinite(train_cost) && train_cost >= 0.0)) {
        throw std::domain_error("supply_cost: train_cost must be >= 0");
    }
    if (!(std::isfinite(marginal_cost) && marginal_cost >= 0.0)) {
        throw std::domain_error("supply_cost: marginal_cost must be >= 0");
    }
}

double token_supply(const SupplyFactors& factors) {
    factors.validate();
    return factors.hardware_eff * factors.algo_eff / factors.energy_cost * factors.capital;
}

double marginal_cost(double energy_cost, double hardware_eff, double algo_eff) {
    require_positive(energy_cost, "energy_cost");
    require_positive(hardware_eff, "hardware_eff");
    require_positive(algo_eff, "algo_eff");
    return energy_cost / (hardware_eff * algo_eff);
}

double total_unit_cost(const CostStructure& cost) {
    cost.validate();
    return cost.train_cost / cost.lifetime_tokens + cost.marginal_cost;
}

}  // namespace sitmark
