// supply_cost.hpp — three-factor token supply and provider cost decomposition.
//
// Supply:        Q = (eta_H * eta_A / C_E) * K
// Marginal cost: C_marginal = C_E / (eta_H * eta_A)
// Unit cost:     C_total = C_train / N_lifetime + C_marginal
// The first two multiply to K, which the tests use as an algebraic check.

#pragma once

namespace sitmark {

struct SupplyFactors {
    double energy_cost;   // currency per kWh (C_E)
    double hardware_eff;  // FLOPS per currency unit (eta_H)
    double algo_eff;      // tokens per FLOP (eta_A)
    double capital;       // currency (K)

    void validate() const;  // throws std::domain_error naming the field
};

struct CostStructure {
    double train_cost;       // currency (C_train)
    double lifetime_tokens;  // tokens served over model life (N_lifetime)
    double marginal_cost;    // currency per token (C_marginal)

    void validate() const;
};

// Token supply capacity for the given factors.
double token_supply(const SupplyFactors& factors);

// Marginal inference cost per token.
double marginal_cost(double energy_cost, double hardware_eff, double algo_eff);

// Amortized training cost plus marginal cost, per token.
double total_unit_cost(const CostStructure& cost);

}  // namespace sitmark
