// index_tpi.hpp — Token Price Index construction for cash settlement.
//
// Providers qualify by benchmark thresholds (MMLU >= 86, HumanEval >= 67,
// GSM8K >= 92). Each quote is converted to a capability-adjusted equivalent
// price raw * s_sit / score, weighted by volume with a single-provider cap
// (iterative cap-and-renormalize), and averaged into the index.

#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace sitmark {

inline constexpr double kDefaultSitScore = 100.0;  // normalized benchmark scale
inline constexpr double kDefaultWeightCap = 0.30;

struct ProviderQuote {
    std::string provider_id;
    double raw_price = 0.0;         // currency per million tokens
    double capability_score = 0.0;  // dimensionless, same scale as s_sit
    double volume = 0.0;            // tokens per observation window
    std::map<std::string, double> benchmarks;  // name -> score percentage

    void validate() const;
};

struct IndexSnapshot {
    double tpi = 0.0;  // currency per million SIT
    std::map<std::string, double> weights;
    std::string timestamp;  // ISO-8601 date of the observation window
};

// True iff all three benchmark thresholds are met (inclusive). Throws
// std::invalid_argument naming any missing benchmark key.
bool qualifies_as_sit(const std::map<std::string, double>& benchmarks);

// Capability-adjusted price per million SIT.
double sit_equivalent_price(const ProviderQuote& quote, double s_sit = kDefaultSitScore);

// Volume-proportional weights with each provider capped at `cap`. Capped
// providers hold exactly `cap`; the remainder stays proportional among the
// rest. Throws std::domain_error when all volumes are zero or the cap is
// infeasible (cap * provider count < 1).
std::map<std::string, double> capped_weights(std::span<const ProviderQuote> quotes,
                                             double cap = kDefaultWeightCap);

// Full index: validates SIT qualification, builds capped weights, and
// averages equivalent prices.
IndexSnapshot compute_tpi(std::span<const ProviderQuote> quotes,
                          double s_sit = kDefaultSitScore,
                          double cap = kDefaultWeightCap,
                          std::string timestamp = {});

}  // namespace sitmark
