#include "sitmark/index_tpi.hpp"

#include <cmath>
#include <stdexcept>

namespace sitmark {

namespace {

// Def. 2 thresholds, inclusive.
constexpr double kMmluMin = 86.0;
constexpr double kHumanEvalMin = 67.0;
constexpr double kGsm8kMin = 92.0;

double benchmark_or_throw(const std::map<std::string, double>& benchmarks,
                          const std::string& name) {
    const auto it = benchmarks.find(name);
    if (it == benchmarks.end()) {
        throw std::invalid_argument("qualifies_as_sit: missing benchmark '" + name + "'");
    }
    return it->second;
}

}  // namespace

void ProviderQuote::validate() const {
    if (!(std::isfinite(raw_price) && raw_price > 0.0)) {
        throw std::domain_error("ProviderQuote '" + provider_id + "': raw_price must be > 0");
    }
    if (!(std::isfinite(capability_score) && capability_score > 0.0)) {
        throw std::domain_error("ProviderQuote '" + provider_id +
                                "': capability_score must be > 0");
    }
    if (!(std::isfinite(volume) && volume >= 0.0)) {
        throw std::domain_error("ProviderQuote '" + provider_id + "': volume must be >= 0");
    }
}

bool qualifies_as_sit(const std::map<std::string, double>& benchmarks) {
    const double mmlu = benchmark_or_throw(benchmarks, "mmlu");
    const double humaneval = benchmark_or_throw(benchmarks, "humaneval");
    const double gsm8k = benchmark_or_throw(benchmarks, "gsm8k");
    return mmlu >= kMmluMin && humaneval >= kHumanEvalMin && gsm8k >= kGsm8kMin;
}

double sit_equivalent_price(const ProviderQuote& quote, double s_sit) {
    quote.validate();
    if (!(std::isfinite(s_sit) && s_sit > 0.0)) {
        throw std::domain_error("sit_equivalent_price: s_sit must be > 0");
    }
    return quote.raw_price * s_sit / quote.capability_score;
}

std::map<std::string, double> capped_weights(std::span<const ProviderQuote> quotes,
                                             double cap) {
    if (quotes.empty()) {
        throw std::domain_error("capped_weights: no quotes");
    }
    if (!(cap > 0.0 && cap <= 1.0)) {
        throw std::domain_error("capped_weights: cap must be in (0, 1]");
    }
    const double n = static_cast<double>(quotes.size());
    if (cap * n < 1.0) {
        const auto needed = static_cast<long>(std::ceil(1.0 / cap));
        throw std::domain_error("capped_weights: cap " + std::to_string(cap) +
                                " infeasible for " + std::to_string(quotes.size()) +
                                " providers; at least " + std::to_string(needed) +
                                " are required");
    }

    double total_volume = 0.0;
    for (const auto& quote : quotes) {
        quote.validate();
        total_volume += quote.volume;
    }
    if (total_volume <= 0.0) {
        throw std::domain_error("capped_weights: all volumes are zero");
    }

    // Iterative cap-and-renormalize: fix violators at the cap, redistribute
    // the remaining mass volume-proportionally among the rest. Each pass caps
    // at least one provider, so this terminates in <= N passes.
    std::vector<double> weights(quotes.size());
    std::vector<bool> capped(quotes.size(), false);
    for (std::size_t i = 0; i < quotes.size(); ++i) {
        weights[i] = quotes[i].volume / total_volume;
    }
    for (;;) {
        bool violated = false;
        for (std::size_t i = 0; i < quotes.size(); ++i) {
            if (!capped[i] && weights[i] > cap) {
                capped[i] = true;
                violated = true;
            }
        }
        if (!violated) {
            break;
        }
        double capped_mass = 0.0;
        double free_volume = 0.0;
        for (std::size_t i = 0; i < quotes.size(); ++i) {
            if (capped[i]) {
                capped_mass += cap;
            } else {
                free_volume += quotes[i].volume;
            }
        }
        const double remaining = 1.0 - capped_mass;
        if (remaining > 0.0 && free_volume <= 0.0) {
            const auto needed = static_cast<long>(std::ceil(1.0 / cap));
            throw std::domain_error(
                "capped_weights: cap infeasible, residual mass has no providers with "
                "volume; at least " +
                std::to_string(needed) + " providers with volume are required");
        }
        for (std::size_t i = 0; i < quotes.size(); ++i) {
            weights[i] = capped[i] ? cap : quotes[i].volume / free_volume * remaining;
        }
    }

    std::map<std::string, double> out;
    for (std::size_t i = 0; i < quotes.size(); ++i) {
        if (!out.emplace(quotes[i].provider_id, weights[i]).second) {
            throw std::domain_error("capped_weights: duplicate provider_id '" +
                                    quotes[i].provider_id + "'");
        }
    }
    return out;
}

IndexSnapshot compute_tpi(std::span<const ProviderQuote> quotes, double s_sit,
                          double cap, std::string timestamp) {
    for (const auto& quote : quotes) {
        if (!qualifies_as_sit(quote.benchmarks)) {
            throw std::domain_error("compute_tpi: provider '" + quote.provider_id +
                                    "' does not qualify as SIT");
        }
    }
    IndexSnapshot snapshot;
    snapshot.weights = capped_weights(quotes, cap);
    snapshot.timestamp = std::move(timestamp);
    double tpi = 0.0;
    for (const auto& quote : quotes) {
        tpi += snapshot.weights.at(quote.provider_id) * sit_equivalent_price(quote, s_sit);
    }
    snapshot.tpi = tpi;
    return snapshot;
}

}  // namespace sitmark
