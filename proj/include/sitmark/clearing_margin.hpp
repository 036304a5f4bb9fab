// clearing_margin.hpp — contract terms, margining, price limits, calendar.
//
// Covers the institutional machinery around the contract: tick rounding,
// volatility-scaled initial margin with a notional-fraction floor, daily
// mark-to-market with margin calls, the two-tier price-limit regime, the
// monthly + quarterly listing calendar (third-Wednesday expiries), and
// market-maker quote compliance checks.

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace sitmark {

struct ContractSpec {
    double lot_size = 1'000'000.0;     // SIT per lot
    double tick = 0.01;                // currency per million SIT
    double limit_tier1 = 0.15;         // first price-limit tier (fraction)
    double limit_tier2 = 0.25;         // second tier (fraction)
    double maintenance_ratio = 0.75;   // maintenance / initial margin
    double margin_alpha = 3.0;         // volatility coverage coefficient
    double margin_floor_abs = 0.0;     // absolute floor, currency
    double margin_floor_frac = 0.08;   // floor as fraction of notional
    int monthly_listings = 6;
    int quarterly_listings = 4;

    void validate() const;
    bool operator==(const ContractSpec&) const = default;
};

// Market-maker obligations.
inline constexpr double kMmMinUptime = 0.80;
inline constexpr double kMmFrontSpreadMax = 0.02;   // of mid, front month
inline constexpr double kMmBackSpreadMax = 0.05;    // of mid, back months
inline constexpr double kMmMinQuoteLots = 50.0;
inline constexpr double kMmMinNetCapital = 50e6;

struct MarginAccount {
    std::string account_id;
    double position = 0.0;            // signed lot count
    double balance = 0.0;             // currency
    double initial_margin = 0.0;      // currency
    double maintenance_margin = 0.0;  // currency
    double last_settle = 0.0;         // currency per million SIT
};

// Builds an account with maintenance = maintenance_ratio * initial.
MarginAccount make_margin_account(std::string account_id, double position,
                                  double balance, double initial_margin,
                                  double last_settle, const ContractSpec& spec);

// Annualized 20-day volatility: sample std dev of the last 20 daily log
// returns times sqrt(252). Requires >= 21 strictly positive prices.
double realized_vol_20d(std::span<const double> settle_prices);

// max(alpha * sigma20 * sqrt(T) * notional, floor); the floor is
// max(margin_floor_abs, margin_floor_frac * notional).
double initial_margin(double sigma20, double holding_period_years, double notional,
                      const ContractSpec& spec);

// Contract notional for a position at a given settlement price.
double contract_notional(double lots, double price, const ContractSpec& spec);

struct MarkToMarketResult {
    MarginAccount account;
    double cashflow = 0.0;
    bool margin_call = false;
};

// Daily settlement: cashflow = position * lot_size/1e6 * (new - last).
MarkToMarketResult mark_to_market(const MarginAccount& account, double new_settle,
                                  const ContractSpec& spec);

enum class LimitTier { kNone, kTier1Halt, kTier2Halt };

struct LimitOutcome {
    double price = 0.0;
    LimitTier tier = LimitTier::kNone;
};

// Two-tier price limits around the reference (prior daily settlement):
// within +-tier1 accepted; within +-tier2 clamped to the tier1 boundary with
// a tier-1 halt; beyond, clamped to the tier2 boundary with a session halt.
LimitOutcome apply_price_limits(double reference, double proposed,
                                const ContractSpec& spec);

// Nearest tick multiple; ties round half away from zero.
double round_to_tick(double price, const ContractSpec& spec);

// ---- listing calendar ------------------------------------------------------

struct CivilDate {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;

    auto operator<=>(const CivilDate&) const = default;
};

// Days since 1970-01-01 (proleptic Gregorian).
std::int64_t days_from_civil(const CivilDate& date);
CivilDate civil_from_days(std::int64_t days);
int day_of_week(const CivilDate& date);  // 0 = Sunday .. 6 = Saturday
CivilDate third_wednesday(int year, int month);
std::string to_iso_date(const CivilDate& date);

struct ContractListing {
    int year = 0;
    int month = 0;
    CivilDate last_trading_day;
    bool quarterly = false;  // listed via the quarterly rule
};

// The nearest unexpired consecutive months plus the nearest quarterly months
// (Mar/Jun/Sep/Dec) not already listed, each expiring on its third Wednesday.
// A contract stays listed through its last trading day; call with the next
// day to see the post-expiry roll.
std::vector<ContractListing> listing_calendar(const CivilDate& as_of,
                                              const ContractSpec& spec = {});

// ---- market-maker compliance ------------------------------------------------

struct MmQuote {
    double time = 0.0;       // hours into the session
    int month_index = 0;     // 0 = front month
    double bid = 0.0;
    double ask = 0.0;
    double bid_size = 0.0;   // lots
    double ask_size = 0.0;   // lots
};

struct SessionInterval {
    double begin = 0.0;
    double end = 0.0;
};

struct ComplianceReport {
    double uptime_fraction = 0.0;  // minimum over quoted months
    bool uptime_ok = false;
    bool spread_ok = false;
    bool size_ok = false;
    bool net_capital_ok = false;
    bool compliant = false;
    std::map<int, double> worst_spread_frac;  // per month index
    std::vector<std::string> violations;
};

// Quotes are in force until the next quote for the same month or session
// end; a quote is two-sided when 0 < bid < ask. Spread limits are 2% of mid
// for the front month and 5% for back months; minimum size is 50 lots.
ComplianceReport check_mm_compliance(std::span<const MmQuote> quotes,
                                     const SessionInterval& session,
                                     const ContractSpec& spec,
                                     double net_capital = kMmMinNetCapital);

// Row of the settlement ledger CSV.
struct LedgerRow {
    std::string date;
    std::string account;
    double position = 0.0;
    double settle = 0.0;
    double cashflow = 0.0;
    double balance = 0.0;
    bool margin_call = false;
};

}  // namespace sitmark
