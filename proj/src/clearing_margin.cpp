#include "sitmark/clearing_margin.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace sitmark {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) {
        throw std::domain_error(msg);
    }
}

}  // namespace

void ContractSpec::validate() const {
    require(lot_size > 0.0, "ContractSpec: lot_size must be > 0");
    require(tick > 0.0, "ContractSpec: tick must be > 0");
    require(limit_tier1 > 0.0 && limit_tier1 < limit_tier2 && limit_tier2 < 1.0,
            "ContractSpec: require 0 < limit_tier1 < limit_tier2 < 1");
    require(maintenance_ratio > 0.0 && maintenance_ratio < 1.0,
            "ContractSpec: maintenance_ratio must be in (0,1)");
    require(margin_alpha >= 0.0, "ContractSpec: margin_alpha must be >= 0");
    require(margin_floor_abs >= 0.0, "ContractSpec: margin_floor_abs must be >= 0");
    require(margin_floor_frac >= 0.0 && margin_floor_frac < 1.0,
            "ContractSpec: margin_floor_frac must be in [0,1)");
    require(monthly_listings >= 1 && quarterly_listings >= 0,
            "ContractSpec: listing counts invalid");
}

MarginAccount make_margin_account(std::string account_id, double position,
                                  double balance, double initial_margin,
                                  double last_settle, const ContractSpec& spec) {
    spec.validate();
    MarginAccount account;
    account.account_id = std::move(account_id);
    account.position = position;
    account.balance = balance;
    account.initial_margin = initial_margin;
    account.maintenance_margin = spec.maintenance_ratio * initial_margin;
    account.last_settle = last_settle;
    return account;
}

double realized_vol_20d(std::span<const double> settle_prices) {
    constexpr std::size_t kReturns = 20;
    if (settle_prices.size() < kReturns + 1) {
        throw std::invalid_argument(
            "realized_vol_20d: need at least 21 settlement prices");
    }
    const std::size_t last = settle_prices.size() - 1;
    double returns[kReturns];
    double sum = 0.0;
    for (std::size_t i = 0; i < kReturns; ++i) {
        const double p0 = settle_prices[last - kReturns + i];
        const double p1 = settle_prices[last - kReturns + i + 1];
        if (!(p0 > 0.0) || !(p1 > 0.0)) {
            throw std::invalid_argument("realized_vol_20d: prices must be > 0");
        }
        returns[i] = std::log(p1 / p0);
        sum += returns[i];
    }
    const double mean = sum / kReturns;
    double ss = 0.0;
    for (double r : returns) {
        const double d = r - mean;
        ss += d * d;
    }
    const double sample_std = std::sqrt(ss / (kReturns - 1));
    return sample_std * std::sqrt(252.0);
}

double initial_margin(double sigma20, double holding_period_years, double notional,
                      const ContractSpec& spec) {
    spec.validate();
    require(sigma20 >= 0.0, "initial_margin: sigma20 must be >= 0");
    require(holding_period_years >= 0.0, "initial_margin: holding period must be >= 0");
    require(notional > 0.0, "initial_margin: notional must be > 0");
    const double risk_margin =
        spec.margin_alpha * sigma20 * std::sqrt(holding_period_years) * notional;
    const double floor = std::max(spec.margin_floor_abs, spec.margin_floor_frac * notional);
    return std::max(risk_margin, floor);
}

double contract_notional(double lots, double price, const ContractSpec& spec) {
    require(price > 0.0, "contract_notional: price must be > 0");
    return std::abs(lots) * (spec.lot_size / 1e6) * price;
}

MarkToMarketResult mark_to_market(const MarginAccount& account, double new_settle,
                                  const ContractSpec& spec) {
    require(new_settle > 0.0, "mark_to_market: settlement price must be > 0");
    MarkToMarketResult result;
    result.account = account;
    result.cashflow =
        account.position * (spec.lot_size / 1e6) * (new_settle - account.last_settle);
    result.account.balance = account.balance + result.cashflow;
    result.account.last_settle = new_settle;
    result.margin_call = result.account.balance < result.account.maintenance_margin;
    return result;
}

LimitOutcome apply_price_limits(double reference, double proposed,
                                const ContractSpec& spec) {
    require(reference > 0.0, "apply_price_limits: reference must be > 0");
    const double move = proposed / reference - 1.0;
    const double magnitude = std::abs(move);
    const double direction = move < 0.0 ? -1.0 : 1.0;
    // Tier boundaries tolerate representation error so a clamped price
    // re-enters as accepted rather than re-triggering the tier.
    constexpr double kBoundarySlack = 1.0 + 1e-12;
    if (magnitude <= spec.limit_tier1 * kBoundarySlack) {
        return {proposed, LimitTier::kNone};
    }
    if (magnitude <= spec.limit_tier2 * kBoundarySlack) {
        return {reference * (1.0 + direction * spec.limit_tier1), LimitTier::kTier1Halt};
    }
    return {reference * (1.0 + direction * spec.limit_tier2), LimitTier::kTier2Halt};
}

double round_to_tick(double price, const ContractSpec& spec) {
    require(price >= 0.0, "round_to_tick: price must be >= 0");
    // The nudge absorbs binary representation error just below a decimal
    // midpoint (e.g. 2.005/0.01 evaluating to 200.4999...), so decimal ties
    // land on the away-from-zero side as quoted.
    const double ticks = price / spec.tick;
    const double nudged = ticks * (1.0 + 4.0 * std::numeric_limits<double>::epsilon());
    return static_cast<double>(std::llround(nudged)) * spec.tick;
}

// ---- calendar ----------------------------------------------------------------

std::int64_t days_from_civil(const CivilDate& date) {
    // Howard Hinnant's algorithm, days since 1970-01-01.
    const int y = date.year - (date.month <= 2 ? 1 : 0);
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy =
        (153u * static_cast<unsigned>(date.month + (date.month > 2 ? -3 : 9)) + 2u) / 5u +
        static_cast<unsigned>(date.day) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t days) {
    days += 719468;
    const std::int64_t era = (days >= 0 ? days : days - 146096) / 146097;
    const auto doe = static_cast<unsigned>(days - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp < 10 ? mp + 3 : mp - 9;
    return {static_cast<int>(y + (m <= 2 ? 1 : 0)), static_cast<int>(m), static_cast<int>(d)};
}

int day_of_week(const CivilDate& date) {
    const std::int64_t days = days_from_civil(date);
    return static_cast<int>((days % 7 + 11) % 7);  // 1970-01-01 was a Thursday
}

CivilDate third_wednesday(int year, int month) {
    constexpr int kWednesday = 3;
    const int first_dow = day_of_week({year, month, 1});
    const int first_wed = 1 + (kWednesday - first_dow + 7) % 7;
    return {year, month, first_wed + 14};
}

std::string to_iso_date(const CivilDate& date) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", date.year, date.month, date.day);
    return buf;
}

std::vector<ContractListing> listing_calendar(const CivilDate& as_of,
                                              const ContractSpec& spec) {
    spec.validate();
    std::vector<ContractListing> listings;

    // First unexpired month: the as_of month while its third Wednesday has
    // not passed, otherwise the next month.
    int year = as_of.year;
    int month = as_of.month;
    if (third_wednesday(year, month) < as_of) {
        ++month;
        if (month > 12) {
            month = 1;
            ++year;
        }
    }

    int y = year;
    int m = month;
    for (int i = 0; i < spec.monthly_listings; ++i) {
        listings.push_back({y, m, third_wednesday(y, m), false});
        ++m;
        if (m > 12) {
            m = 1;
            ++y;
        }
    }

    // Nearest quarterly months (Mar/Jun/Sep/Dec) not already listed.
    auto already_listed = [&listings](int yy, int mm) {
        return std::any_of(listings.begin(), listings.end(), [&](const ContractListing& c) {
            return c.year == yy && c.month == mm;
        });
    };
    int count = 0;
    while (count < spec.quarterly_listings) {
        if (m % 3 == 0 && !already_listed(y, m)) {
            listings.push_back({y, m, third_wednesday(y, m), true});
            ++count;
        }
        ++m;
        if (m > 12) {
            m = 1;
            ++y;
        }
    }
    return listings;
}

ComplianceReport check_mm_compliance(std::span<const MmQuote> quotes,
                                     const SessionInterval& session,
                                     const ContractSpec& spec, double net_capital) {
    spec.validate();
    if (!(session.end > session.begin)) {
        throw std::invalid_argument("check_mm_compliance: empty session");
    }
    const double session_len = session.end - session.begin;

    ComplianceReport report;
    report.spread_ok = true;
    report.size_ok = true;

    // Group indices per month in time order.
    std::map<int, std::vector<std::size_t>> by_month;
    for (std::size_t i = 0; i < quotes.size(); ++i) {
        by_month[quotes[i].month_index].push_back(i);
    }
    for (auto& [month, idx] : by_month) {
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return quotes[a].time < quotes[b].time;
        });
    }

    double min_uptime = quotes.empty() ? 0.0 : 1.0;
    for (const auto& [month, idx] : by_month) {
        double covered = 0.0;
        double worst_spread = 0.0;
        const double limit = month == 0 ? kMmFrontSpreadMax : kMmBackSpreadMax;
        for (std::size_t j = 0; j < idx.size(); ++j) {
            const MmQuote& quote = quotes[idx[j]];
            const double start = std::max(quote.time, session.begin);
            const double stop = j + 1 < idx.size()
                                    ? std::min(quotes[idx[j + 1]].time, session.end)
                                    : session.end;
            const bool two_sided = quote.bid > 0.0 && quote.ask > quote.bid;
            if (two_sided && stop > start) {
                covered += stop - start;
            }
            if (two_sided) {
                const double mid = 0.5 * (quote.bid + quote.ask);
                const double spread = (quote.ask - quote.bid) / mid;
                worst_spread = std::max(worst_spread, spread);
                if (spread > limit) {
                    report.spread_ok = false;
                    report.violations.push_back(
                        "month " + std::to_string(month) + ": spread " +
                        std::to_string(spread * 100.0) + "% of mid exceeds " +
                        std::to_string(limit * 100.0) + "%");
                }
                if (std::min(quote.bid_size, quote.ask_size) < kMmMinQuoteLots) {
                    report.size_ok = false;
                    report.violations.push_back("month " + std::to_string(month) +
                                                ": quote size below 50 lots");
                }
            }
        }
        const double uptime = covered / session_len;
        report.worst_spread_frac[month] = worst_spread;
        min_uptime = std::min(min_uptime, uptime);
    }

    report.uptime_fraction = min_uptime;
    report.uptime_ok = min_uptime >= kMmMinUptime;
    if (!report.uptime_ok) {
        report.violations.push_back("uptime " + std::to_string(min_uptime * 100.0) +
                                    "% below 80%");
    }
    report.net_capital_ok = net_capital >= kMmMinNetCapital;
    if (!report.net_capital_ok) {
        report.violations.push_back("net capital below $50M");
    }
    report.compliant =
        report.uptime_ok && report.spread_ok && report.size_ok && report.net_capital_ok;
    return report;
}

}  // namespace sitmark
