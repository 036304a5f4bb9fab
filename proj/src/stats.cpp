#include "sitmark/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sitmark::stats {

double mean(std::span<const double> xs) {
    if (xs.empty()) {
        throw std::invalid_argument("stats::mean: empty sample");
    }
    double acc = 0.0;
    for (double x : xs) {
        acc += x;
    }
    return acc / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
    if (xs.size() < 2) {
        throw std::invalid_argument("stats::variance: need at least 2 points");
    }
    const double m = mean(xs);
    double acc = 0.0;
    for (double x : xs) {
        const double d = x - m;
        acc += d * d;
    }
    return acc / static_cast<double>(xs.size() - 1);
}

double std_dev(std::span<const double> xs) { return std::sqrt(variance(xs)); }

double correlation(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw std::invalid_argument("stats::correlation: length mismatch");
    }
    if (xs.size() < 2) {
        throw std::invalid_argument("stats::correlation: need at least 2 points");
    }
    const double mx = mean(xs);
    const double my = mean(ys);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw std::invalid_argument("stats::correlation: degenerate sample");
    }
    return sxy / std::sqrt(sxx * syy);
}

double skewness(std::span<const double> xs, bool* degenerate) {
    if (degenerate) {
        *degenerate = false;
    }
    const auto n = static_cast<double>(xs.size());
    if (xs.size() < 3) {
        if (degenerate) {
            *degenerate = true;
        }
        return 0.0;
    }
    const double m = mean(xs);
    double m2 = 0.0;
    double m3 = 0.0;
    for (double x : xs) {
        const double d = x - m;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    // Relative floor: spreads at rounding-noise scale are no spread at all.
    if (m2 <= 1e-24 * (1.0 + m * m)) {
        if (degenerate) {
            *degenerate = true;
        }
        return 0.0;
    }
    const double g1 = m3 / std::pow(m2, 1.5);
    return g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0);
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("stats::quantile: p must be in [0,1]");
    }
    const std::size_t n = sorted.size();
    const double h = p * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= n) {
        return sorted[n - 1];
    }
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

double quantile(std::span<const double> xs, double p) {
    if (xs.empty()) {
        throw std::invalid_argument("stats::quantile: empty sample");
    }
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    return quantile_sorted(sorted, p);
}

std::vector<double> quantiles(std::span<const double> xs, std::span<const double> ps) {
    if (xs.empty()) {
        throw std::invalid_argument("stats::quantiles: empty sample");
    }
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> out;
    out.reserve(ps.size());
    for (double p : ps) {
        out.push_back(quantile_sorted(sorted, p));
    }
    return out;
}

}  // namespace sitmark::stats
