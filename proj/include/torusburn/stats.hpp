#pragma once

// Small statistics toolbox: empirical summaries, the regularized lower
// incomplete gamma function, chi-square tail probabilities, and a two-sample
// chi-square test on integer histograms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "torusburn/errors.hpp"

namespace torusburn {

struct SampleSummary {
    std::size_t count = 0;
    double mean = 0.0;
    double stddev = 0.0; // sample standard deviation (n-1 denominator)
    double min = 0.0;
    double max = 0.0;
    double q05 = 0.0, q25 = 0.0, q50 = 0.0, q75 = 0.0, q95 = 0.0;
};

/// Empirical quantile with linear interpolation between order statistics.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
    if (q <= 0.0) return sorted.front();
    if (q >= 1.0) return sorted.back();
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

inline SampleSummary summarize(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("summary of empty sample");
    SampleSummary s;
    s.count = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
    std::sort(values.begin(), values.end());
    s.min = values.front();
    s.max = values.back();
    s.q05 = quantile_sorted(values, 0.05);
    s.q25 = quantile_sorted(values, 0.25);
    s.q50 = quantile_sorted(values, 0.50);
    s.q75 = quantile_sorted(values, 0.75);
    s.q95 = quantile_sorted(values, 0.95);
    return s;
}

/// Regularized lower incomplete gamma P(a, x), by the power series for
/// x < a+1 and the Lentz continued fraction for the complement otherwise.
inline double regularized_gamma_p(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw std::invalid_argument("regularized_gamma_p domain");
    if (x == 0.0) return 0.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        // series: P(a,x) = x^a e^-x / Gamma(a) * sum_k x^k / (a(a+1)...(a+k))
        double ap = a;
        double term = 1.0 / a;
        double sum = term;
        for (int k = 0; k < 10000; ++k) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-16)
                return sum * std::exp(-x + a * std::log(x) - lg);
        }
        throw NumericalError("incomplete gamma series failed to converge");
    }
    // continued fraction for Q(a,x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) {
            const double q = std::exp(-x + a * std::log(x) - lg) * h;
            return 1.0 - q;
        }
    }
    throw NumericalError("incomplete gamma continued fraction failed to converge");
}

/// CDF of the chi-square distribution with df degrees of freedom.
inline double chi_square_cdf(double df, double x) {
    if (x <= 0.0) return 0.0;
    return regularized_gamma_p(df / 2.0, x / 2.0);
}

struct ChiSquareResult {
    double statistic = 0.0;
    int degrees_of_freedom = 0;
    double p_value = 1.0;
};

/// Pearson goodness-of-fit against given expected counts (same total).
inline ChiSquareResult chi_square_goodness(const std::vector<double>& observed,
                                           const std::vector<double>& expected) {
    if (observed.size() != expected.size() || observed.empty())
        throw std::invalid_argument("chi_square_goodness size mismatch");
    ChiSquareResult r;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] <= 0.0) throw std::invalid_argument("expected count must be positive");
        const double diff = observed[i] - expected[i];
        r.statistic += diff * diff / expected[i];
    }
    r.degrees_of_freedom = static_cast<int>(observed.size()) - 1;
    r.p_value = 1.0 - chi_square_cdf(r.degrees_of_freedom, r.statistic);
    return r;
}

/// Two-sample chi-square homogeneity test on integer-valued samples.
/// Builds a joint histogram, pools adjacent bins until each pooled bin holds
/// at least min_pooled observations, and uses the K-sample statistic
/// sum (a*sqrt(B/A) - b*sqrt(A/B))^2 / (a+b) with df = bins - 1.
inline ChiSquareResult two_sample_chi_square(const std::vector<std::int64_t>& sample_a,
                                             const std::vector<std::int64_t>& sample_b,
                                             double min_pooled = 10.0) {
    if (sample_a.empty() || sample_b.empty())
        throw std::invalid_argument("two_sample_chi_square needs nonempty samples");
    std::map<std::int64_t, std::pair<double, double>> hist;
    for (std::int64_t v : sample_a) hist[v].first += 1.0;
    for (std::int64_t v : sample_b) hist[v].second += 1.0;
    std::vector<std::pair<double, double>> bins;
    double acc_a = 0.0, acc_b = 0.0;
    for (const auto& [value, counts] : hist) {
        (void)value;
        acc_a += counts.first;
        acc_b += counts.second;
        if (acc_a + acc_b >= min_pooled) {
            bins.emplace_back(acc_a, acc_b);
            acc_a = acc_b = 0.0;
        }
    }
    if (acc_a + acc_b > 0.0) {
        if (bins.empty()) bins.emplace_back(acc_a, acc_b);
        else { bins.back().first += acc_a; bins.back().second += acc_b; }
    }
    if (bins.size() < 2)
        throw std::invalid_argument("two_sample_chi_square: fewer than two pooled bins");
    const double total_a = static_cast<double>(sample_a.size());
    const double total_b = static_cast<double>(sample_b.size());
    const double ka = std::sqrt(total_b / total_a);
    const double kb = std::sqrt(total_a / total_b);
    ChiSquareResult r;
    for (const auto& [a, b] : bins) {
        const double diff = ka * a - kb * b;
        r.statistic += diff * diff / (a + b);
    }
    r.degrees_of_freedom = static_cast<int>(bins.size()) - 1;
    r.p_value = 1.0 - chi_square_cdf(r.degrees_of_freedom, r.statistic);
    return r;
}

} // namespace torusburn
