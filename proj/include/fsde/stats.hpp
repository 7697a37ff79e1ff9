#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fsde/common.hpp"

namespace fsde::stats {

struct SampleStats {
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    std::size_t count = 0;

    double std_error_of_mean() const {
        return count > 0 ? std::sqrt(variance / static_cast<double>(count)) : 0.0;
    }
    /// standard error of the sample variance under approximate normality
    double std_error_of_variance() const {
        return count > 1 ? variance * std::sqrt(2.0 / static_cast<double>(count - 1)) : 0.0;
    }
};

inline SampleStats summarize(const std::vector<double>& xs) {
    SampleStats s;
    s.count = xs.size();
    if (xs.empty()) return s;
    CompensatedSum acc;
    for (double x : xs) acc.add(x);
    s.mean = acc.total() / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        CompensatedSum sq;
        for (double x : xs) sq.add((x - s.mean) * (x - s.mean));
        s.variance = sq.total() / static_cast<double>(xs.size() - 1);
    }
    return s;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// asymptotic Kolmogorov distribution Q(lambda) = 2 sum (-1)^{k-1} e^{-2 k^2 lambda^2}
inline double kolmogorov_q(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * (k % 2 == 1 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
        s += term;
        if (std::abs(term) < 1e-12) break;
    }
    return std::clamp(s, 0.0, 1.0);
}

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// two-sample Kolmogorov-Smirnov
inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double en = std::sqrt(na * nb / (na + nb));
    KsResult r;
    r.statistic = d;
    r.p_value = kolmogorov_q((en + 0.12 + 0.11 / en) * d);
    return r;
}

/// one-sample KS against N(mu, sigma^2)
inline KsResult ks_normal(std::vector<double> a, double mu, double sigma) {
    if (a.empty() || !(sigma > 0.0)) throw std::invalid_argument("ks_normal: bad input");
    std::sort(a.begin(), a.end());
    const double n = static_cast<double>(a.size());
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double f = normal_cdf((a[i] - mu) / sigma);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    const double en = std::sqrt(n);
    KsResult r;
    r.statistic = d;
    r.p_value = kolmogorov_q((en + 0.12 + 0.11 / en) * d);
    return r;
}

}  // namespace fsde::stats
