#pragma once

// Shared independent oracles for the test suites. These deliberately restate
// the defining series/expansions rather than calling the library paths they
// are used to check.

#include <cmath>
#include <vector>

#include "fsde/common.hpp"
#include "fsde/specfun.hpp"

namespace oracle {

/// direct 500-term Mittag-Leffler series via recip_gamma, compensated sum
inline double ml_series(double alpha, double beta, double z, int terms = 500) {
    fsde::CompensatedSum acc;
    double zpow = 1.0;
    for (int n = 0; n < terms; ++n) {
        acc.add(zpow * fsde::specfun::recip_gamma(alpha * n + beta));
        zpow *= z;
        if (zpow == 0.0 || !std::isfinite(zpow)) break;  // terms are below eps long before
    }
    return acc.total();
}

/// asymptotic expansion E_{a,b}(-x) ~ sum_{k>=1} (-1)^{k+1} x^{-k} / Gamma(b - a k)
inline double ml_asymptotic(double alpha, double beta, double x, int terms = 12) {
    fsde::CompensatedSum acc;
    double xpow = 1.0 / x;
    for (int k = 1; k <= terms; ++k) {
        const double sign = (k % 2 == 1) ? 1.0 : -1.0;
        acc.add(sign * xpow * fsde::specfun::recip_gamma(beta - alpha * k));
        xpow /= x;
    }
    return acc.total();
}

/// scaled complementary error function e^{x^2} erfc(x)
inline double erfcx(double x) {
    if (x < 25.0) return std::exp(x * x) * std::erfc(x);
    // asymptotic tail: 1/(x sqrt(pi)) sum (-1)^k (2k-1)!! / (2x^2)^k
    double term = 1.0, sum = 1.0;
    const double inv = 1.0 / (2.0 * x * x);
    for (int k = 1; k <= 18; ++k) {
        term *= -(2.0 * k - 1.0) * inv;
        sum += term;
        if (std::abs(term) < 1e-18) break;
    }
    return sum / (x * std::sqrt(fsde::pi));
}

/// direct Mainardi series (only meaningful where it is well conditioned)
inline double mainardi_series(double alpha, double z, int terms = 300) {
    fsde::CompensatedSum acc;
    double s = 1.0;
    for (int n = 0; n < terms; ++n) {
        acc.add(s * fsde::specfun::recip_gamma(-alpha * n + 1.0 - alpha));
        s *= -z / (n + 1.0);
        if (s == 0.0) break;
    }
    return acc.total();
}

}  // namespace oracle
