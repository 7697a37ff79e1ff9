#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fsde/common.hpp"
#include "fsde/quadrature.hpp"

namespace fsde::specfun {

// ---------------------------------------------------------------------------
// Gamma
// ---------------------------------------------------------------------------

namespace detail {

// Lanczos, g = 607/128, 15 coefficients (~1.8e-15 worst relative on the
// positive axis). The power is assembled from two half-power factors so Gamma
// stays finite right up to the double overflow bound.
inline double lanczos_positive(double x) {
    static const double coef[15] = {
        0.99999999999999709182,
        57.156235665862923517,     -59.597960355475491248,    14.136097974741747174,
        -0.49191381609762019978,   0.33994649984811888699e-4, 0.46523628927048575665e-4,
        -0.98374475304879564677e-4, 0.15808870322491248884e-3, -0.21026444172410488319e-3,
        0.21743961811521264320e-3, -0.16431810653676389022e-3, 0.84418223983852743293e-4,
        -0.26190838401581408670e-4, 0.36899182659531622704e-5};
    const double z = x - 1.0;
    double a = coef[0];
    for (int i = 1; i < 15; ++i) a += coef[i] / (z + i);
    const double t = z + 5.2421875;  // g + 1/2
    const double half = std::pow(t, 0.5 * (z + 0.5)) * std::exp(-0.5 * t);
    return std::sqrt(2.0 * pi) * half * half * a;
}

}  // namespace detail

inline constexpr double gamma_overflow_threshold = 171.624;

/// Gamma(x) for real x that is not a non-positive integer.
inline double gamma(double x) {
    if (!std::isfinite(x)) throw std::domain_error("gamma: non-finite argument");
    if (is_nonpositive_integer(x))
        throw std::domain_error("gamma: pole at non-positive integer x = " + std::to_string(x));
    if (x >= 0.5) {
        if (x > gamma_overflow_threshold)
            throw std::overflow_error("gamma: overflow for x = " + std::to_string(x));
        return detail::lanczos_positive(x);
    }
    // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    const double denom = sin_pi(x) * detail::lanczos_positive(1.0 - x);
    if (denom == 0.0 || !std::isfinite(denom))
        throw std::overflow_error("gamma: reflection overflow for x = " + std::to_string(x));
    return pi / denom;
}

/// 1/Gamma(x), entire; exactly 0 at non-positive integers.
inline double recip_gamma(double x) {
    if (is_nonpositive_integer(x)) return 0.0;
    if (x >= 0.5) {
        if (x <= gamma_overflow_threshold) return 1.0 / detail::lanczos_positive(x);
        return std::exp(-std::lgamma(x));  // underflows to 0 smoothly
    }
    if (1.0 - x <= gamma_overflow_threshold)
        return sin_pi(x) * detail::lanczos_positive(1.0 - x) / pi;
    // |1/Gamma| grows without bound on the far negative axis; log form, may overflow
    const double lg = std::lgamma(1.0 - x) + std::log(std::abs(sin_pi(x)) / pi);
    const double sign = sin_pi(x) < 0.0 ? -1.0 : 1.0;
    return sign * std::exp(lg);
}

namespace detail {

/// log|1/Gamma(x)| and its sign; sign 0 at poles of Gamma.
inline std::pair<double, double> log_recip_gamma(double x) {
    if (is_nonpositive_integer(x)) return {-std::numeric_limits<double>::infinity(), 0.0};
    if (x >= 0.5) return {-std::lgamma(x), 1.0};
    const double s = sin_pi(x);
    return {std::lgamma(1.0 - x) + std::log(std::abs(s) / pi), s < 0.0 ? -1.0 : 1.0};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Mittag-Leffler E_{alpha,beta}
// ---------------------------------------------------------------------------

struct MlParams {
    double alpha;
    double beta;

    MlParams(double a, double b) : alpha(a), beta(b) {
        if (!(a > 0.0) || !(a <= 2.0)) throw std::invalid_argument("MlParams: alpha must be in (0, 2]");
        if (!(b > 0.0)) throw std::invalid_argument("MlParams: beta must be > 0");
    }
};

/// Negative-argument magnitude out to which mittag_leffler is validated
/// against direct references; the integral branch stays accurate beyond it.
inline constexpr double ml_z_max = 50.0;

/// series/integral switch point on the negative axis
inline constexpr double ml_taylor_min = -5.0;

namespace detail {

inline double ml_taylor(double alpha, double beta, double z) {
    CompensatedSum acc;
    double zpow = 1.0;
    int quiet = 0;
    for (int n = 0; n < 500; ++n) {
        const double term = zpow * recip_gamma(alpha * n + beta);
        acc.add(term);
        zpow *= z;
        if (!std::isfinite(zpow))
            throw std::overflow_error("mittag_leffler: series overflow for z = " + std::to_string(z));
        const double scale = std::abs(acc.total()) + 1e-300;
        if (n > 4 && std::abs(term) < 1e-18 * scale) {
            if (++quiet >= 4) return acc.total();
        } else {
            quiet = 0;
        }
    }
    if (quiet > 0) return acc.total();
    throw std::domain_error("mittag_leffler: series did not converge for z = " + std::to_string(z));
}

// Real-axis integral representation for z < 0, 0 < alpha < 1, beta < 1 + alpha:
//   E_{a,b}(z) = 1/(pi a) int_0^inf chi^{(1-b)/a} e^{-chi^{1/a}}
//                [chi sin(pi(1-b)) - z sin(pi(1-b+a))] / (chi^2 - 2 chi z cos(pi a) + z^2) dchi
inline double ml_negative_integral(double alpha, double beta, double z) {
    const double sa = sin_pi(1.0 - beta + alpha);
    const double sb = sin_pi(1.0 - beta);
    const double ca = std::cos(pi * alpha);
    const double inv_alpha = 1.0 / alpha;
    const double exp_b = (1.0 - beta) * inv_alpha;

    const double cutoff = std::max(std::pow(50.0, alpha), 2.0 * std::abs(z));
    std::vector<double> bp = quad::geometric_breakpoints(cutoff, 24);

    auto f = [&](double chi) {
        const double e = -std::pow(chi, inv_alpha);
        if (e < -700.0) return 0.0;
        const double num = chi * sb - z * sa;
        const double u = chi - z * ca;
        const double den = u * u + z * z * (1.0 - ca) * (1.0 + ca);
        double p = exp_b == 0.0 ? 1.0 : std::pow(chi, exp_b);
        return p * std::exp(e) * num / den;
    };
    return quad::gl_panels(f, bp, 16) / (pi * alpha);
}

}  // namespace detail

/// Two-parameter Mittag-Leffler on the real axis. Taylor series on
/// [ml_taylor_min, +inf); integral representation for z < ml_taylor_min
/// (needs alpha < 1, beta < 1 + alpha). alpha = 1, beta = 1 is exp(z).
inline double mittag_leffler(const MlParams& p, double z) {
    if (!std::isfinite(z)) throw std::domain_error("mittag_leffler: non-finite z");
    if (p.alpha == 1.0 && p.beta == 1.0) return std::exp(z);
    if (z >= ml_taylor_min) return detail::ml_taylor(p.alpha, p.beta, z);
    if (p.alpha < 1.0 && p.beta < 1.0 + p.alpha - 1e-9)
        return detail::ml_negative_integral(p.alpha, p.beta, z);
    throw std::domain_error("mittag_leffler: (alpha, beta, z) outside validated region: alpha=" +
                            std::to_string(p.alpha) + " beta=" + std::to_string(p.beta) +
                            " z=" + std::to_string(z));
}

inline double mittag_leffler(double alpha, double beta, double z) {
    return mittag_leffler(MlParams(alpha, beta), z);
}

// ---------------------------------------------------------------------------
// Mainardi function M_alpha
// ---------------------------------------------------------------------------

/// validated evaluation window
inline constexpr double mainardi_alpha_min = 0.5;
inline constexpr double mainardi_alpha_max = 0.95;
inline constexpr double mainardi_z_max = 30.0;

namespace detail {

/// leading decay constant: M_a(z) <= C exp(-B z^{1/(1-a)}) with B = (1-a) a^{a/(1-a)}
inline double mainardi_decay_const(double alpha) {
    return (1.0 - alpha) * std::pow(alpha, alpha / (1.0 - alpha));
}

inline double mainardi_series(double alpha, double z) {
    CompensatedSum acc;
    double s = 1.0;  // (-z)^n / n!
    int quiet = 0;
    for (int n = 0; n < 2000; ++n) {
        const double a_n = -alpha * n + 1.0 - alpha;
        double term;
        if (std::abs(s) > 1e-290 && a_n > -gamma_overflow_threshold) {
            term = s * recip_gamma(a_n);
        } else {
            // tail terms: split form over/underflows, compute via logs
            auto [lrg, sign] = log_recip_gamma(a_n);
            const double lmag = n * std::log(z) - std::lgamma(n + 1.0) + lrg;
            term = (n % 2 == 0 ? 1.0 : -1.0) * sign * (lmag < -740.0 ? 0.0 : std::exp(lmag));
        }
        acc.add(term);
        s *= -z / (n + 1.0);
        const double scale = std::abs(acc.total()) + 1e-300;
        if (n > 8 + 3.0 * z && std::abs(term) < 1e-19 * scale) {
            if (++quiet >= 4) return acc.total();
        } else {
            quiet = 0;
        }
    }
    throw std::domain_error("mainardi: series did not converge");
}

/// Stable-density integral form,
///   M_a(z) = z^{a/(1-a)}/(1-a) * (1/pi) int_0^pi A(phi) exp(-z^{1/(1-a)} A(phi)) dphi,
/// A(phi) = sin(a phi)^{a/(1-a)} sin((1-a) phi) sin(phi)^{-1/(1-a)}; A is computed
/// through log sinc so the phi -> 0 limit is exact.
inline double mainardi_integral(double alpha, double z) {
    const double c = alpha / (1.0 - alpha);
    const double y = std::pow(z, 1.0 / (1.0 - alpha));
    const double log_a0 = c * std::log(alpha) + std::log1p(-alpha);
    if (y * std::exp(log_a0) > 690.0) return 0.0;  // below double range

    auto lnsinc = [](double x) { return x == 0.0 ? 0.0 : std::log(std::sin(x) / x); };
    auto bigA = [&](double phi) {
        const double ln_a = log_a0 + c * lnsinc(alpha * phi) + lnsinc((1.0 - alpha) * phi) -
                            (1.0 + c) * lnsinc(phi);
        return std::exp(ln_a);
    };
    auto f = [&](double phi) {
        const double A = bigA(phi);
        const double e = -y * A;
        return e < -700.0 ? 0.0 : A * std::exp(e);
    };

    // panels graded toward both endpoints: boundary layer at 0, blow-up of A at pi
    std::vector<double> bp;
    bp.push_back(0.0);
    for (int k = 22; k >= 1; --k) bp.push_back(pi * std::ldexp(1.0, -k));
    for (int k = 1; k <= 20; ++k) bp.push_back(pi * (1.0 - std::ldexp(1.0, -k)));
    bp.push_back(pi);
    std::sort(bp.begin(), bp.end());

    const double integral = quad::gl_panels(f, bp, 20) / pi;
    return std::pow(z, c) / (1.0 - alpha) * integral;
}

}  // namespace detail

/// Mainardi (Wright-type) function for alpha in [0.5, 0.95], z in [0, 30].
/// Series with compensated accumulation while it is well conditioned
/// (decay exponent B z^{1/(1-alpha)} <= 6), integral representation beyond.
inline double mainardi(double alpha, double z) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("mainardi: alpha must be in (0, 1)");
    if (alpha < mainardi_alpha_min || alpha > mainardi_alpha_max)
        throw std::domain_error("mainardi: alpha outside validated window [0.5, 0.95]");
    if (!(z >= 0.0) || z > mainardi_z_max)
        throw std::domain_error("mainardi: z outside validated window [0, 30]");
    if (z == 0.0) return recip_gamma(1.0 - alpha);

    const double conditioning = detail::mainardi_decay_const(alpha) * std::pow(z, 1.0 / (1.0 - alpha));
    if (conditioning <= 6.0) return detail::mainardi_series(alpha, z);
    return detail::mainardi_integral(alpha, z);
}

/// r-cutoff such that the integrand tail of r^delta M_alpha(r) is ~1e-20.
inline double mainardi_cutoff(double alpha) {
    return std::pow(45.0 / detail::mainardi_decay_const(alpha), 1.0 - alpha);
}

/// default quadrature rule for semi-infinite Mainardi integrals
inline QuadratureRule mainardi_rule(double alpha, int nodes_per_panel = 24) {
    return quad::semi_infinite_rule(mainardi_cutoff(alpha), nodes_per_panel);
}

namespace detail {

/// crude tail bound past the rule cutoff, from the sampled log-slope of M
inline double mainardi_tail_estimate(double alpha, double delta, double cutoff) {
    const double r = std::min(cutoff, mainardi_z_max);
    const double eps = 1e-3 * r;
    const double m_hi = mainardi(alpha, std::min(r + eps, mainardi_z_max));
    const double m_lo = mainardi(alpha, r - eps);
    const double m_at = mainardi(alpha, r);
    if (m_at <= 0.0 || m_lo <= 0.0 || m_hi <= 0.0) return 0.0;  // underflowed: tail is nil
    const double slope = (std::log(m_lo) - std::log(m_hi)) / (2.0 * eps);  // local decay rate
    if (!(slope > 0.0)) return std::numeric_limits<double>::infinity();
    return std::pow(r, delta) * m_at / slope;
}

}  // namespace detail

/// int_0^inf r^delta M_alpha(r) dr by quadrature; identity target Gamma(delta+1)/Gamma(alpha delta+1).
inline double mainardi_moment(double alpha, double delta, const QuadratureRule& rule) {
    if (!(delta > -1.0)) throw std::invalid_argument("mainardi_moment: delta must be > -1");
    const double tail = detail::mainardi_tail_estimate(alpha, delta, rule.upper_cutoff);
    if (!(tail < 1e-9))
        throw std::runtime_error("mainardi_moment: tail estimate " + std::to_string(tail) +
                                 " exceeds tolerance; increase the rule cutoff");
    return rule.integrate([&](double r) { return std::pow(r, delta) * mainardi(alpha, r); });
}

/// lhs = int_0^inf e^{-r lambda} M_alpha(r) dr, rhs = E_alpha(-lambda).
inline std::pair<double, double> mainardi_laplace_check(double alpha, double lambda,
                                                        const QuadratureRule& rule) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("mainardi_laplace_check: lambda must be >= 0");
    const double tail = detail::mainardi_tail_estimate(alpha, 0.0, rule.upper_cutoff);
    if (!(tail < 1e-9)) throw std::runtime_error("mainardi_laplace_check: tail exceeds tolerance");
    const double lhs =
        rule.integrate([&](double r) { return std::exp(-r * lambda) * mainardi(alpha, r); });
    const double rhs = mittag_leffler(alpha, 1.0, -lambda);
    return {lhs, rhs};
}

/// lhs of int_0^inf (alpha/r^{alpha+1}) M_alpha(1/r^alpha) e^{-lambda r} dr; target e^{-lambda^alpha}.
inline std::pair<double, double> mainardi_scaled_laplace_check(double alpha, double lambda) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("mainardi_scaled_laplace_check: lambda must be > 0");
    // below r_min the Mainardi argument exceeds the window; M has underflowed there
    const double r_min = std::pow(mainardi_z_max, -1.0 / alpha);
    const double r_max = 50.0 / lambda;
    std::vector<double> bp;
    for (int k = 0; k <= 40; ++k) bp.push_back(r_min * std::pow(r_max / r_min, k / 40.0));
    auto f = [&](double r) {
        const double arg = std::pow(r, -alpha);
        if (arg > mainardi_z_max) return 0.0;
        return alpha / std::pow(r, alpha + 1.0) * mainardi(alpha, arg) * std::exp(-lambda * r);
    };
    const double lhs = quad::gl_panels(f, bp, 20);
    return {lhs, std::exp(-std::pow(lambda, alpha))};
}

}  // namespace fsde::specfun
