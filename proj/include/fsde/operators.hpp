#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsde/common.hpp"
#include "fsde/quadrature.hpp"
#include "fsde/specfun.hpp"

namespace fsde::operators {

using ModeVector = std::vector<double>;

/// Diagonal generator A acting as -mu_n on mode n, with the semigroup growth
/// bound ||T(t)|| <= M e^{omega t}.
struct SpectralOperator {
    std::vector<double> eigenvalues;  // mu_n > 0
    double growth_m = 1.0;            // M >= 1
    double growth_omega = 0.0;        // omega >= 0

    SpectralOperator(std::vector<double> mu, double m = 1.0, double omega = 0.0)
        : eigenvalues(std::move(mu)), growth_m(m), growth_omega(omega) {
        if (eigenvalues.empty()) throw std::invalid_argument("SpectralOperator: no modes");
        for (double v : eigenvalues)
            if (!(v > 0.0)) throw std::invalid_argument("SpectralOperator: eigenvalues must be > 0");
        if (!(m >= 1.0) || !(omega >= 0.0))
            throw std::invalid_argument("SpectralOperator: need M >= 1, omega >= 0");
    }

    std::size_t n_modes() const { return eigenvalues.size(); }

    void check_vector(const ModeVector& v) const {
        if (v.size() != eigenvalues.size())
            throw std::invalid_argument("SpectralOperator: mode vector size mismatch");
    }
};

/// T(t) v: mode n multiplied by e^{-mu_n t}
inline ModeVector semigroup_apply(const SpectralOperator& a, double t, const ModeVector& v) {
    if (!(t >= 0.0)) throw std::invalid_argument("semigroup_apply: t >= 0 required");
    a.check_vector(v);
    ModeVector out(v.size());
    for (std::size_t n = 0; n < v.size(); ++n) out[n] = std::exp(-a.eigenvalues[n] * t) * v[n];
    return out;
}

/// scalar multiplier of T_alpha(t) on a mode with eigenvalue mu
inline double t_alpha_multiplier(double alpha, double mu, double t) {
    if (t == 0.0) return 1.0;
    return specfun::mittag_leffler(alpha, 1.0, -mu * std::pow(t, alpha));
}

/// scalar multiplier of S_alpha(t) on a mode with eigenvalue mu
inline double s_alpha_multiplier(double alpha, double mu, double t) {
    if (alpha == 1.0) return std::exp(-mu * t);
    return specfun::mittag_leffler(alpha, alpha, -mu * std::pow(t, alpha));
}

/// T_alpha(t) v: mode-wise E_alpha(-mu_n t^alpha); T_alpha(0) = I
inline ModeVector t_alpha_apply(double alpha, const SpectralOperator& a, double t,
                                const ModeVector& v) {
    if (!(alpha > 0.5) || !(alpha <= 1.0))
        throw std::invalid_argument("t_alpha_apply: alpha in (1/2, 1] required");
    if (!(t >= 0.0)) throw std::invalid_argument("t_alpha_apply: t >= 0 required");
    a.check_vector(v);
    ModeVector out(v.size());
    for (std::size_t n = 0; n < v.size(); ++n)
        out[n] = t_alpha_multiplier(alpha, a.eigenvalues[n], t) * v[n];
    return out;
}

/// S_alpha(t) v: mode-wise E_{alpha,alpha}(-mu_n t^alpha); S_alpha(0) = I / Gamma(alpha)
inline ModeVector s_alpha_apply(double alpha, const SpectralOperator& a, double t,
                                const ModeVector& v) {
    if (!(alpha > 0.5) || !(alpha <= 1.0))
        throw std::invalid_argument("s_alpha_apply: alpha in (1/2, 1] required");
    if (!(t >= 0.0)) throw std::invalid_argument("s_alpha_apply: t >= 0 required");
    a.check_vector(v);
    ModeVector out(v.size());
    for (std::size_t n = 0; n < v.size(); ++n)
        out[n] = s_alpha_multiplier(alpha, a.eigenvalues[n], t) * v[n];
    return out;
}

/// Direct quadrature of the subordination integrals:
/// unweighted: int M_alpha(r) e^{-mu t^alpha r} dr         (T_alpha route)
/// weighted:   int alpha r M_alpha(r) e^{-mu t^alpha r} dr (S_alpha route)
inline double subordination_oracle(double alpha, double mu, double t, bool weighted,
                                   const QuadratureRule& rule) {
    if (!(mu >= 0.0) || !(t > 0.0))
        throw std::invalid_argument("subordination_oracle: mu >= 0, t > 0 required");
    const double decay = mu * std::pow(t, alpha);
    return rule.integrate([&](double r) {
        const double m = specfun::mainardi(alpha, r);
        const double w = weighted ? alpha * r : 1.0;
        return w * m * std::exp(-decay * r);
    });
}

inline double subordination_oracle(double alpha, double mu, double t, bool weighted) {
    return subordination_oracle(alpha, mu, t, weighted, specfun::mainardi_rule(alpha));
}

struct NormBoundCheck {
    double observed;
    double bound;
};

/// operator-norm sample of the diagonal S_alpha(t) against M E_{alpha,alpha}(omega t^alpha)
inline NormBoundCheck s_alpha_norm_bound(double alpha, const SpectralOperator& a, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("s_alpha_norm_bound: t >= 0 required");
    double observed = 0.0;
    for (double mu : a.eigenvalues)
        observed = std::max(observed, std::abs(s_alpha_multiplier(alpha, mu, t)));
    const double arg = a.growth_omega * std::pow(t, alpha);
    const double bound =
        a.growth_m * (alpha == 1.0 ? std::exp(arg) : specfun::mittag_leffler(alpha, alpha, arg));
    return {observed, bound};
}

}  // namespace fsde::operators
