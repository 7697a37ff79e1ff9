#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fsde/common.hpp"
#include "fsde/fbm.hpp"
#include "fsde/quadrature.hpp"

namespace fsde::stochint {

/// Piecewise-constant operator-valued integrand on grid intervals, stored
/// diagonally: value(step, mode). eigenvalues are the lambda_n entering the
/// L_2^0 norm (all ones for scalar work).
struct StepIntegrand {
    TimeGrid grid;
    std::size_t n_modes = 1;
    std::vector<double> values;       // step-major: values[step * n_modes + mode]
    std::vector<double> eigenvalues;  // size n_modes

    StepIntegrand(TimeGrid g, std::size_t modes) : grid(g), n_modes(modes) {
        if (modes == 0) throw std::invalid_argument("StepIntegrand: need at least one mode");
        values.assign(grid.n_steps * modes, 0.0);
        eigenvalues.assign(modes, 1.0);
    }

    static StepIntegrand scalar(const TimeGrid& g, std::vector<double> per_step) {
        if (per_step.size() != g.n_steps)
            throw std::invalid_argument("StepIntegrand: per-step size mismatch");
        StepIntegrand s(g, 1);
        s.values = std::move(per_step);
        s.check_finite();
        return s;
    }

    static StepIntegrand constant(const TimeGrid& g, double c, std::size_t modes = 1) {
        StepIntegrand s(g, modes);
        for (auto& v : s.values) v = c;
        return s;
    }

    static StepIntegrand from_function(const TimeGrid& g, std::size_t modes,
                                       const std::function<double(double, std::size_t)>& f) {
        StepIntegrand s(g, modes);
        for (std::size_t k = 0; k < g.n_steps; ++k)
            for (std::size_t n = 0; n < modes; ++n) s.values[k * modes + n] = f(g.t(k), n);
        s.check_finite();
        return s;
    }

    double value(std::size_t step, std::size_t mode = 0) const {
        return values[step * n_modes + mode];
    }
    double& value(std::size_t step, std::size_t mode = 0) {
        return values[step * n_modes + mode];
    }

    /// ||phi(s)||^2_{L_2^0} on interval `step`
    double l20_norm_sq(std::size_t step) const {
        double s = 0.0;
        for (std::size_t n = 0; n < n_modes; ++n) {
            const double v = value(step, n);
            s += eigenvalues[n] * v * v;
        }
        return s;
    }

    void check_finite() const {
        for (double v : values)
            if (!std::isfinite(v)) throw std::invalid_argument("StepIntegrand: non-finite value");
    }
};

/// |H|-norm squared: alpha_H iint phi(r) phi(u) |r-u|^{2H-2} du dr, exact for
/// piecewise-constant phi. Per-cell closed form: alpha_H times the second
/// antiderivative of |x|^{2H-2} double-differenced, which collapses to
/// |x|^{2H}/2 corner sums.
inline double hnorm_sq(const fbm::HurstParameter& h, const StepIntegrand& phi) {
    if (phi.n_modes != 1) throw std::invalid_argument("hnorm_sq: scalar integrand required");
    const double th = 2.0 * h.h;
    const auto g = [&](double x) { return 0.5 * std::pow(std::abs(x), th); };
    const std::size_t n = phi.grid.n_steps;
    CompensatedSum acc;
    for (std::size_t i = 0; i < n; ++i) {
        const double ti = phi.grid.t(i), ti1 = phi.grid.t(i + 1);
        for (std::size_t j = 0; j < n; ++j) {
            const double tj = phi.grid.t(j), tj1 = phi.grid.t(j + 1);
            const double cell = g(ti1 - tj) - g(ti - tj) - g(ti1 - tj1) + g(ti - tj1);
            acc.add(phi.value(i) * phi.value(j) * cell);
        }
    }
    return acc.total();
}

/// (K_H^* phi)(s) = int_s^b phi(t) dK_H/dt (t, s) dt for piecewise-constant phi,
/// with the same endpoint substitution as kernel_khs. For phi = 1_[0,u] this is
/// K_H(u, s) 1_{s < u}.
inline double khstar_transform(const fbm::HurstParameter& h, const StepIntegrand& phi, double s,
                               const QuadratureRule& rule = fbm::quadde::gl_unit_rule(24)) {
    if (phi.n_modes != 1) throw std::invalid_argument("khstar_transform: scalar integrand required");
    const double b = phi.grid.horizon();
    if (!(s > 0.0) || !(s < b)) throw std::domain_error("khstar_transform: need 0 < s < b");

    const double H = h.h;
    const double q = 1.0 / (H - 0.5);
    const double c = fbm::c_h(h) * q;
    CompensatedSum acc;
    for (std::size_t i = 0; i < phi.grid.n_steps; ++i) {
        const double lo = std::max(phi.grid.t(i), s);
        const double hi = phi.grid.t(i + 1);
        if (hi <= lo || phi.value(i) == 0.0) continue;
        const double v_lo = std::pow(lo - s, 1.0 / q);
        const double v_hi = std::pow(hi - s, 1.0 / q);
        const double piece = fbm::quadde::integrate_scaled(rule, v_hi - v_lo, [&](double dv) {
            const double t = s + std::pow(v_lo + dv, q);
            return std::pow(t / s, H - 0.5);
        });
        acc.add(phi.value(i) * c * piece);
    }
    return acc.total();
}

/// Wiener integral of a deterministic step integrand against Q-fBm:
/// mode-wise forward Riemann sum over increments (valid for H > 1/2).
/// The noise modes already carry their sqrt(lambda_n) scaling.
inline std::vector<double> wiener_integral(const StepIntegrand& phi, const fbm::QFbmPath& noise) {
    if (!(phi.grid == noise.grid)) throw std::invalid_argument("wiener_integral: grid mismatch");
    if (phi.n_modes != noise.n_modes())
        throw std::invalid_argument("wiener_integral: mode count mismatch");
    std::vector<double> out(phi.n_modes, 0.0);
    for (std::size_t n = 0; n < phi.n_modes; ++n) {
        CompensatedSum acc;
        for (std::size_t k = 0; k < phi.grid.n_steps; ++k)
            acc.add(phi.value(k, n) * noise.increment(n, k));
        out[n] = acc.total();
    }
    return out;
}

/// scalar convenience against one fBm path (lambda = 1)
inline double wiener_integral_scalar(const StepIntegrand& phi, const fbm::FbmPath& path) {
    if (phi.n_modes != 1) throw std::invalid_argument("wiener_integral_scalar: scalar integrand");
    if (!(phi.grid == path.grid)) throw std::invalid_argument("wiener_integral_scalar: grid mismatch");
    CompensatedSum acc;
    for (std::size_t k = 0; k < phi.grid.n_steps; ++k)
        acc.add(phi.value(k) * path.increment(k));
    return acc.total();
}

/// right-hand side of the second-moment bound:
/// 2 H t^{2H-1} int_0^t ||phi(s)||^2_{L_2^0} ds (exact for step integrands)
inline double lemma21_bound(const fbm::HurstParameter& h, double t, const StepIntegrand& phi) {
    if (!(t >= 0.0) || t > phi.grid.horizon() * (1.0 + 1e-12))
        throw std::invalid_argument("lemma21_bound: t outside [0, b]");
    CompensatedSum acc;
    for (std::size_t k = 0; k < phi.grid.n_steps; ++k) {
        const double lo = phi.grid.t(k);
        if (lo >= t) break;
        const double hi = std::min(phi.grid.t(k + 1), t);
        acc.add((hi - lo) * phi.l20_norm_sq(k));
    }
    return 2.0 * h.h * std::pow(t, 2.0 * h.h - 1.0) * acc.total();
}

}  // namespace fsde::stochint
