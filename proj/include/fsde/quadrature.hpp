#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fsde/common.hpp"

namespace fsde {

/// Nodes/weights for an integral over [0, upper_cutoff], nodes strictly increasing.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    double upper_cutoff = 0.0;

    QuadratureRule() = default;
    QuadratureRule(std::vector<double> n, std::vector<double> w, double cutoff)
        : nodes(std::move(n)), weights(std::move(w)), upper_cutoff(cutoff) {
        validate();
    }

    void validate() const {
        if (nodes.size() != weights.size())
            throw std::invalid_argument("QuadratureRule: nodes/weights size mismatch");
        if (!(upper_cutoff > 0.0))
            throw std::invalid_argument("QuadratureRule: upper_cutoff must be > 0");
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (!std::isfinite(nodes[i]) || !std::isfinite(weights[i]))
                throw std::invalid_argument("QuadratureRule: non-finite entry");
            if (nodes[i] < 0.0 || (i > 0 && nodes[i] <= nodes[i - 1]))
                throw std::invalid_argument("QuadratureRule: nodes must be >= 0 and strictly increasing");
        }
    }

    template <typename F>
    double integrate(F&& f) const {
        CompensatedSum acc;
        for (std::size_t i = 0; i < nodes.size(); ++i) acc.add(weights[i] * f(nodes[i]));
        return acc.total();
    }
};

namespace quad {

/// Gauss-Legendre nodes/weights on [-1, 1], Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
    x.assign(static_cast<std::size_t>(n), 0.0);
    w.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double xi = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = xi;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
            const double dx = p1 / dp;
            xi -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        x[static_cast<std::size_t>(i)] = xi;
        w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - xi * xi) * dp * dp);
    }
    // nodes come out decreasing; flip to increasing
    std::reverse(x.begin(), x.end());
    std::reverse(w.begin(), w.end());
}

/// integral of f over [a, b] with one n-point Gauss-Legendre panel.
template <typename F>
double gl_panel(F&& f, double a, double b, const std::vector<double>& x,
                const std::vector<double>& w) {
    const double h = 0.5 * (b - a);
    const double m = 0.5 * (a + b);
    CompensatedSum acc;
    for (std::size_t i = 0; i < x.size(); ++i) acc.add(w[i] * f(m + h * x[i]));
    return h * acc.total();
}

template <typename F>
double gl_panels(F&& f, const std::vector<double>& breakpoints, int nodes_per_panel) {
    std::vector<double> x, w;
    gauss_legendre(nodes_per_panel, x, w);
    CompensatedSum acc;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i + 1] <= breakpoints[i]) continue;
        acc.add(gl_panel(f, breakpoints[i], breakpoints[i + 1], x, w));
    }
    return acc.total();
}

/// breakpoints on [0, hi] geometrically refined toward 0 (levels octaves deep).
inline std::vector<double> geometric_breakpoints(double hi, int levels) {
    std::vector<double> bp;
    bp.push_back(0.0);
    for (int k = levels; k >= 1; --k) bp.push_back(hi * std::ldexp(1.0, -k));
    bp.push_back(hi);
    return bp;
}

/// Composite Gauss-Legendre rule for [0, R] built through the substitution
/// r = u/(1-u); panels in u-space are graded toward u = 0 so integrands with a
/// mild endpoint singularity (r^delta, delta > -1 + eps) are still handled.
inline QuadratureRule semi_infinite_rule(double r_cutoff, int nodes_per_panel = 24,
                                         int grading_levels = 28, int bulk_panels = 12) {
    if (!(r_cutoff > 0.0)) throw std::invalid_argument("semi_infinite_rule: cutoff must be > 0");
    const double u_max = r_cutoff / (1.0 + r_cutoff);

    std::vector<double> bp = geometric_breakpoints(u_max, grading_levels);
    // subdivide the top octave uniformly; that's where the integrand bulk sits
    const double top_lo = bp[bp.size() - 2];
    bp.pop_back();
    for (int j = 1; j <= bulk_panels; ++j)
        bp.push_back(top_lo + (u_max - top_lo) * j / bulk_panels);

    std::vector<double> gx, gw;
    gauss_legendre(nodes_per_panel, gx, gw);

    std::vector<double> nodes, weights;
    nodes.reserve(bp.size() * gx.size());
    weights.reserve(bp.size() * gx.size());
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        const double h = 0.5 * (bp[i + 1] - bp[i]);
        const double m = 0.5 * (bp[i + 1] + bp[i]);
        if (h <= 0.0) continue;
        for (std::size_t j = 0; j < gx.size(); ++j) {
            const double u = m + h * gx[j];
            const double om = 1.0 - u;
            nodes.push_back(u / om);
            weights.push_back(h * gw[j] / (om * om));  // Jacobian of r = u/(1-u)
        }
    }
    return QuadratureRule(std::move(nodes), std::move(weights), r_cutoff);
}

}  // namespace quad
}  // namespace fsde
