#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsde {

/// Dense symmetric matrix, row-major n x n.
struct SymMatrix {
    std::size_t n = 0;
    std::vector<double> a;

    explicit SymMatrix(std::size_t n_) : n(n_), a(n_ * n_, 0.0) {}
    double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

/// Lower Cholesky factor; throws naming the failing leading minor (1-based).
inline SymMatrix cholesky_factor(const SymMatrix& m) {
    const std::size_t n = m.n;
    SymMatrix L(n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = m(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
        if (!(d > 0.0))
            throw std::runtime_error("cholesky_factor: matrix not positive definite at leading minor " +
                                     std::to_string(j + 1) + " (pivot " + std::to_string(d) + ")");
        const double ljj = std::sqrt(d);
        L(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
            L(i, j) = s / ljj;
        }
    }
    return L;
}

/// y = L * x for lower-triangular L
inline void lower_tri_multiply(const SymMatrix& L, const std::vector<double>& x,
                               std::vector<double>& y) {
    const std::size_t n = L.n;
    y.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j <= i; ++j) s += L(i, j) * x[j];
        y[i] = s;
    }
}

/// Eigenvalues of a symmetric matrix via cyclic Jacobi rotations.
inline std::vector<double> jacobi_eigenvalues(SymMatrix m, int max_sweeps = 64) {
    const std::size_t n = m.n;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += m(i, j) * m(i, j);
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = m(p, q);
                if (std::abs(apq) < 1e-18) continue;
                const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double mkp = m(k, p), mkq = m(k, q);
                    m(k, p) = c * mkp - s * mkq;
                    m(k, q) = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double mpk = m(p, k), mqk = m(q, k);
                    m(p, k) = c * mpk - s * mqk;
                    m(q, k) = s * mpk + c * mqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = m(i, i);
    return ev;
}

}  // namespace fsde
