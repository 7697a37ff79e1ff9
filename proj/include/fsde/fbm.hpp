#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsde/common.hpp"
#include "fsde/fft.hpp"
#include "fsde/io.hpp"
#include "fsde/linalg.hpp"
#include "fsde/quadrature.hpp"
#include "fsde/specfun.hpp"

namespace fsde::fbm {

/// Hurst index, restricted to the long-memory regime (1/2, 1).
struct HurstParameter {
    double h;

    explicit HurstParameter(double value) : h(value) {
        if (!(value > 0.5) || !(value < 1.0))
            throw std::invalid_argument("HurstParameter: need 1/2 < H < 1, got " + std::to_string(value));
    }
};

enum class GeneratorKind { cholesky, circulant, volterra };

inline const char* generator_name(GeneratorKind k) {
    switch (k) {
        case GeneratorKind::cholesky: return "cholesky";
        case GeneratorKind::circulant: return "circulant";
        case GeneratorKind::volterra: return "volterra";
    }
    return "?";
}

/// Sampled scalar fBm trajectory; values[k] = beta^H(t_k), values[0] = 0.
struct FbmPath {
    HurstParameter hurst;
    TimeGrid grid;
    std::vector<double> values;
    std::uint64_t seed = 0;
    GeneratorKind generator_tag = GeneratorKind::circulant;

    double increment(std::size_t j) const { return values[j + 1] - values[j]; }
};

/// R_H(t, s) = 1/2 (t^2H + s^2H - |t-s|^2H)
inline double covariance(const HurstParameter& h, double t, double s) {
    if (!(t >= 0.0) || !(s >= 0.0)) throw std::invalid_argument("covariance: t, s >= 0 required");
    const double th = 2.0 * h.h;
    return 0.5 * (std::pow(t, th) + std::pow(s, th) - std::pow(std::abs(t - s), th));
}

/// c_H = [H(2H-1) / Beta(2-2H, H-1/2)]^{1/2}
inline double c_h(const HurstParameter& h) {
    const double H = h.h;
    const double log_beta = std::lgamma(2.0 - 2.0 * H) + std::lgamma(H - 0.5) - std::lgamma(1.5 - H);
    return std::sqrt(H * (2.0 * H - 1.0) / std::exp(log_beta));
}

/// dK_H/dt (t, s) = c_H (t/s)^{H-1/2} (t-s)^{H-3/2}, t > s > 0
inline double kernel_dkh_dt(const HurstParameter& h, double t, double s) {
    if (!(t > s) || !(s > 0.0)) throw std::domain_error("kernel_dkh_dt: need t > s > 0");
    const double H = h.h;
    return c_h(h) * std::pow(t / s, H - 0.5) * std::pow(t - s, H - 1.5);
}

namespace quadde {

/// n-point Gauss-Legendre rule stored on [0, 1]
inline QuadratureRule gl_unit_rule(int n) {
    std::vector<double> x, w;
    quad::gauss_legendre(n, x, w);
    std::vector<double> nodes(x.size()), weights(w.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        nodes[i] = 0.5 * (x[i] + 1.0);
        weights[i] = 0.5 * w[i];
    }
    return QuadratureRule(std::move(nodes), std::move(weights), 1.0);
}

/// rescale a [0, cutoff] rule onto [0, span]
template <typename F>
double integrate_scaled(const QuadratureRule& rule, double span, F&& f) {
    const double scale = span / rule.upper_cutoff;
    CompensatedSum acc;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc.add(rule.weights[i] * scale * f(rule.nodes[i] * scale));
    return acc.total();
}

}  // namespace quadde

/// K_H(t, s) = int_s^t dK_H/du (u, s) du, with the endpoint substitution
/// u = s + v^{1/(H-1/2)} that turns (u-s)^{H-3/2} du into a constant Jacobian.
inline double kernel_khs(const HurstParameter& h, double t, double s, const QuadratureRule& rule) {
    if (!(t > s) || !(s > 0.0)) throw std::domain_error("kernel_khs: need t > s > 0");
    const double H = h.h;
    const double q = 1.0 / (H - 0.5);
    const double v_max = std::pow(t - s, 1.0 / q);
    const double c = c_h(h) * q;
    return c * quadde::integrate_scaled(rule, v_max, [&](double v) {
        const double u = s + std::pow(v, q);
        return std::pow(u / s, H - 0.5);
    });
}

inline double kernel_khs(const HurstParameter& h, double t, double s, int gl_nodes = 24) {
    return kernel_khs(h, t, s, quadde::gl_unit_rule(gl_nodes));
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

inline constexpr std::size_t cholesky_max_steps = 4096;

/// Exact-covariance generator; factorization cached, paths cheap.
class CholeskyFbmGenerator {
public:
    CholeskyFbmGenerator(const HurstParameter& h, const TimeGrid& grid)
        : hurst_(h), grid_(grid), factor_(build_factor(h, grid)) {}

    FbmPath generate(std::uint64_t seed) const {
        const std::size_t n = grid_.n_steps;
        Rng rng(seed);
        std::vector<double> xi(n);
        rng.fill_normal(xi);
        std::vector<double> y;
        lower_tri_multiply(factor_, xi, y);
        std::vector<double> values(n + 1, 0.0);
        for (std::size_t k = 0; k < n; ++k) values[k + 1] = y[k];
        return FbmPath{hurst_, grid_, std::move(values), seed, GeneratorKind::cholesky};
    }

    const HurstParameter& hurst() const { return hurst_; }
    const TimeGrid& grid() const { return grid_; }

private:
    static SymMatrix build_factor(const HurstParameter& h, const TimeGrid& grid) {
        const std::size_t n = grid.n_steps;
        if (n > cholesky_max_steps)
            throw std::invalid_argument("CholeskyFbmGenerator: n_steps > " +
                                        std::to_string(cholesky_max_steps));
        SymMatrix r(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                r(i, j) = covariance(h, grid.t(i + 1), grid.t(j + 1));
        return cholesky_factor(r);
    }

    HurstParameter hurst_;
    TimeGrid grid_;
    SymMatrix factor_;
};

inline FbmPath generate_cholesky(const HurstParameter& h, const TimeGrid& grid, std::uint64_t seed) {
    return CholeskyFbmGenerator(h, grid).generate(seed);
}

/// fGn autocovariance gamma(k) in units of dt^{2H}
inline double fgn_autocovariance(const HurstParameter& h, std::size_t lag) {
    const double th = 2.0 * h.h;
    const double k = static_cast<double>(lag);
    return 0.5 * (std::pow(k + 1.0, th) - 2.0 * std::pow(k, th) +
                  std::pow(std::abs(k - 1.0), th));
}

/// Circulant-embedding generator (exact in distribution, O(n log n)).
/// The fGn block is padded to the next power of two; the first n increments
/// keep the exact joint law.
inline FbmPath generate_circulant(const HurstParameter& h, const TimeGrid& grid, std::uint64_t seed) {
    const std::size_t n = grid.n_steps;
    const std::size_t m = next_pow2(std::max<std::size_t>(n, 2));
    const std::size_t M = 2 * m;

    std::vector<std::complex<double>> c(M);
    for (std::size_t k = 0; k <= m; ++k) c[k] = fgn_autocovariance(h, k);
    for (std::size_t k = m + 1; k < M; ++k) c[k] = c[M - k];
    fft_pow2(c);

    double lambda_max = 0.0;
    for (const auto& z : c) lambda_max = std::max(lambda_max, z.real());
    std::vector<double> lambda(M);
    for (std::size_t k = 0; k < M; ++k) {
        const double lk = c[k].real();
        if (lk < -1e-12 * lambda_max)
            throw std::runtime_error("generate_circulant: negative embedding eigenvalue " +
                                     std::to_string(lk));
        lambda[k] = std::max(lk, 0.0);
    }

    // hermitian-symmetric spectral sample: E[Y_j Y_l] reproduces the circulant exactly
    Rng rng(seed);
    std::vector<std::complex<double>> w(M);
    const double inv_m = 1.0 / static_cast<double>(M);
    w[0] = std::sqrt(lambda[0] * inv_m) * rng.next_normal();
    w[m] = std::sqrt(lambda[m] * inv_m) * rng.next_normal();
    for (std::size_t k = 1; k < m; ++k) {
        const double scale = std::sqrt(0.5 * lambda[k] * inv_m);
        const double gr = rng.next_normal();
        const double gi = rng.next_normal();
        w[k] = {scale * gr, scale * gi};
        w[M - k] = std::conj(w[k]);
    }
    fft_pow2(w);

    const double dt_scale = std::pow(grid.dt, h.h);
    std::vector<double> values(n + 1, 0.0);
    CompensatedSum cum;
    for (std::size_t k = 0; k < n; ++k) {
        cum.add(w[k].real() * dt_scale);
        values[k + 1] = cum.total();
    }
    return FbmPath{h, grid, std::move(values), seed, GeneratorKind::circulant};
}

/// Volterra-representation generator: beta^H(t_k) = sum_j m_kj xi_j with
/// m_kj^2 = int_{t_j}^{t_{j+1}} K_H(t_k, s)^2 ds, so the marginal variance is
/// exact and the covariance converges with the grid. Kernel mass matrix is
/// computed once and shared across paths.
class VolterraFbmGenerator {
public:
    VolterraFbmGenerator(const HurstParameter& h, const TimeGrid& grid,
                         const QuadratureRule& rule = quadde::gl_unit_rule(16))
        : hurst_(h), grid_(grid) {
        build_masses(rule);
    }

    FbmPath generate(std::uint64_t seed) const {
        const std::size_t n = grid_.n_steps;
        Rng rng(seed);
        std::vector<double> xi(n);
        rng.fill_normal(xi);
        std::vector<double> values(n + 1, 0.0);
        for (std::size_t k = 1; k <= n; ++k) {
            CompensatedSum acc;
            const double* row = mass_row(k);
            for (std::size_t j = 0; j < k; ++j) acc.add(row[j] * xi[j]);
            values[k] = acc.total();
        }
        return FbmPath{hurst_, grid_, std::move(values), seed, GeneratorKind::volterra};
    }

    /// sqrt of the per-cell kernel L2 mass
    double mass(std::size_t k, std::size_t j) const { return mass_row(k)[j]; }

    const HurstParameter& hurst() const { return hurst_; }
    const TimeGrid& grid() const { return grid_; }

private:
    const double* mass_row(std::size_t k) const { return masses_.data() + (k - 1) * k / 2; }
    double* mass_row(std::size_t k) { return masses_.data() + (k - 1) * k / 2; }

    void build_masses(const QuadratureRule& rule) {
        const std::size_t n = grid_.n_steps;
        masses_.assign(n * (n + 1) / 2, 0.0);
        const double H = hurst_.h;
        auto k2 = [&](double t, double s) {
            const double v = kernel_khs(hurst_, t, s, rule);
            return v * v;
        };
        for (std::size_t k = 1; k <= n; ++k) {
            const double t = grid_.t(k);
            double* row = mass_row(k);
            for (std::size_t j = 0; j < k; ++j) {
                const double a = grid_.t(j);
                const double b = grid_.t(j + 1);
                double cell;
                if (j == 0 && j + 1 == k) {
                    const double mid = 0.5 * (a + b);
                    cell = cell_left_singular(k2, t, H, mid) +
                           cell_right_singular(k2, t, H, mid, b);
                } else if (j == 0) {
                    cell = cell_left_singular(k2, t, H, b);
                } else if (j + 1 == k) {
                    cell = cell_right_singular(k2, t, H, a, b);
                } else {
                    cell = quadde::integrate_scaled(cell_rule_, b - a,
                                                    [&](double u) { return k2(t, a + u); });
                }
                row[j] = std::sqrt(std::max(cell, 0.0));
            }
        }
    }

    // int_0^b K^2 ds with K^2 ~ s^{1-2H}: substitute s = w^{1/(2-2H)}
    template <typename F>
    double cell_left_singular(F&& k2, double t, double H, double b) const {
        const double p = 1.0 / (2.0 - 2.0 * H);
        const double w_max = std::pow(b, 1.0 / p);
        return quadde::integrate_scaled(cell_rule_, w_max, [&](double w) {
            const double s = std::pow(w, p);
            return p * k2(t, s) * std::pow(s, 2.0 * H - 1.0);
        });
    }

    // int_a^t K^2 ds with K^2 ~ (t-s)^{2H-1}: substitute t - s = v^{1/(2H)}
    template <typename F>
    double cell_right_singular(F&& k2, double t, double H, double a, double b) const {
        const double v_lo = std::pow(std::max(t - b, 0.0), 2.0 * H);
        const double v_hi = std::pow(t - a, 2.0 * H);
        const double inv_2h = 1.0 / (2.0 * H);
        return quadde::integrate_scaled(cell_rule_, v_hi - v_lo, [&](double dv) {
            const double v = v_lo + dv;
            const double s = t - std::pow(v, inv_2h);
            if (!(s > 0.0) || s >= t) return 0.0;
            return inv_2h * k2(t, s) * std::pow(t - s, 1.0 - 2.0 * H);
        });
    }

    HurstParameter hurst_;
    TimeGrid grid_;
    QuadratureRule cell_rule_ = quadde::gl_unit_rule(16);
    std::vector<double> masses_;
};

inline FbmPath generate_volterra(const HurstParameter& h, const TimeGrid& grid, std::uint64_t seed,
                                 const QuadratureRule& rule = quadde::gl_unit_rule(16)) {
    return VolterraFbmGenerator(h, grid, rule).generate(seed);
}

/// stateless adapter so circulant fits the shared-generator ensemble interface
class CirculantFbmGenerator {
public:
    CirculantFbmGenerator(const HurstParameter& h, const TimeGrid& grid) : hurst_(h), grid_(grid) {}
    FbmPath generate(std::uint64_t seed) const { return generate_circulant(hurst_, grid_, seed); }
    const HurstParameter& hurst() const { return hurst_; }
    const TimeGrid& grid() const { return grid_; }

private:
    HurstParameter hurst_;
    TimeGrid grid_;
};

inline FbmPath generate(GeneratorKind kind, const HurstParameter& h, const TimeGrid& grid,
                        std::uint64_t seed) {
    switch (kind) {
        case GeneratorKind::cholesky: return generate_cholesky(h, grid, seed);
        case GeneratorKind::circulant: return generate_circulant(h, grid, seed);
        case GeneratorKind::volterra: return generate_volterra(h, grid, seed);
    }
    throw std::logic_error("generate: bad kind");
}

// ---------------------------------------------------------------------------
// Q-fBm
// ---------------------------------------------------------------------------

/// B^H_Q in a truncated eigenbasis: mode n holds sqrt(lambda_n) beta_n^H with
/// mutually independent scalar paths (per-mode streams derived from the master seed).
struct QFbmPath {
    HurstParameter hurst;
    TimeGrid grid;
    std::vector<double> eigenvalues;
    std::vector<std::vector<double>> modes;  // scaled values, one vector per mode
    std::uint64_t master_seed = 0;

    std::size_t n_modes() const { return modes.size(); }
    double increment(std::size_t mode, std::size_t j) const {
        return modes[mode][j + 1] - modes[mode][j];
    }
};

inline QFbmPath generate_qfbm(const HurstParameter& h, const TimeGrid& grid,
                              const std::vector<double>& eigenvalues, std::uint64_t master_seed,
                              GeneratorKind kind = GeneratorKind::circulant) {
    if (eigenvalues.empty()) throw std::invalid_argument("generate_qfbm: need at least one mode");
    for (double l : eigenvalues)
        if (!(l >= 0.0)) throw std::invalid_argument("generate_qfbm: eigenvalues must be >= 0");

    QFbmPath q{h, grid, eigenvalues, {}, master_seed};
    q.modes.reserve(eigenvalues.size());
    for (std::size_t n = 0; n < eigenvalues.size(); ++n) {
        const std::uint64_t seed_n = derive_stream_seed(master_seed, n);
        FbmPath p = generate(kind, h, grid, seed_n);
        const double scale = std::sqrt(eigenvalues[n]);
        for (auto& v : p.values) v *= scale;
        q.modes.push_back(std::move(p.values));
    }
    return q;
}

/// Q-fBm sharing one precomputed scalar generator across modes (ensemble use).
template <typename Generator>
QFbmPath generate_qfbm_with(const Generator& gen, const std::vector<double>& eigenvalues,
                            std::uint64_t master_seed) {
    QFbmPath q{gen.hurst(), gen.grid(), eigenvalues, {}, master_seed};
    q.modes.reserve(eigenvalues.size());
    for (std::size_t n = 0; n < eigenvalues.size(); ++n) {
        FbmPath p = gen.generate(derive_stream_seed(master_seed, n));
        const double scale = std::sqrt(eigenvalues[n]);
        for (auto& v : p.values) v *= scale;
        q.modes.push_back(std::move(p.values));
    }
    return q;
}

// --- CSV export --------------------------------------------------------------

inline std::string to_csv(const FbmPath& path) {
    io::CsvWriter w(2);
    w.row({"t", "value"});
    for (std::size_t k = 0; k < path.values.size(); ++k)
        w.numeric_row(path.grid.t(k), {path.values[k]});
    return w.str();
}

inline std::string to_csv(const QFbmPath& q) {
    const std::size_t n_modes = q.n_modes();
    io::CsvWriter w(n_modes + 1);
    std::vector<std::string> header{"t"};
    for (std::size_t n = 1; n <= n_modes; ++n) header.push_back("mode_" + std::to_string(n));
    w.row(header);
    std::vector<double> cells(n_modes);
    for (std::size_t k = 0; k < q.grid.n_points(); ++k) {
        for (std::size_t n = 0; n < n_modes; ++n) cells[n] = q.modes[n][k];
        w.numeric_row(q.grid.t(k), cells);
    }
    return w.str();
}

}  // namespace fsde::fbm
