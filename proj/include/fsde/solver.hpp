#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fsde/common.hpp"
#include "fsde/fbm.hpp"
#include "fsde/operators.hpp"
#include "fsde/specfun.hpp"

namespace fsde::solver {

using operators::ModeVector;
using operators::SpectralOperator;

/// history window x(t + s), s in [-r, 0], sampled at grid resolution;
/// samples run oldest (t - r) to newest (t), time-major over modes.
struct DelaySegment {
    double delay = 0.0;
    double anchor = 0.0;
    double dt = 0.0;
    std::size_t n_modes = 1;
    std::vector<double> samples;  // (steps + 1) * n_modes

    std::size_t steps() const { return samples.size() / n_modes - 1; }
    /// i = 0 is x(t - r), i = steps() is x(t)
    double at(std::size_t i, std::size_t mode = 0) const { return samples[i * n_modes + mode]; }
    /// value at the full delay lag, x(t - r)
    double delayed(std::size_t mode = 0) const { return samples[mode]; }
    /// newest value x(t)
    double current(std::size_t mode = 0) const {
        return samples[(samples.size() - n_modes) + mode];
    }
};

using DriftFn = std::function<ModeVector(double, const DelaySegment&)>;
using NoiseCoeffFn = std::function<double(double, std::size_t)>;   // h_n(t)
using InitialFn = std::function<double(double, std::size_t)>;      // phi_n(t), t in [-r, 0]

/// The full equation datum.
struct Problem {
    double alpha;
    double hurst;
    SpectralOperator op;
    double horizon;
    double delay;
    InitialFn initial;        // phi on [-r, 0]
    DriftFn drift;            // f(t, x_t)
    NoiseCoeffFn noise_coeff; // diagonal h(t)
    std::vector<double> eigenvalues;  // lambda_n of Q
    double lipschitz_hint = 0.0;      // C_f
    double integrability_exponent = 2.0;  // p, must exceed 1/(2 alpha - 1)

    std::size_t n_modes() const { return op.n_modes(); }
};

/// thrown when a hard hypothesis fails; reason_code is machine-readable
struct HypothesisViolation : std::runtime_error {
    std::string reason_code;
    HypothesisViolation(std::string code, const std::string& what)
        : std::runtime_error(what), reason_code(std::move(code)) {}
};

inline void validate_problem(const Problem& p, const TimeGrid& grid) {
    if (!(p.alpha > 0.5) || !(p.alpha <= 1.0))
        throw HypothesisViolation("alpha_range", "alpha must lie in (1/2, 1]");
    if (!(p.hurst > 0.5) || !(p.hurst < 1.0))
        throw HypothesisViolation("hurst_range", "Hurst parameter must lie in (1/2, 1)");
    if (p.integrability_exponent <= 1.0 / (2.0 * p.alpha - 1.0))
        throw HypothesisViolation("h1_violation",
                                  "integrability exponent p = " +
                                      std::to_string(p.integrability_exponent) +
                                      " must exceed 1/(2 alpha - 1) = " +
                                      std::to_string(1.0 / (2.0 * p.alpha - 1.0)));
    if (!(p.delay > 0.0)) throw HypothesisViolation("delay_range", "delay must be positive");
    const double steps = p.delay / grid.dt;
    if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
        throw HypothesisViolation("delay_grid",
                                  "delay must be an integer multiple of dt (r/dt = " +
                                      std::to_string(steps) + ")");
    if (std::abs(grid.horizon() - p.horizon) > 1e-9 * p.horizon)
        throw HypothesisViolation("horizon_grid", "grid horizon does not match the problem horizon");
    if (p.eigenvalues.size() != p.op.n_modes())
        throw HypothesisViolation("eigenvalue_count", "lambda_n count must match the mode count");
    for (double l : p.eigenvalues)
        if (!(l >= 0.0)) throw HypothesisViolation("eigenvalue_sign", "lambda_n must be >= 0");
    // spot-check the initial segment for finiteness
    for (int i = 0; i <= 8; ++i) {
        const double t = -p.delay * i / 8.0;
        for (std::size_t n = 0; n < p.n_modes(); ++n)
            if (!std::isfinite(p.initial(t, n)))
                throw HypothesisViolation("initial_segment", "initial segment is not finite");
    }
}

inline std::size_t delay_steps(const Problem& p, const TimeGrid& grid) {
    return static_cast<std::size_t>(std::llround(p.delay / grid.dt));
}

/// Mode-coefficient path on [-r, b] plus solve diagnostics.
struct Trajectory {
    TimeGrid grid;
    std::size_t delay_steps = 0;
    std::size_t n_modes = 1;
    std::vector<double> data;  // (delay_steps + n_steps + 1) * n_modes, row 0 is t = -r
    std::uint64_t seed = 0;
    std::size_t iterations = 0;
    std::vector<double> sup_differences;
    bool converged = true;

    std::size_t n_rows() const { return delay_steps + grid.n_steps + 1; }
    /// k runs from -delay_steps (t = -r) to n_steps (t = b)
    double value(std::ptrdiff_t k, std::size_t mode = 0) const {
        return data[static_cast<std::size_t>(k + static_cast<std::ptrdiff_t>(delay_steps)) * n_modes +
                    mode];
    }
    double& value(std::ptrdiff_t k, std::size_t mode = 0) {
        return data[static_cast<std::size_t>(k + static_cast<std::ptrdiff_t>(delay_steps)) * n_modes +
                    mode];
    }
    double time(std::ptrdiff_t k) const { return grid.dt * static_cast<double>(k); }

    /// Euclidean mode norm at index k
    double norm_at(std::ptrdiff_t k) const {
        double s = 0.0;
        for (std::size_t n = 0; n < n_modes; ++n) s += value(k, n) * value(k, n);
        return std::sqrt(s);
    }
};

struct PicardNonConvergence : std::runtime_error {
    std::vector<double> sup_differences;
    explicit PicardNonConvergence(std::vector<double> diffs)
        : std::runtime_error("picard_solve: no convergence after " +
                             std::to_string(diffs.size()) + " iterations (last diff " +
                             std::to_string(diffs.empty() ? 0.0 : diffs.back()) + ")"),
          sup_differences(std::move(diffs)) {}
};

/// Riemann-Liouville integral J^a by product integration: the kernel is
/// integrated exactly per interval, the integrand enters as the interval
/// average of its endpoint samples. Exact for constants.
inline std::vector<double> rl_integral(double alpha_j, const std::vector<double>& samples,
                                       double dt) {
    if (!(alpha_j > 0.0)) throw std::invalid_argument("rl_integral: order must be > 0");
    for (double v : samples)
        if (!std::isfinite(v)) throw std::invalid_argument("rl_integral: non-finite sample");
    const std::size_t n = samples.empty() ? 0 : samples.size() - 1;
    std::vector<double> out(samples.size(), 0.0);
    if (n == 0) return out;
    const double scale = std::pow(dt, alpha_j) / specfun::gamma(alpha_j + 1.0);
    std::vector<double> w(n + 1, 0.0);
    for (std::size_t l = 1; l <= n; ++l)
        w[l] = scale * (std::pow(static_cast<double>(l), alpha_j) -
                        std::pow(static_cast<double>(l - 1), alpha_j));
    for (std::size_t k = 1; k <= n; ++k) {
        CompensatedSum acc;
        for (std::size_t j = 0; j < k; ++j)
            acc.add(w[k - j] * 0.5 * (samples[j] + samples[j + 1]));
        out[k] = acc.total();
    }
    return out;
}

/// Shared tables for one (alpha, operator, grid) triple: exact singular
/// weights per lag and the S_alpha / T_alpha mode multipliers. Building these
/// once makes repeated convolutions and Monte Carlo ensembles cheap.
class MildSolver {
public:
    MildSolver(const Problem& problem, const TimeGrid& grid)
        : problem_(problem), grid_(grid), m_(solver::delay_steps(problem, grid)) {
        validate_problem(problem, grid);
        build_tables();
    }

    const Problem& problem() const { return problem_; }
    const TimeGrid& grid() const { return grid_; }
    std::size_t delay_steps() const { return m_; }

    /// sum_{j<k} w_{k-j} E_{aa}(-mu_n (t_k - s_j^mid)^a) f_n(s_j), all k
    std::vector<ModeVector> det_convolution(const std::vector<ModeVector>& f_samples) const {
        const std::size_t n = grid_.n_steps;
        const std::size_t nm = problem_.n_modes();
        if (f_samples.size() != n)
            throw std::invalid_argument("det_convolution: need one drift sample per interval");
        std::vector<ModeVector> out(n + 1, ModeVector(nm, 0.0));
        for (std::size_t k = 1; k <= n; ++k) {
            for (std::size_t mode = 0; mode < nm; ++mode) {
                CompensatedSum acc;
                for (std::size_t j = 0; j < k; ++j) {
                    const std::size_t l = k - j;
                    acc.add(w_lag_[l] * s_mult_[(l - 1) * nm + mode] * f_samples[j][mode]);
                }
                out[k][mode] = acc.total();
            }
        }
        return out;
    }

    /// sum_{j<k} (w_{k-j}/dt) E_{aa}(-mu_n (t_k - s_j^mid)^a) h_n(s_j) dB_n(t_j)
    std::vector<ModeVector> stoch_convolution(const fbm::QFbmPath& noise) const {
        if (!(noise.grid == grid_)) throw std::invalid_argument("stoch_convolution: grid mismatch");
        const std::size_t nm = problem_.n_modes();
        if (noise.n_modes() != nm)
            throw std::invalid_argument("stoch_convolution: noise mode count mismatch");
        const std::size_t n = grid_.n_steps;
        std::vector<ModeVector> out(n + 1, ModeVector(nm, 0.0));
        // h sampled at the left node of each interval
        std::vector<double> h(n * nm);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t mode = 0; mode < nm; ++mode)
                h[j * nm + mode] = problem_.noise_coeff(grid_.t(j), mode);
        const double inv_dt = 1.0 / grid_.dt;
        for (std::size_t k = 1; k <= n; ++k) {
            for (std::size_t mode = 0; mode < nm; ++mode) {
                CompensatedSum acc;
                for (std::size_t j = 0; j < k; ++j) {
                    const std::size_t l = k - j;
                    acc.add(w_lag_[l] * inv_dt * s_mult_[(l - 1) * nm + mode] *
                            h[j * nm + mode] * noise.increment(mode, j));
                }
                out[k][mode] = acc.total();
            }
        }
        return out;
    }

    enum class PicardStart { zero, hold_phi0 };

    Trajectory picard_solve(const fbm::QFbmPath& noise, double tol = 1e-10,
                            std::size_t max_iter = 64,
                            PicardStart start = PicardStart::zero) const {
        const auto stoch = stoch_convolution(noise);
        Trajectory traj = picard_from_stochastic(stoch, tol, max_iter, start);
        traj.seed = noise.master_seed;
        return traj;
    }

    /// Picard iteration with a precomputed stochastic convolution (it carries
    /// no x dependence, so it is shared by every iterate).
    Trajectory picard_from_stochastic(const std::vector<ModeVector>& stoch, double tol,
                                      std::size_t max_iter, PicardStart start) const {
        const std::size_t n = grid_.n_steps;
        const std::size_t nm = problem_.n_modes();

        Trajectory cur = make_initial_trajectory();
        if (start == PicardStart::hold_phi0) {
            for (std::size_t k = 1; k <= n; ++k)
                for (std::size_t mode = 0; mode < nm; ++mode)
                    cur.value(static_cast<std::ptrdiff_t>(k), mode) = cur.value(0, mode);
        }

        std::vector<double> diffs;
        for (std::size_t iter = 1; iter <= max_iter; ++iter) {
            Trajectory next = assemble(cur, stoch);
            double sup = 0.0;
            for (std::size_t k = 0; k <= n; ++k) {
                double d2 = 0.0;
                for (std::size_t mode = 0; mode < nm; ++mode) {
                    const double d = next.value(static_cast<std::ptrdiff_t>(k), mode) -
                                     cur.value(static_cast<std::ptrdiff_t>(k), mode);
                    d2 += d * d;
                }
                sup = std::max(sup, std::sqrt(d2));
            }
            diffs.push_back(sup);
            cur = std::move(next);
            if (sup <= tol) {
                cur.iterations = iter;
                cur.sup_differences = std::move(diffs);
                cur.converged = true;
                return cur;
            }
        }
        throw PicardNonConvergence(std::move(diffs));
    }

    /// x = T_alpha(.) phi(0) + det convolution of f(., x^{prev}) + stochastic part
    Trajectory assemble(const Trajectory& prev, const std::vector<ModeVector>& stoch) const {
        const std::size_t n = grid_.n_steps;
        const std::size_t nm = problem_.n_modes();
        std::vector<ModeVector> f_samples(n, ModeVector(nm, 0.0));
        DelaySegment seg;
        for (std::size_t j = 0; j < n; ++j) {
            extract_segment(prev, static_cast<std::ptrdiff_t>(j), seg);
            f_samples[j] = problem_.drift(grid_.t(j), seg);
            if (f_samples[j].size() != nm)
                throw std::invalid_argument("drift returned wrong mode count");
        }
        const auto det = det_convolution(f_samples);

        Trajectory out = make_initial_trajectory();
        for (std::size_t k = 1; k <= n; ++k)
            for (std::size_t mode = 0; mode < nm; ++mode)
                out.value(static_cast<std::ptrdiff_t>(k), mode) =
                    t_mult_[k * nm + mode] * out.value(0, mode) + det[k][mode] + stoch[k][mode];
        return out;
    }

    void extract_segment(const Trajectory& traj, std::ptrdiff_t k, DelaySegment& seg) const {
        const std::size_t nm = problem_.n_modes();
        seg.delay = problem_.delay;
        seg.anchor = grid_.dt * static_cast<double>(k);
        seg.dt = grid_.dt;
        seg.n_modes = nm;
        seg.samples.resize((m_ + 1) * nm);
        for (std::size_t i = 0; i <= m_; ++i) {
            const std::ptrdiff_t idx = k - static_cast<std::ptrdiff_t>(m_) + static_cast<std::ptrdiff_t>(i);
            for (std::size_t mode = 0; mode < nm; ++mode)
                seg.samples[i * nm + mode] = traj.value(idx, mode);
        }
    }

    /// trajectory holding phi on [-r, 0] and zero beyond
    Trajectory make_initial_trajectory() const {
        const std::size_t nm = problem_.n_modes();
        Trajectory traj;
        traj.grid = grid_;
        traj.delay_steps = m_;
        traj.n_modes = nm;
        traj.data.assign(traj.n_rows() * nm, 0.0);
        for (std::size_t i = 0; i <= m_; ++i) {
            const double t = -problem_.delay + grid_.dt * static_cast<double>(i);
            for (std::size_t mode = 0; mode < nm; ++mode)
                traj.value(static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(m_), mode) =
                    problem_.initial(std::min(t, 0.0), mode);
        }
        return traj;
    }

    double t_alpha_table(std::size_t k, std::size_t mode) const {
        return t_mult_[k * problem_.n_modes() + mode];
    }

private:
    void build_tables() {
        const std::size_t n = grid_.n_steps;
        const std::size_t nm = problem_.n_modes();
        const double dt_a = std::pow(grid_.dt, problem_.alpha);
        w_lag_.assign(n + 1, 0.0);
        for (std::size_t l = 1; l <= n; ++l)
            w_lag_[l] = dt_a *
                        (std::pow(static_cast<double>(l), problem_.alpha) -
                         std::pow(static_cast<double>(l - 1), problem_.alpha)) /
                        problem_.alpha;
        s_mult_.assign(n * nm, 0.0);
        t_mult_.assign((n + 1) * nm, 0.0);
        for (std::size_t mode = 0; mode < nm; ++mode) {
            const double mu = problem_.op.eigenvalues[mode];
            for (std::size_t l = 1; l <= n; ++l) {
                const double mid = (static_cast<double>(l) - 0.5) * grid_.dt;
                s_mult_[(l - 1) * nm + mode] = operators::s_alpha_multiplier(problem_.alpha, mu, mid);
            }
            for (std::size_t k = 0; k <= n; ++k)
                t_mult_[k * nm + mode] =
                    operators::t_alpha_multiplier(problem_.alpha, mu, grid_.t(k));
        }
    }

    Problem problem_;
    TimeGrid grid_;
    std::size_t m_;
    std::vector<double> w_lag_;   // exact per-interval integral of (t_k - s)^{a-1}, by lag
    std::vector<double> s_mult_;  // E_{a,a}(-mu ((l-1/2) dt)^a), lag-major
    std::vector<double> t_mult_;  // E_a(-mu t_k^a), time-major
};

/// free-function forms of the module operations

namespace detail {

inline Problem plumbing_problem(double alpha, const SpectralOperator& a, const TimeGrid& grid,
                                NoiseCoeffFn h, std::vector<double> lambda) {
    Problem p{alpha,
              0.75,
              a,
              grid.horizon(),
              grid.dt,
              [](double, std::size_t) { return 0.0; },
              [n = a.n_modes()](double, const DelaySegment&) { return ModeVector(n, 0.0); },
              std::move(h),
              std::move(lambda),
              0.0,
              2.0 / (2.0 * alpha - 1.0)};
    return p;
}

}  // namespace detail

inline std::vector<ModeVector> det_convolution(double alpha, const SpectralOperator& a,
                                               const std::vector<ModeVector>& f_samples,
                                               const TimeGrid& grid) {
    const Problem p = detail::plumbing_problem(
        alpha, a, grid, [](double, std::size_t) { return 0.0; },
        std::vector<double>(a.n_modes(), 1.0));
    return MildSolver(p, grid).det_convolution(f_samples);
}

inline std::vector<ModeVector> stoch_convolution(double alpha, const SpectralOperator& a,
                                                 const NoiseCoeffFn& h, const fbm::QFbmPath& noise) {
    const Problem p = detail::plumbing_problem(alpha, a, noise.grid, h, noise.eigenvalues);
    return MildSolver(p, noise.grid).stoch_convolution(noise);
}

inline Trajectory picard_solve(const Problem& problem, const TimeGrid& grid,
                               const fbm::QFbmPath& noise, double tol = 1e-10,
                               std::size_t max_iter = 64) {
    return MildSolver(problem, grid).picard_solve(noise, tol, max_iter);
}

/// end-to-end solve: Q-fBm from the seed, stochastic convolution once, Picard
inline Trajectory solve_mild(const Problem& problem, const TimeGrid& grid, std::uint64_t seed,
                             double tol = 1e-10, std::size_t max_iter = 64,
                             fbm::GeneratorKind noise_kind = fbm::GeneratorKind::circulant) {
    MildSolver solver(problem, grid);
    const fbm::QFbmPath noise = fbm::generate_qfbm(fbm::HurstParameter(problem.hurst), grid,
                                                   problem.eigenvalues, seed, noise_kind);
    return solver.picard_solve(noise, tol, max_iter);
}

/// Monte Carlo probe of the (f_2) ratio
///   int_0^b ||f(s, x_s) - f(s, y_s)||^2 ds / int_{-r}^b ||x - y||^2 ds
/// over random path pairs; the first pair differs only before b - r, where
/// the catalog drifts attain their Lipschitz constant exactly. Callers warn
/// when the returned maximum exceeds problem.lipschitz_hint.
inline double probe_lipschitz(const Problem& problem, std::size_t n_pairs = 200,
                              std::uint64_t seed = 0x9E3779B9) {
    const std::size_t nm = problem.n_modes();
    const std::size_t m = 8;  // probe segment resolution
    const double dt = problem.delay / static_cast<double>(m);
    const std::size_t rows =
        static_cast<std::size_t>(std::llround((problem.horizon + problem.delay) / dt)) + 1;
    Rng rng(seed);
    DelaySegment sx, sy;
    sx.delay = sy.delay = problem.delay;
    sx.dt = sy.dt = dt;
    sx.n_modes = sy.n_modes = nm;
    double worst = 0.0;
    for (std::size_t pair = 0; pair < n_pairs; ++pair) {
        std::vector<double> x(rows * nm), y(rows * nm);
        const bool structured = pair == 0;
        for (std::size_t i = 0; i < rows; ++i) {
            const double t = -problem.delay + dt * static_cast<double>(i);
            for (std::size_t n = 0; n < nm; ++n) {
                const double xv = rng.next_normal();
                double yv = rng.next_normal();
                if (structured && t > problem.horizon - problem.delay) yv = xv;
                x[i * nm + n] = xv;
                y[i * nm + n] = yv;
            }
        }
        CompensatedSum num;
        for (std::size_t i = m; i + 1 < rows; ++i) {
            sx.samples.assign(x.begin() + static_cast<std::ptrdiff_t>((i - m) * nm),
                              x.begin() + static_cast<std::ptrdiff_t>((i + 1) * nm));
            sy.samples.assign(y.begin() + static_cast<std::ptrdiff_t>((i - m) * nm),
                              y.begin() + static_cast<std::ptrdiff_t>((i + 1) * nm));
            const double t = -problem.delay + dt * static_cast<double>(i);
            sx.anchor = sy.anchor = t;
            const ModeVector fx = problem.drift(t, sx);
            const ModeVector fy = problem.drift(t, sy);
            double d = 0.0;
            for (std::size_t n = 0; n < nm; ++n) d += (fx[n] - fy[n]) * (fx[n] - fy[n]);
            num.add(d * dt);
        }
        CompensatedSum den;
        for (std::size_t i = 0; i + 1 < rows; ++i) {
            double d = 0.0;
            for (std::size_t n = 0; n < nm; ++n) {
                const double dv = x[i * nm + n] - y[i * nm + n];
                d += dv * dv;
            }
            den.add(d * dt);
        }
        if (den.total() > 0.0) worst = std::max(worst, num.total() / den.total());
    }
    return worst;
}

/// the m+1 samples x(t-r), ..., x(t) for a grid point t in [0, b]
inline DelaySegment segment_extract(const Trajectory& traj, double t) {
    const double steps = t / traj.grid.dt;
    if (t < -1e-12 || t > traj.grid.horizon() * (1.0 + 1e-12) ||
        std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
        throw std::invalid_argument("segment_extract: t must be a grid point in [0, b]");
    const std::ptrdiff_t k = static_cast<std::ptrdiff_t>(std::llround(steps));
    const std::size_t m = traj.delay_steps;
    DelaySegment seg;
    seg.delay = traj.grid.dt * static_cast<double>(m);
    seg.anchor = t;
    seg.dt = traj.grid.dt;
    seg.n_modes = traj.n_modes;
    seg.samples.resize((m + 1) * traj.n_modes);
    for (std::size_t i = 0; i <= m; ++i)
        for (std::size_t mode = 0; mode < traj.n_modes; ++mode)
            seg.samples[i * traj.n_modes + mode] =
                traj.value(k - static_cast<std::ptrdiff_t>(m) + static_cast<std::ptrdiff_t>(i), mode);
    return seg;
}

/// sup-norm residual of d/dt J^{1-alpha}(x - x(0)) = A x + f for a
/// deterministic (h = 0) trajectory; central difference quotient inside.
/// The x'(t) ~ t^{alpha-1} boundary layer at t = 0 would dominate any sup, so
/// the first `skip_fraction` of the horizon is excluded from the measurement.
inline double caputo_residual(const Trajectory& traj, const Problem& problem,
                              double skip_fraction = 0.125) {
    const std::size_t n = traj.grid.n_steps;
    const std::size_t nm = traj.n_modes;
    MildSolver solver(problem, traj.grid);
    // drift samples along the trajectory
    std::vector<ModeVector> f(n, ModeVector(nm, 0.0));
    DelaySegment seg;
    for (std::size_t j = 0; j < n; ++j) {
        solver.extract_segment(traj, static_cast<std::ptrdiff_t>(j), seg);
        f[j] = problem.drift(traj.grid.t(j), seg);
    }
    const std::size_t k_min =
        std::max<std::size_t>(1, static_cast<std::size_t>(skip_fraction * static_cast<double>(n)));
    double worst = 0.0;
    std::vector<double> shifted(n + 1);
    for (std::size_t mode = 0; mode < nm; ++mode) {
        for (std::size_t k = 0; k <= n; ++k)
            shifted[k] = traj.value(static_cast<std::ptrdiff_t>(k), mode) - traj.value(0, mode);
        const auto j_int = rl_integral(1.0 - problem.alpha, shifted, traj.grid.dt);
        for (std::size_t k = k_min; k + 1 <= n; ++k) {
            const double dj = (j_int[k + 1] - j_int[k - 1]) / (2.0 * traj.grid.dt);
            const double rhs = -problem.op.eigenvalues[mode] *
                                   traj.value(static_cast<std::ptrdiff_t>(k), mode) +
                               f[k][mode];
            worst = std::max(worst, std::abs(dj - rhs));
        }
    }
    return worst;
}

}  // namespace fsde::solver
