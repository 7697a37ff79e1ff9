#pragma once

// Independent first-order (alpha = 1) mild-solution solver used as a
// cross-check: exponential-integrator weights for the drift, left-point
// kernel samples for the noise, own Picard loop. Shares only the Problem
// and noise inputs with the fractional solver.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fsde/fbm.hpp"
#include "fsde/solver.hpp"

namespace fsde::classical {

using operators::ModeVector;
using solver::DelaySegment;
using solver::Problem;
using solver::Trajectory;

inline Trajectory solve(const Problem& problem, const TimeGrid& grid, const fbm::QFbmPath& noise,
                        double tol = 1e-10, std::size_t max_iter = 64) {
    if (problem.alpha != 1.0)
        throw std::invalid_argument("classical::solve: alpha = 1 problems only");
    solver::validate_problem(problem, grid);
    if (!(noise.grid == grid)) throw std::invalid_argument("classical::solve: grid mismatch");

    const std::size_t n = grid.n_steps;
    const std::size_t nm = problem.n_modes();
    const std::size_t m = solver::delay_steps(problem, grid);

    // exp(-mu dt l) lag tables and exact per-interval drift weights
    std::vector<double> decay((n + 1) * nm);
    std::vector<double> drift_w((n + 1) * nm);
    for (std::size_t mode = 0; mode < nm; ++mode) {
        const double mu = problem.op.eigenvalues[mode];
        for (std::size_t l = 0; l <= n; ++l) {
            decay[l * nm + mode] = std::exp(-mu * grid.dt * static_cast<double>(l));
            if (l >= 1) {
                // int_{t_{k-l}}^{t_{k-l+1}} e^{-mu (t_k - s)} ds
                drift_w[l * nm + mode] =
                    mu > 0.0 ? (std::exp(-mu * grid.dt * (static_cast<double>(l) - 1.0)) -
                                std::exp(-mu * grid.dt * static_cast<double>(l))) /
                                   mu
                             : grid.dt;
            }
        }
    }

    std::vector<double> h(n * nm);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t mode = 0; mode < nm; ++mode)
            h[j * nm + mode] = problem.noise_coeff(grid.t(j), mode);

    // stochastic term, iteration independent
    std::vector<ModeVector> stoch(n + 1, ModeVector(nm, 0.0));
    for (std::size_t k = 1; k <= n; ++k)
        for (std::size_t mode = 0; mode < nm; ++mode) {
            CompensatedSum acc;
            for (std::size_t j = 0; j < k; ++j)
                acc.add(decay[(k - j) * nm + mode] * h[j * nm + mode] * noise.increment(mode, j));
            stoch[k][mode] = acc.total();
        }

    auto initial_traj = [&]() {
        Trajectory t;
        t.grid = grid;
        t.delay_steps = m;
        t.n_modes = nm;
        t.data.assign(t.n_rows() * nm, 0.0);
        for (std::size_t i = 0; i <= m; ++i) {
            const double ti = -problem.delay + grid.dt * static_cast<double>(i);
            for (std::size_t mode = 0; mode < nm; ++mode)
                t.value(static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(m), mode) =
                    problem.initial(std::min(ti, 0.0), mode);
        }
        return t;
    };

    auto segment_of = [&](const Trajectory& traj, std::ptrdiff_t k, DelaySegment& seg) {
        seg.delay = problem.delay;
        seg.anchor = grid.dt * static_cast<double>(k);
        seg.dt = grid.dt;
        seg.n_modes = nm;
        seg.samples.resize((m + 1) * nm);
        for (std::size_t i = 0; i <= m; ++i)
            for (std::size_t mode = 0; mode < nm; ++mode)
                seg.samples[i * nm + mode] =
                    traj.value(k - static_cast<std::ptrdiff_t>(m) + static_cast<std::ptrdiff_t>(i),
                               mode);
    };

    Trajectory cur = initial_traj();
    std::vector<double> diffs;
    DelaySegment seg;
    for (std::size_t iter = 1; iter <= max_iter; ++iter) {
        std::vector<ModeVector> f(n, ModeVector(nm, 0.0));
        for (std::size_t j = 0; j < n; ++j) {
            segment_of(cur, static_cast<std::ptrdiff_t>(j), seg);
            f[j] = problem.drift(grid.t(j), seg);
        }
        Trajectory next = initial_traj();
        for (std::size_t k = 1; k <= n; ++k)
            for (std::size_t mode = 0; mode < nm; ++mode) {
                CompensatedSum acc;
                for (std::size_t j = 0; j < k; ++j)
                    acc.add(drift_w[(k - j) * nm + mode] * f[j][mode]);
                next.value(static_cast<std::ptrdiff_t>(k), mode) =
                    decay[k * nm + mode] * next.value(0, mode) + acc.total() + stoch[k][mode];
            }
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
            cur.seed = noise.master_seed;
            return cur;
        }
    }
    throw solver::PicardNonConvergence(std::move(diffs));
}

}  // namespace fsde::classical
