#pragma once

#include <atomic>
#include <cmath>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "fsde/classical.hpp"
#include "fsde/fbm.hpp"
#include "fsde/heat.hpp"
#include "fsde/operators.hpp"
#include "fsde/solver.hpp"
#include "fsde/specfun.hpp"
#include "fsde/stats.hpp"
#include "fsde/stochint.hpp"

namespace fsde::verify {

struct CheckResult {
    std::string name;
    double observed = 0.0;
    double target = 0.0;    // bound or tolerance the observation is held against
    bool pass = false;
    std::string detail;
};

namespace detail {

/// run fn(i) for i in [0, n) on `workers` threads; fn writes only to slot i
inline void parallel_for(std::size_t n, std::size_t workers,
                         const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const std::size_t count = std::min(workers, n);
    pool.reserve(count);
    for (std::size_t w = 0; w < count; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

inline std::size_t default_workers() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : hc;
}

inline void add(std::vector<CheckResult>& out, std::string name, double observed, double target,
                bool pass, std::string detail = {}) {
    out.push_back({std::move(name), observed, target, pass, std::move(detail)});
}

/// |observed - want| against k standard errors
inline void add_se_check(std::vector<CheckResult>& out, std::string name, double observed,
                         double want, double se, double k = 3.0) {
    const double err = std::abs(observed - want);
    add(out, std::move(name), err, k * se, err <= k * se,
        "observed " + io::format_double(observed) + " want " + io::format_double(want));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// specfun
// ---------------------------------------------------------------------------

inline std::vector<CheckResult> run_specfun_suite() {
    using namespace specfun;
    std::vector<CheckResult> out;

    for (double alpha : {0.55, 0.6, 0.75, 0.9}) {
        const QuadratureRule rule = mainardi_rule(alpha);
        for (double delta : {0.0, 0.5, 1.0, 2.0, 3.0}) {
            const double got = mainardi_moment(alpha, delta, rule);
            const double want = gamma(delta + 1.0) / gamma(alpha * delta + 1.0);
            const double err = std::abs(got - want);
            detail::add(out,
                        "specfun/rm_moment[a=" + std::to_string(alpha) +
                            ",d=" + std::to_string(delta) + "]",
                        err, 1e-6, err <= 1e-6);
        }
        for (double lambda : {0.0, 0.5, 1.0, 2.0, 5.0}) {
            const auto [lhs, rhs] = mainardi_laplace_check(alpha, lambda, rule);
            const double err = std::abs(lhs - rhs);
            detail::add(out,
                        "specfun/lap_identity[a=" + std::to_string(alpha) +
                            ",l=" + std::to_string(lambda) + "]",
                        err, 1e-6, err <= 1e-6);
        }
        const double mass = mainardi_moment(alpha, 0.0, rule);
        detail::add(out, "specfun/one_identity[a=" + std::to_string(alpha) + "]",
                    std::abs(mass - 1.0), 1e-8, std::abs(mass - 1.0) <= 1e-8);
    }

    for (double alpha : {0.6, 0.75}) {
        for (double lambda : {0.5, 1.0, 2.0}) {
            const auto [lhs, rhs] = mainardi_scaled_laplace_check(alpha, lambda);
            const double err = std::abs(lhs - rhs);
            detail::add(out,
                        "specfun/L_identity[a=" + std::to_string(alpha) +
                            ",l=" + std::to_string(lambda) + "]",
                        err, 1e-5, err <= 1e-5);
        }
    }

    // series consistency against the direct 500-term summation
    for (double alpha : {0.55, 0.75, 1.0}) {
        for (double beta : {alpha, 1.0}) {
            double worst = 0.0;
            for (double z = -5.0; z <= 5.0; z += 0.25) {
                CompensatedSum series;
                double zpow = 1.0;
                for (int n = 0; n < 500; ++n) {
                    series.add(zpow * recip_gamma(alpha * n + beta));
                    zpow *= z;
                    if (zpow == 0.0 || !std::isfinite(zpow)) break;
                }
                const double want = series.total();
                const double got = mittag_leffler(alpha, beta, z);
                worst = std::max(worst, std::abs(got - want) / std::max(std::abs(want), 1e-300));
            }
            detail::add(out,
                        "specfun/ml_series_consistency[a=" + std::to_string(alpha) +
                            ",b=" + std::to_string(beta) + "]",
                        worst, 1e-10, worst <= 1e-10);
        }
    }

    {
        double worst = 0.0;
        for (double z = -10.0; z <= 10.0; z += 0.25)
            worst = std::max(worst, std::abs(specfun::mittag_leffler(1.0, 1.0, z) - std::exp(z)) /
                                        std::exp(z));
        detail::add(out, "specfun/ml_exp_identity", worst, 1e-12, worst <= 1e-12);
    }

    for (double alpha : {0.55, 0.75, 0.9, 1.0}) {
        bool ok = true;
        double prev = specfun::mittag_leffler(alpha, alpha, 0.0);
        for (double x = 0.1; x <= 50.0 + 1e-9; x += 0.1) {
            const double cur = specfun::mittag_leffler(alpha, alpha, -x);
            ok = ok && cur > 0.0 && cur < prev;
            prev = cur;
        }
        detail::add(out, "specfun/ml_positive_decreasing[a=" + std::to_string(alpha) + "]",
                    ok ? 1.0 : 0.0, 1.0, ok);
    }
    return out;
}

// ---------------------------------------------------------------------------
// fbm
// ---------------------------------------------------------------------------

inline std::vector<CheckResult> run_fbm_suite(std::size_t n_paths = 2000, std::size_t n_steps = 512) {
    using namespace fbm;
    std::vector<CheckResult> out;
    const TimeGrid grid(1.0 / static_cast<double>(n_steps), n_steps);
    const std::size_t workers = detail::default_workers();

    // sampled (t, s) pairs in grid indices (b = 1)
    const std::pair<std::size_t, std::size_t> pairs[6] = {
        {n_steps, n_steps},         {n_steps, n_steps / 2},     {n_steps / 2, n_steps / 4},
        {3 * n_steps / 4, n_steps / 4}, {n_steps / 4, n_steps / 4}, {n_steps, n_steps / 4}};
    const std::size_t marg_idx[3] = {n_steps / 4, n_steps / 2, n_steps};

    for (double H : {0.6, 0.75, 0.9}) {
        const HurstParameter h(H);

        // PSD of the sampled covariance matrix
        {
            const std::size_t n = 64;
            SymMatrix r(n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    r(i, j) = covariance(h, (i + 1) / 64.0, (j + 1) / 64.0);
            auto ev = jacobi_eigenvalues(r);
            double lo = ev[0], hi = ev[0];
            for (double e : ev) {
                lo = std::min(lo, e);
                hi = std::max(hi, e);
            }
            detail::add(out, "fbm/psd[h=" + std::to_string(H) + "]", lo / hi, -1e-10,
                        lo >= -1e-10 * hi);
        }

        const CholeskyFbmGenerator chol(h, grid);
        const VolterraFbmGenerator volt(h, grid);
        const CirculantFbmGenerator circ(h, grid);

        // one ensemble per generator: store only the sampled indices
        std::vector<std::size_t> keep;
        for (const auto& p : pairs) {
            keep.push_back(p.first);
            keep.push_back(p.second);
        }
        for (std::size_t i : marg_idx) keep.push_back(i);
        std::sort(keep.begin(), keep.end());
        keep.erase(std::unique(keep.begin(), keep.end()), keep.end());

        auto sample = [&](auto& gen, std::uint64_t salt) {
            std::vector<std::vector<double>> vals(keep.size(), std::vector<double>(n_paths));
            detail::parallel_for(n_paths, workers, [&](std::size_t p) {
                const FbmPath path = gen.generate(derive_stream_seed(salt, p));
                for (std::size_t i = 0; i < keep.size(); ++i) vals[i][p] = path.values[keep[i]];
            });
            return vals;
        };
        auto index_of = [&](std::size_t k) {
            return static_cast<std::size_t>(
                std::lower_bound(keep.begin(), keep.end(), k) - keep.begin());
        };

        const auto vc = sample(chol, 1700 + static_cast<std::uint64_t>(100 * H));
        const auto vv = sample(volt, 2900 + static_cast<std::uint64_t>(100 * H));
        const auto vf = sample(circ, 3600 + static_cast<std::uint64_t>(100 * H));

        const struct {
            const char* name;
            const std::vector<std::vector<double>>* vals;
        } gens[3] = {{"cholesky", &vc}, {"volterra", &vv}, {"circulant", &vf}};

        for (const auto& g : gens) {
            for (const auto& [ki, kj] : pairs) {
                const auto& a = (*g.vals)[index_of(ki)];
                const auto& b = (*g.vals)[index_of(kj)];
                std::vector<double> prod(n_paths);
                for (std::size_t p = 0; p < n_paths; ++p) prod[p] = a[p] * b[p];
                const auto s = stats::summarize(prod);
                const double want = covariance(h, grid.t(ki), grid.t(kj));
                detail::add_se_check(out,
                                     "fbm/cov[h=" + std::to_string(H) + "," + g.name + ",t=" +
                                         io::format_double(grid.t(ki)) + ",s=" +
                                         io::format_double(grid.t(kj)) + "]",
                                     s.mean, want, s.std_error_of_mean());
            }
        }

        // pairwise two-sample KS of marginals at b/4, b/2, b (1% level)
        const struct {
            const char* a;
            const char* b;
            const std::vector<std::vector<double>>* va;
            const std::vector<std::vector<double>>* vb;
        } dueling[3] = {{"chol", "volt", &vc, &vv},
                        {"chol", "circ", &vc, &vf},
                        {"volt", "circ", &vv, &vf}};
        for (const auto& d : dueling) {
            for (std::size_t t : marg_idx) {
                const auto ks = stats::ks_two_sample((*d.va)[index_of(t)], (*d.vb)[index_of(t)]);
                detail::add(out,
                            "fbm/marginal_ks[h=" + std::to_string(H) + "," + d.a + "-" + d.b +
                                ",t=" + io::format_double(grid.t(t)) + "]",
                            ks.p_value, 0.01, ks.p_value > 0.01);
            }
        }

        // increment stationarity at two disjoint windows (circulant ensemble)
        {
            std::vector<double> d1(n_paths), d2(n_paths);
            detail::parallel_for(n_paths, workers, [&](std::size_t p) {
                const FbmPath path = circ.generate(derive_stream_seed(4000, p));
                d1[p] = path.values[n_steps / 4] - path.values[n_steps / 8];
                d2[p] = path.values[7 * n_steps / 8] - path.values[6 * n_steps / 8];
            });
            const auto s1 = stats::summarize(d1);
            const auto s2 = stats::summarize(d2);
            detail::add_se_check(
                out, "fbm/increment_stationarity[h=" + std::to_string(H) + "]", s1.variance,
                s2.variance,
                std::hypot(s1.std_error_of_variance(), s2.std_error_of_variance()));
        }

        // self-similarity surrogate: Var beta(t)/t^{2H} flat over t
        {
            std::vector<double> v25(n_paths), v50(n_paths), v100(n_paths);
            detail::parallel_for(n_paths, workers, [&](std::size_t p) {
                const FbmPath path = circ.generate(derive_stream_seed(5000, p));
                v25[p] = path.values[n_steps / 4];
                v50[p] = path.values[n_steps / 2];
                v100[p] = path.values[n_steps];
            });
            const double th = 2.0 * H;
            const auto s25 = stats::summarize(v25);
            const auto s50 = stats::summarize(v50);
            const auto s100 = stats::summarize(v100);
            const double r1 = s25.variance / std::pow(0.25, th);
            const double r2 = s50.variance / std::pow(0.5, th);
            const double r3 = s100.variance;
            const double se = std::sqrt(s25.std_error_of_variance() / std::pow(0.25, th) *
                                            s25.std_error_of_variance() / std::pow(0.25, th) +
                                        s100.std_error_of_variance() * s100.std_error_of_variance());
            detail::add_se_check(out, "fbm/self_similarity[h=" + std::to_string(H) + ",t=0.25]", r1,
                                 r3, se);
            detail::add_se_check(out, "fbm/self_similarity[h=" + std::to_string(H) + ",t=0.5]", r2,
                                 r3, se);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// stochint
// ---------------------------------------------------------------------------

inline std::vector<CheckResult> run_stochint_suite(std::size_t n_paths = 5000,
                                                   std::size_t n_steps = 512) {
    using namespace stochint;
    std::vector<CheckResult> out;
    const TimeGrid grid(1.0 / static_cast<double>(n_steps), n_steps);
    const std::size_t workers = detail::default_workers();
    const std::vector<double> lambda3 = {1.0, 0.25, 1.0 / 9.0};

    for (double H : {0.6, 0.75, 0.9}) {
        const fbm::HurstParameter h(H);

        StepIntegrand constant = StepIntegrand::constant(grid, 1.0);
        StepIntegrand ramp(grid, 1);
        for (std::size_t k = 0; k < n_steps; ++k) ramp.value(k) = grid.t(k);
        StepIntegrand three(grid, 3);
        three.eigenvalues = lambda3;
        for (std::size_t k = 0; k < n_steps; ++k)
            for (std::size_t n = 0; n < 3; ++n)
                three.value(k, n) = 1.0 + 0.5 * static_cast<double>(n) * grid.t(k);

        // shared noise ensembles
        const fbm::QFbmPath proto{h, grid, {}, {}, 0};
        std::vector<fbm::QFbmPath> noise1(n_paths, proto), noise3(n_paths, proto);
        detail::parallel_for(n_paths, workers, [&](std::size_t p) {
            noise1[p] = fbm::generate_qfbm(h, grid, {1.0},
                                           derive_stream_seed(9000 + int(100 * H), p));
            noise3[p] = fbm::generate_qfbm(h, grid, lambda3,
                                           derive_stream_seed(9500 + int(100 * H), p));
        });

        const struct {
            const char* name;
            const StepIntegrand* phi;
            const std::vector<fbm::QFbmPath>* noise;
        } cases[3] = {{"constant", &constant, &noise1},
                      {"ramp", &ramp, &noise1},
                      {"three_mode", &three, &noise3}};

        for (double t : {0.5, 1.0}) {
            const std::size_t cut =
                static_cast<std::size_t>(t * static_cast<double>(n_steps) + 0.5);
            for (const auto& c : cases) {
                StepIntegrand masked = *c.phi;
                for (std::size_t k = cut; k < n_steps; ++k)
                    for (std::size_t n = 0; n < masked.n_modes; ++n) masked.value(k, n) = 0.0;
                std::vector<double> norms(n_paths);
                detail::parallel_for(n_paths, workers, [&](std::size_t p) {
                    const auto x = wiener_integral(masked, (*c.noise)[p]);
                    double s = 0.0;
                    for (double v : x) s += v * v;
                    norms[p] = s;
                });
                const auto s = stats::summarize(norms);
                const double bound = lemma21_bound(h, t, *c.phi);
                detail::add(out,
                            "stochint/lemma21[h=" + std::to_string(H) + "," + c.name +
                                ",t=" + io::format_double(t) + "]",
                            s.mean, bound + 3.0 * s.std_error_of_mean(),
                            s.mean <= bound + 3.0 * s.std_error_of_mean(),
                            "bound " + io::format_double(bound));

                if (c.phi->n_modes == 1) {
                    const double want = hnorm_sq(h, masked);
                    detail::add_se_check(out,
                                         "stochint/isometry[h=" + std::to_string(H) + "," +
                                             c.name + ",t=" + io::format_double(t) + "]",
                                         s.mean, want, s.std_error_of_mean());
                }
            }
        }

        // sharpness of the constant-integrand ratio at t = 1
        {
            std::vector<double> norms(n_paths);
            detail::parallel_for(n_paths, workers, [&](std::size_t p) {
                const auto x = wiener_integral(constant, noise1[p]);
                norms[p] = x[0] * x[0];
            });
            const double ratio = stats::summarize(norms).mean / lemma21_bound(h, 1.0, constant);
            const double lo = 1.0 / (2.0 * H) - 0.1;
            detail::add(out, "stochint/sharpness[h=" + std::to_string(H) + "]", ratio, lo,
                        ratio > lo && ratio < 1.0,
                        "expected within (" + io::format_double(lo) + ", 1)");
        }

        // K* of indicators against the kernel on a (u, s) sample grid
        {
            double worst = 0.0;
            for (double u : {0.5, 0.75, 1.0}) {
                StepIntegrand ind(grid, 1);
                for (std::size_t k = 0; k < n_steps; ++k)
                    ind.value(k) = grid.t(k + 1) <= u + 1e-12 ? 1.0 : 0.0;
                for (double s : {0.1, 0.25, 0.4}) {
                    const double got = khstar_transform(h, ind, s);
                    const double want = s < u ? fbm::kernel_khs(h, u, s, fbm::quadde::gl_unit_rule(48))
                                              : 0.0;
                    worst = std::max(worst, std::abs(got - want));
                }
            }
            detail::add(out, "stochint/khstar_vs_kernel[h=" + std::to_string(H) + "]", worst, 1e-5,
                        worst <= 1e-5);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// operators
// ---------------------------------------------------------------------------

inline std::vector<CheckResult> run_operators_suite() {
    using namespace operators;
    std::vector<CheckResult> out;

    for (double alpha : {0.6, 0.75, 0.9}) {
        const QuadratureRule rule = specfun::mainardi_rule(alpha);
        double worst_t = 0.0, worst_s = 0.0;
        for (double mu : {1.0, 4.0, 25.0}) {
            for (double t : {0.1, 1.0, 2.0}) {
                worst_t = std::max(worst_t, std::abs(t_alpha_multiplier(alpha, mu, t) -
                                                     subordination_oracle(alpha, mu, t, false, rule)));
                worst_s = std::max(worst_s, std::abs(s_alpha_multiplier(alpha, mu, t) -
                                                     subordination_oracle(alpha, mu, t, true, rule)));
            }
        }
        detail::add(out, "operators/subordination_T[a=" + std::to_string(alpha) + "]", worst_t,
                    1e-5, worst_t <= 1e-5);
        detail::add(out, "operators/subordination_S[a=" + std::to_string(alpha) + "]", worst_s,
                    1e-5, worst_s <= 1e-5);
    }

    // exponential bound with omega = 0: E_alpha(-x) <= 1
    for (double alpha : {0.6, 0.75, 0.9}) {
        double worst = 0.0;
        for (double x = 0.0; x <= 60.0; x += 0.25)
            worst = std::max(worst, specfun::mittag_leffler(alpha, 1.0, -x));
        detail::add(out, "operators/exp_bound[a=" + std::to_string(alpha) + "]", worst, 1.0,
                    worst <= 1.0 + 1e-12);
    }

    // S_alpha norm bound at every sampled (alpha, t)
    {
        const SpectralOperator heat_like({1.0, 4.0, 9.0, 16.0, 25.0});
        bool all = true;
        double margin = 1e300;
        for (double alpha : {0.6, 0.75, 0.9}) {
            for (double t : {0.0, 0.1, 1.0, 5.0}) {
                const auto [obs, bound] = s_alpha_norm_bound(alpha, heat_like, t);
                all = all && obs <= bound * (1.0 + 1e-12);
                margin = std::min(margin, bound - obs);
            }
        }
        detail::add(out, "operators/remark32_bound", margin, 0.0, all,
                    "min(bound - observed) over the sample");
    }

    // alpha = 1 degeneration to the semigroup
    {
        const SpectralOperator a({1.0, 4.0, 9.0});
        const ModeVector v{1.0, -0.5, 0.25};
        double worst = 0.0;
        for (double t : {0.0, 0.1, 0.5, 1.0, 3.0}) {
            const auto sg = semigroup_apply(a, t, v);
            const auto ta = t_alpha_apply(1.0, a, t, v);
            const auto sa = s_alpha_apply(1.0, a, t, v);
            for (std::size_t n = 0; n < 3; ++n) {
                worst = std::max(worst, std::abs(ta[n] - sg[n]));
                worst = std::max(worst, std::abs(sa[n] - sg[n]));
            }
        }
        detail::add(out, "operators/alpha1_reduction", worst, 1e-12, worst <= 1e-12);
    }

    // strong continuity surrogate under grid refinement
    {
        auto max_jump = [](std::size_t n) {
            double worst = 0.0;
            for (std::size_t k = n / 4; k < n; ++k)
                worst = std::max(worst,
                                 std::abs(t_alpha_multiplier(0.75, 9.0, (k + 1.0) / n) -
                                          t_alpha_multiplier(0.75, 9.0, static_cast<double>(k) / n)));
            return worst;
        };
        const double coarse = max_jump(64), fine = max_jump(128);
        detail::add(out, "operators/strong_continuity", fine / coarse, 0.6, fine <= 0.6 * coarse,
                    "jump ratio under factor-2 refinement");
    }
    return out;
}

// ---------------------------------------------------------------------------
// solver
// ---------------------------------------------------------------------------

namespace detail {

inline solver::Problem relaxation_problem(double alpha) {
    solver::Problem p{alpha,
                      0.7,
                      operators::SpectralOperator({1.0}),
                      1.0,
                      0.25,
                      [](double, std::size_t) { return 0.0; },
                      [](double, const solver::DelaySegment&) {
                          return operators::ModeVector{1.0};
                      },
                      [](double, std::size_t) { return 0.0; },
                      {1.0},
                      0.0,
                      8.0};
    return p;
}

inline fbm::QFbmPath zero_noise(const TimeGrid& grid, std::size_t modes = 1) {
    fbm::QFbmPath q{fbm::HurstParameter(0.7), grid, std::vector<double>(modes, 1.0), {}, 0};
    q.modes.assign(modes, std::vector<double>(grid.n_points(), 0.0));
    return q;
}

}  // namespace detail

inline std::vector<CheckResult> run_solver_suite(std::size_t alpha1_paths = 100) {
    using namespace solver;
    using operators::ModeVector;
    using operators::SpectralOperator;
    std::vector<CheckResult> out;
    const std::size_t workers = detail::default_workers();

    // scalar relaxation anchor at dt = 1/512, alpha = 0.75, plus monotone decay
    {
        double prev = 1e300;
        bool monotone = true;
        double final_err = 0.0;
        for (std::size_t n : {128, 256, 512}) {
            const TimeGrid grid(1.0 / static_cast<double>(n), n);
            const Problem p = detail::relaxation_problem(0.75);
            MildSolver s(p, grid);
            const Trajectory traj = s.picard_solve(detail::zero_noise(grid));
            double sup = 0.0;
            for (std::size_t k = 0; k <= n; ++k) {
                const double t = grid.t(k);
                const double want =
                    t == 0.0 ? 0.0
                             : 1.0 - specfun::mittag_leffler(0.75, 1.0, -std::pow(t, 0.75));
                sup = std::max(sup, std::abs(traj.value(static_cast<std::ptrdiff_t>(k)) - want));
            }
            monotone = monotone && sup < prev;
            prev = sup;
            final_err = sup;
        }
        detail::add(out, "solver/relaxation_anchor", final_err, 5e-3, final_err <= 5e-3,
                    "sup error vs 1 - E_a(-t^a) at dt = 1/512");
        detail::add(out, "solver/relaxation_monotone", monotone ? 1.0 : 0.0, 1.0, monotone,
                    "error decays over 3 refinement levels");
    }

    // pure initial value: no quadrature in that path
    {
        const TimeGrid grid(1.0 / 128.0, 128);
        Problem p{0.75,
                  0.7,
                  SpectralOperator({1.0, 4.0, 9.0}),
                  1.0,
                  0.25,
                  [](double, std::size_t n) { return 1.0 / (1.0 + static_cast<double>(n)); },
                  [](double, const DelaySegment&) { return ModeVector{0.0, 0.0, 0.0}; },
                  [](double, std::size_t) { return 0.0; },
                  {1.0, 0.25, 1.0 / 9.0},
                  0.0,
                  8.0};
        MildSolver s(p, grid);
        const Trajectory traj = s.picard_solve(detail::zero_noise(grid, 3));
        double worst = 0.0;
        for (std::size_t k = 0; k <= 128; ++k)
            for (std::size_t n = 0; n < 3; ++n) {
                const double want =
                    operators::t_alpha_multiplier(0.75, p.op.eigenvalues[n], grid.t(k)) /
                    (1.0 + static_cast<double>(n));
                worst = std::max(worst,
                                 std::abs(traj.value(static_cast<std::ptrdiff_t>(k), n) - want));
            }
        detail::add(out, "solver/pure_initial", worst, 1e-6, worst <= 1e-6);
    }

    // picard contraction envelope on the linear-delay benchmark, dt = 1/256
    {
        const TimeGrid grid(1.0 / 256.0, 256);
        Problem p = detail::relaxation_problem(0.75);
        p.initial = [](double, std::size_t) { return 1.0; };
        p.drift = [](double, const DelaySegment& seg) { return ModeVector{seg.delayed(0)}; };
        p.lipschitz_hint = 1.0;
        MildSolver s(p, grid);
        const Trajectory traj = s.picard_solve(detail::zero_noise(grid), 1e-10, 20);
        detail::add(out, "solver/picard_iterations", static_cast<double>(traj.iterations), 20.0,
                    traj.converged && traj.iterations <= 20 &&
                        traj.sup_differences.back() <= 1e-10,
                    "converged below 1e-10");
        const double e0 = specfun::recip_gamma(0.75);
        const double k_const = e0 * e0 * p.lipschitz_hint * std::pow(p.horizon, 1.5) / 0.5;
        const auto& d = traj.sup_differences;
        bool ok = d.size() >= 3;
        double envelope = ok ? d[1] * d[1] : 0.0;
        double worst_excess = 0.0;
        for (std::size_t n = 2; ok && n < d.size(); ++n) {
            envelope *= k_const / static_cast<double>(n - 1);
            worst_excess = std::max(worst_excess, d[n] * d[n] - envelope);
            ok = ok && d[n] * d[n] <= envelope * 1.0001 + 1e-28;
        }
        detail::add(out, "solver/picard_envelope", worst_excess, 0.0, ok,
                    "squared sup-differences under K^{n-1}/(n-1)! envelope");
    }

    // uniqueness surrogate: two starts agree to 2 tol
    {
        const TimeGrid grid(1.0 / 128.0, 128);
        Problem p = detail::relaxation_problem(0.75);
        p.initial = [](double, std::size_t) { return 1.0; };
        p.drift = [](double, const DelaySegment& seg) { return ModeVector{seg.delayed(0)}; };
        p.noise_coeff = [](double, std::size_t) { return 0.3; };
        p.lipschitz_hint = 1.0;
        MildSolver s(p, grid);
        const auto noise = fbm::generate_qfbm(fbm::HurstParameter(0.7), grid, {1.0}, 314159);
        const double tol = 1e-10;
        const Trajectory a = s.picard_solve(noise, tol, 64, MildSolver::PicardStart::zero);
        const Trajectory b = s.picard_solve(noise, tol, 64, MildSolver::PicardStart::hold_phi0);
        double sup = 0.0;
        for (std::size_t k = 0; k <= 128; ++k)
            sup = std::max(sup, std::abs(a.value(static_cast<std::ptrdiff_t>(k)) -
                                         b.value(static_cast<std::ptrdiff_t>(k))));
        detail::add(out, "solver/uniqueness_surrogate", sup, 2.0 * tol, sup <= 2.0 * tol);
    }

    // mean-square continuity of the stochastic convolution under refinement
    {
        const fbm::HurstParameter h(0.7);
        const SpectralOperator a({1.0});
        double prev = 1e300;
        bool decreasing = true;
        for (std::size_t n : {64, 128, 256}) {
            const TimeGrid grid(1.0 / static_cast<double>(n), n);
            const std::size_t reps = 400;
            std::vector<double> inc(reps);
            detail::parallel_for(reps, workers, [&](std::size_t r) {
                const auto q = fbm::generate_qfbm(h, grid, {1.0}, derive_stream_seed(515, r));
                const auto z = stoch_convolution(
                    0.75, a, [](double, std::size_t) { return 1.0; }, q);
                const double d = z[n / 2 + 1][0] - z[n / 2][0];
                inc[r] = d * d;
            });
            const double mean = stats::summarize(inc).mean;
            decreasing = decreasing && mean < prev;
            prev = mean;
        }
        detail::add(out, "solver/ms_continuity", prev, 0.0, decreasing,
                    "E||Z(t+dt)-Z(t)||^2 decreases under two refinements");
    }

    // alpha = 1 reduction against the classical solver over an ensemble
    {
        const TimeGrid grid(1.0 / 256.0, 256);
        Problem p{1.0,
                  0.7,
                  SpectralOperator({1.0, 4.0, 9.0, 16.0}),
                  1.0,
                  0.25,
                  [](double, std::size_t n) { return 1.0 / (1.0 + static_cast<double>(n)); },
                  [](double, const DelaySegment& seg) {
                      ModeVector f(seg.n_modes);
                      for (std::size_t n = 0; n < seg.n_modes; ++n) f[n] = 0.5 * seg.delayed(n);
                      return f;
                  },
                  [](double, std::size_t n) { return 0.5 / (1.0 + static_cast<double>(n)); },
                  {1.0, 0.25, 1.0 / 9.0, 1.0 / 16.0},
                  0.25,
                  8.0};
        MildSolver s(p, grid);
        std::vector<double> sups(alpha1_paths);
        detail::parallel_for(alpha1_paths, workers, [&](std::size_t path) {
            const auto noise = fbm::generate_qfbm(fbm::HurstParameter(p.hurst), grid, p.eigenvalues,
                                                  derive_stream_seed(606060, path));
            const Trajectory ours = s.picard_solve(noise);
            const Trajectory ref = classical::solve(p, grid, noise);
            double sup = 0.0;
            for (std::size_t k = 0; k <= 256; ++k) {
                double d2 = 0.0;
                for (std::size_t n = 0; n < 4; ++n) {
                    const double d = ours.value(static_cast<std::ptrdiff_t>(k), n) -
                                     ref.value(static_cast<std::ptrdiff_t>(k), n);
                    d2 += d * d;
                }
                sup = std::max(sup, std::sqrt(d2));
            }
            sups[path] = sup;
        });
        double worst = 0.0;
        for (double s_ : sups) worst = std::max(worst, s_);
        detail::add(out, "solver/alpha1_vs_classical", worst, 10.0 * grid.dt,
                    worst <= 10.0 * grid.dt,
                    "sup difference over " + std::to_string(alpha1_paths) + " shared-noise paths");
    }

    // determinism: same seed and config give bit-identical trajectories
    {
        const TimeGrid grid(1.0 / 128.0, 128);
        Problem p = detail::relaxation_problem(0.75);
        p.noise_coeff = [](double, std::size_t) { return 0.5; };
        const Trajectory a = solve_mild(p, grid, 987654321);
        const Trajectory b = solve_mild(p, grid, 987654321);
        detail::add(out, "solver/determinism", a.data == b.data ? 1.0 : 0.0, 1.0,
                    a.data == b.data);
    }

    // RL residual of the assembled equation decays under refinement
    {
        double prev = 1e300;
        bool decreasing = true;
        for (std::size_t n : {64, 128, 256}) {
            const TimeGrid grid(1.0 / static_cast<double>(n), n);
            const Problem p = detail::relaxation_problem(0.75);
            MildSolver s(p, grid);
            const Trajectory traj = s.picard_solve(detail::zero_noise(grid));
            const double res = caputo_residual(traj, p);
            decreasing = decreasing && res < prev;
            prev = res;
        }
        detail::add(out, "solver/caputo_residual_decay", prev, 0.0, decreasing,
                    "residual decreases over 3 refinement levels");
    }
    return out;
}

inline std::vector<CheckResult> run_suite(const std::string& name) {
    if (name == "specfun") return run_specfun_suite();
    if (name == "fbm") return run_fbm_suite();
    if (name == "stochint") return run_stochint_suite();
    if (name == "operators") return run_operators_suite();
    if (name == "solver") return run_solver_suite();
    if (name == "all") {
        std::vector<CheckResult> out = run_specfun_suite();
        for (auto&& suite : {run_fbm_suite(), run_stochint_suite(), run_operators_suite(),
                             run_solver_suite()})
            out.insert(out.end(), suite.begin(), suite.end());
        return out;
    }
    throw std::invalid_argument("unknown verify suite: " + name);
}

}  // namespace fsde::verify
