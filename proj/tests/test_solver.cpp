#include <catch2/catch.hpp>

#include <cmath>

#include "fsde/classical.hpp"
#include "fsde/solver.hpp"
#include "fsde/stats.hpp"
#include "test_support.hpp"

using namespace fsde;
using namespace fsde::solver;
using operators::ModeVector;
using operators::SpectralOperator;

namespace {

Problem scalar_problem(double alpha, double mu = 1.0, double hurst = 0.7) {
    Problem p{alpha,
              hurst,
              SpectralOperator({mu}),
              1.0,
              0.25,
              [](double, std::size_t) { return 0.0; },
              [](double, const DelaySegment&) { return ModeVector{0.0}; },
              [](double, std::size_t) { return 0.0; },
              {1.0},
              0.0,
              8.0};
    return p;
}

Problem relaxation_problem(double alpha) {
    // scalar mu = 1, f = 1, phi = 0, h = 0: x(t) = 1 - E_alpha(-t^alpha)
    Problem p = scalar_problem(alpha);
    p.drift = [](double, const DelaySegment&) { return ModeVector{1.0}; };
    return p;
}

Problem linear_delay_problem(double alpha) {
    // f(t, x_t) = x(t - r), phi = 1, h = 0, mu = 1, r = 1/4, b = 1
    Problem p = scalar_problem(alpha);
    p.initial = [](double, std::size_t) { return 1.0; };
    p.drift = [](double, const DelaySegment& seg) { return ModeVector{seg.delayed(0)}; };
    p.lipschitz_hint = 1.0;
    return p;
}

fbm::QFbmPath zero_noise(const TimeGrid& grid, std::size_t modes = 1) {
    fbm::QFbmPath q{fbm::HurstParameter(0.7), grid, std::vector<double>(modes, 1.0), {}, 0};
    q.modes.assign(modes, std::vector<double>(grid.n_points(), 0.0));
    return q;
}

}  // namespace

TEST_CASE("rl_integral product rule exactness and order") {
    const double dt = 1.0 / 128.0;
    std::vector<double> one(129, 1.0);

    const auto j1 = rl_integral(1.0, one, dt);
    CHECK(j1[128] == Approx(1.0).epsilon(1e-12));
    CHECK(j1[64] == Approx(0.5).epsilon(1e-12));

    const auto jh = rl_integral(0.5, one, dt);
    CHECK(jh[128] == Approx(1.0 / specfun::gamma(1.5)).epsilon(1e-12));

    std::vector<double> ramp(129);
    for (std::size_t k = 0; k <= 128; ++k) ramp[k] = k * dt;
    const auto jr = rl_integral(0.5, ramp, dt);
    const double want = specfun::gamma(2.0) / specfun::gamma(2.5);  // t^{3/2} coefficient at t = 1
    CHECK(jr[128] == Approx(want).margin(2.0 * dt));

    CHECK_THROWS_AS(rl_integral(0.0, one, dt), std::invalid_argument);
    CHECK_THROWS_AS(rl_integral(0.5, std::vector<double>{1.0, NAN}, dt), std::invalid_argument);
}

TEST_CASE("property: the order-1 product rule is exactly the trapezoid rule") {
    Rng rng(0xBEEF);
    const double dt = 1.0 / 64.0;
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<double> f(65);
        for (auto& v : f) v = rng.next_normal();
        const auto j1 = rl_integral(1.0, f, dt);
        CompensatedSum trapezoid;
        for (std::size_t k = 1; k <= 64; ++k) {
            trapezoid.add(0.5 * dt * (f[k - 1] + f[k]));
            CHECK(j1[k] == Approx(trapezoid.total()).epsilon(1e-12).margin(1e-14));
        }
    }
}

TEST_CASE("the relaxation identity int_0^t s^{a-1} E_aa(-s^a) ds = 1 - E_a(-t^a)") {
    // high-resolution quadrature of the singular integrand, endpoint substituted
    const double alpha = 0.75;
    auto integral_to = [&](double t) {
        // s = v^{1/alpha} regularizes s^{alpha-1} ds
        std::vector<double> bp;
        for (int i = 0; i <= 64; ++i) bp.push_back(std::pow(t, alpha) * i / 64.0);
        return quad::gl_panels(
            [&](double v) { return specfun::mittag_leffler(alpha, alpha, -v) / alpha; }, bp, 16);
    };
    for (double t : {0.25, 1.0}) {
        const double want = 1.0 - specfun::mittag_leffler(alpha, 1.0, -std::pow(t, alpha));
        CHECK(integral_to(t) == Approx(want).margin(1e-9));
    }
}

TEST_CASE("det_convolution: zero drift, relaxation anchor, classical limit") {
    const TimeGrid grid(1.0 / 256.0, 256);
    const SpectralOperator a({1.0});

    const std::vector<ModeVector> zeros(grid.n_steps, ModeVector{0.0});
    for (const auto& row : det_convolution(0.75, a, zeros, grid))
        CHECK(row[0] == 0.0);

    const std::vector<ModeVector> ones(grid.n_steps, ModeVector{1.0});
    const auto relax = det_convolution(0.75, a, ones, grid);
    double worst = 0.0;
    for (std::size_t k = 0; k <= 256; ++k) {
        const double t = grid.t(k);
        const double want =
            t == 0.0 ? 0.0 : 1.0 - specfun::mittag_leffler(0.75, 1.0, -std::pow(t, 0.75));
        worst = std::max(worst, std::abs(relax[k][0] - want));
    }
    CHECK(worst < 5e-3);

    const auto classical_relax = det_convolution(1.0, a, ones, grid);
    double worst1 = 0.0;
    for (std::size_t k = 0; k <= 256; ++k)
        worst1 = std::max(worst1,
                          std::abs(classical_relax[k][0] - (1.0 - std::exp(-grid.t(k)))));
    CHECK(worst1 < 5e-4);
}

TEST_CASE("picard: drift-free problems converge immediately to T_alpha phi(0)") {
    const TimeGrid grid(1.0 / 64.0, 64);
    Problem p = scalar_problem(0.75);
    p.initial = [](double, std::size_t) { return 1.0; };
    MildSolver solver(p, grid);
    const Trajectory traj = solver.picard_solve(zero_noise(grid));
    CHECK(traj.iterations <= 2);
    for (std::size_t k = 0; k <= 64; ++k) {
        const double want = operators::t_alpha_multiplier(0.75, 1.0, grid.t(k));
        CHECK(traj.value(static_cast<std::ptrdiff_t>(k)) == Approx(want).margin(1e-12));
    }
    // phi preserved exactly on [-r, 0]
    for (std::ptrdiff_t k = -static_cast<std::ptrdiff_t>(traj.delay_steps); k <= 0; ++k)
        CHECK(traj.value(k) == 1.0);
}

TEST_CASE("picard contraction on the linear-delay benchmark") {
    const TimeGrid grid(1.0 / 256.0, 256);
    const Problem p = linear_delay_problem(0.75);
    MildSolver solver(p, grid);
    const Trajectory traj = solver.picard_solve(zero_noise(grid), 1e-10, 20);
    CHECK(traj.converged);
    CHECK(traj.iterations <= 20);
    CHECK(traj.sup_differences.back() <= 1e-10);

    // factorial envelope on the squared sup-differences (deterministic problem,
    // so the pathwise sup of ||.||^2 is the mean-square sup)
    const double e_aa0 = specfun::recip_gamma(0.75);
    const double k_const = e_aa0 * e_aa0 * p.lipschitz_hint * std::pow(p.horizon, 2.0 * p.alpha) /
                           (2.0 * p.alpha - 1.0);
    const auto& d = traj.sup_differences;
    REQUIRE(d.size() >= 3);
    const double z1 = d[1] * d[1];
    double envelope = z1;
    for (std::size_t n = 2; n < d.size(); ++n) {
        envelope *= k_const / static_cast<double>(n - 1);
        CHECK(d[n] * d[n] <= envelope * 1.0001 + 1e-28);
    }
}

TEST_CASE("picard non-convergence carries diagnostics") {
    const TimeGrid grid(1.0 / 64.0, 64);
    Problem p = linear_delay_problem(0.75);
    // blow the drift up so two iterations cannot reach 1e-10
    p.drift = [](double, const DelaySegment& seg) { return ModeVector{50.0 * seg.delayed(0)}; };
    MildSolver solver(p, grid);
    try {
        solver.picard_solve(zero_noise(grid), 1e-10, 2);
        FAIL("expected PicardNonConvergence");
    } catch (const PicardNonConvergence& e) {
        CHECK(e.sup_differences.size() == 2);
    }
}

TEST_CASE("solve_mild: zero problem, pure initial value, determinism") {
    const TimeGrid grid(1.0 / 128.0, 128);

    SECTION("all-zero data gives the zero trajectory") {
        const Problem p = scalar_problem(0.75);
        const Trajectory traj = solve_mild(p, grid, 42);
        for (std::size_t k = 0; k <= 128; ++k)
            CHECK(traj.value(static_cast<std::ptrdiff_t>(k)) == 0.0);
    }

    SECTION("pure initial value equals E_alpha(-mu t^alpha) phi(0) to 1e-6") {
        Problem p{0.75,
                  0.7,
                  SpectralOperator({1.0, 4.0, 9.0}),
                  1.0,
                  0.25,
                  [](double, std::size_t n) { return n == 0 ? 1.0 : 0.5; },
                  [](double, const DelaySegment&) { return ModeVector{0.0, 0.0, 0.0}; },
                  [](double, std::size_t) { return 0.0; },
                  {1.0, 0.25, 1.0 / 9.0},
                  0.0,
                  8.0};
        const Trajectory traj = solve_mild(p, grid, 7);
        for (std::size_t k = 0; k <= 128; ++k)
            for (std::size_t n = 0; n < 3; ++n) {
                const double phi0 = n == 0 ? 1.0 : 0.5;
                const double want =
                    operators::t_alpha_multiplier(0.75, p.op.eigenvalues[n], grid.t(k)) * phi0;
                CHECK(traj.value(static_cast<std::ptrdiff_t>(k), n) == Approx(want).margin(1e-6));
            }
    }

    SECTION("bit-identical trajectories from the same seed") {
        Problem p = linear_delay_problem(0.75);
        p.noise_coeff = [](double, std::size_t) { return 0.5; };
        const Trajectory a = solve_mild(p, grid, 123456);
        const Trajectory b = solve_mild(p, grid, 123456);
        const Trajectory c = solve_mild(p, grid, 123457);
        CHECK(a.data == b.data);
        CHECK(a.data != c.data);
    }
}

TEST_CASE("uniqueness surrogate: both picard starts land on the same trajectory") {
    const TimeGrid grid(1.0 / 128.0, 128);
    Problem p = linear_delay_problem(0.75);
    p.noise_coeff = [](double, std::size_t) { return 0.3; };
    MildSolver solver(p, grid);
    const fbm::QFbmPath noise =
        fbm::generate_qfbm(fbm::HurstParameter(p.hurst), grid, p.eigenvalues, 2718);
    const double tol = 1e-10;
    const Trajectory a = solver.picard_solve(noise, tol, 64, MildSolver::PicardStart::zero);
    const Trajectory b = solver.picard_solve(noise, tol, 64, MildSolver::PicardStart::hold_phi0);
    double sup = 0.0;
    for (std::size_t k = 0; k <= 128; ++k)
        sup = std::max(sup, std::abs(a.value(static_cast<std::ptrdiff_t>(k)) -
                                     b.value(static_cast<std::ptrdiff_t>(k))));
    CHECK(sup <= 2.0 * tol);
}

TEST_CASE("segment extraction") {
    const TimeGrid grid(1.0 / 16.0, 16);
    Problem p = linear_delay_problem(0.75);
    MildSolver solver(p, grid);
    const Trajectory traj = solver.picard_solve(zero_noise(grid));

    const DelaySegment at0 = segment_extract(traj, 0.0);
    CHECK(at0.steps() == 4);
    for (std::size_t i = 0; i <= 4; ++i) CHECK(at0.at(i) == 1.0);  // phi = 1

    const DelaySegment at_r = segment_extract(traj, 0.25);
    CHECK(at_r.current() == Approx(traj.value(4)).epsilon(1e-15));
    CHECK(at_r.delayed() == Approx(traj.value(0)).epsilon(1e-15));

    CHECK_THROWS_AS(segment_extract(traj, 0.3001), std::invalid_argument);
}

TEST_CASE("stochastic convolution: moment bound and mean-square continuity") {
    const double alpha = 0.75;
    const fbm::HurstParameter h(0.7);
    const SpectralOperator a({1.0});
    const NoiseCoeffFn unit_h = [](double, std::size_t) { return 1.0; };

    SECTION("telescoping limit: alpha = 1, mu -> 0 recovers the path") {
        const TimeGrid grid(1.0 / 64.0, 64);
        const SpectralOperator tiny({1e-12});
        const fbm::QFbmPath q = fbm::generate_qfbm(h, grid, {1.0}, 99);
        const auto z = stoch_convolution(1.0, tiny, unit_h, q);
        for (std::size_t k = 0; k <= 64; ++k)
            CHECK(z[k][0] == Approx(q.modes[0][k]).margin(1e-9));
    }

    SECTION("zero coefficient gives zero") {
        const TimeGrid grid(1.0 / 64.0, 64);
        const fbm::QFbmPath q = fbm::generate_qfbm(h, grid, {1.0}, 99);
        const auto z = stoch_convolution(alpha, a, [](double, std::size_t) { return 0.0; }, q);
        for (std::size_t k = 0; k <= 64; ++k) CHECK(z[k][0] == 0.0);
    }

    SECTION("second moment at t = 1 obeys the singular-kernel bound") {
        const TimeGrid grid(1.0 / 128.0, 128);
        const std::size_t reps = 5000;
        std::vector<double> sq(reps);
        for (std::size_t r = 0; r < reps; ++r) {
            const fbm::QFbmPath q = fbm::generate_qfbm(h, grid, {1.0}, derive_stream_seed(31337, r));
            sq[r] = stoch_convolution(alpha, a, unit_h, q)[128][0];
            sq[r] *= sq[r];
        }
        // bound = 2H int_0^1 [(1-s)^{a-1} E_aa(-(1-s)^a)]^2 ds, endpoint substituted:
        // u = (1-s)^{2a-1} makes the integrand bounded
        std::vector<double> bp;
        for (int i = 0; i <= 64; ++i) bp.push_back(i / 64.0);
        const double q2a = 1.0 / (2.0 * alpha - 1.0);
        const double integral = quad::gl_panels(
            [&](double u) {
                const double one_minus_s = std::pow(u, q2a);
                const double e = specfun::mittag_leffler(alpha, alpha,
                                                         -std::pow(one_minus_s, alpha));
                return q2a * e * e;
            },
            bp, 16);
        const double bound = 2.0 * h.h * integral;
        const auto s = stats::summarize(sq);
        CHECK(s.mean <= bound + 3.0 * s.std_error_of_mean());
    }

    SECTION("mean-square time increment decreases under refinement") {
        double prev = 1e300;
        for (std::size_t n : {64, 128, 256}) {
            const TimeGrid grid(1.0 / static_cast<double>(n), n);
            const std::size_t reps = 400;
            std::vector<double> inc(reps);
            const std::size_t half = n / 2;
            for (std::size_t r = 0; r < reps; ++r) {
                const fbm::QFbmPath q =
                    fbm::generate_qfbm(h, grid, {1.0}, derive_stream_seed(515, r));
                const auto z = stoch_convolution(alpha, a, unit_h, q);
                const double d = z[half + 1][0] - z[half][0];
                inc[r] = d * d;
            }
            const double mean = stats::summarize(inc).mean;
            CHECK(mean < prev);
            prev = mean;
        }
    }
}

TEST_CASE("alpha = 1 solver matches the independent classical solver on shared noise") {
    const TimeGrid grid(1.0 / 256.0, 256);
    Problem p{1.0,
              0.7,
              SpectralOperator({1.0, 4.0, 9.0, 16.0}),
              1.0,
              0.25,
              [](double, std::size_t n) { return 1.0 / (1.0 + n); },
              [](double, const DelaySegment& seg) {
                  ModeVector f(seg.n_modes);
                  for (std::size_t n = 0; n < seg.n_modes; ++n) f[n] = 0.5 * seg.delayed(n);
                  return f;
              },
              [](double, std::size_t n) { return 0.5 / (1.0 + n); },
              {1.0, 0.25, 1.0 / 9.0, 1.0 / 16.0},
              0.25,
              8.0};
    MildSolver solver(p, grid);
    double worst = 0.0;
    for (std::uint64_t path = 0; path < 10; ++path) {
        const fbm::QFbmPath noise = fbm::generate_qfbm(fbm::HurstParameter(p.hurst), grid,
                                                       p.eigenvalues, derive_stream_seed(606060, path));
        const Trajectory ours = solver.picard_solve(noise);
        const Trajectory ref = classical::solve(p, grid, noise);
        for (std::size_t k = 0; k <= 256; ++k) {
            double d2 = 0.0;
            for (std::size_t n = 0; n < 4; ++n) {
                const double d = ours.value(static_cast<std::ptrdiff_t>(k), n) -
                                 ref.value(static_cast<std::ptrdiff_t>(k), n);
                d2 += d * d;
            }
            worst = std::max(worst, std::sqrt(d2));
        }
    }
    CHECK(worst <= 10.0 * grid.dt);
}

TEST_CASE("caputo residual shrinks under refinement for the relaxation problem") {
    double prev = 1e300;
    for (std::size_t n : {64, 128, 256}) {
        const TimeGrid grid(1.0 / static_cast<double>(n), n);
        const Problem p = relaxation_problem(0.75);
        MildSolver solver(p, grid);
        const Trajectory traj = solver.picard_solve(zero_noise(grid));
        const double res = caputo_residual(traj, p);
        CHECK(res < prev);
        prev = res;
    }
}

TEST_CASE("lipschitz probe attains the constant of the linear delay drift") {
    Problem p = linear_delay_problem(0.75);  // f = x(t - r), so C_f = 1
    const double probed = probe_lipschitz(p, 50);
    CHECK(probed <= 1.0 * 1.0001);
    CHECK(probed > 0.95);  // the structured pair realizes the constant

    Problem scaled = p;
    scaled.drift = [](double, const DelaySegment& seg) { return ModeVector{0.5 * seg.delayed(0)}; };
    const double probed_scaled = probe_lipschitz(scaled, 50);
    CHECK(probed_scaled <= 0.25 * 1.0001);
    CHECK(probed_scaled > 0.2);
}

TEST_CASE("hypothesis gate") {
    const TimeGrid grid(1.0 / 64.0, 64);
    Problem p = scalar_problem(0.6);
    p.integrability_exponent = 2.0;  // 1/(2a-1) = 5 > 2
    try {
        validate_problem(p, grid);
        FAIL("expected h1 violation");
    } catch (const HypothesisViolation& e) {
        CHECK(e.reason_code == "h1_violation");
    }

    Problem pd = scalar_problem(0.75);
    pd.delay = 0.3;  // not a multiple of dt = 1/64
    CHECK_THROWS_AS(validate_problem(pd, grid), HypothesisViolation);

    Problem ph = scalar_problem(0.75);
    ph.hurst = 0.4;
    CHECK_THROWS_AS(validate_problem(ph, grid), HypothesisViolation);
}
