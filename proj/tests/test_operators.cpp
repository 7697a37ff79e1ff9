#include <catch2/catch.hpp>

#include <cmath>

#include "fsde/operators.hpp"
#include "test_support.hpp"

using namespace fsde;
using namespace fsde::operators;

TEST_CASE("semigroup_apply anchors") {
    const SpectralOperator a({1.0, 4.0});
    const ModeVector v{1.0, 1.0};
    CHECK(semigroup_apply(a, 0.0, v) == v);
    const auto w = semigroup_apply(a, 0.5, v);
    CHECK(w[0] == Approx(std::exp(-0.5)).epsilon(1e-14));
    CHECK(w[1] == Approx(std::exp(-2.0)).epsilon(1e-14));

    const SpectralOperator one({1.0});
    CHECK(semigroup_apply(one, 1.0, {1.0})[0] == Approx(0.3678794411714423).epsilon(1e-14));
    CHECK_THROWS_AS(semigroup_apply(a, -1.0, v), std::invalid_argument);
    CHECK_THROWS_AS(semigroup_apply(a, 1.0, {1.0}), std::invalid_argument);
}

TEST_CASE("spectral operator validation") {
    CHECK_THROWS_AS(SpectralOperator({}), std::invalid_argument);
    CHECK_THROWS_AS(SpectralOperator({0.0}), std::invalid_argument);
    CHECK_THROWS_AS(SpectralOperator({1.0}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(SpectralOperator({1.0}, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("t_alpha and s_alpha anchors") {
    const SpectralOperator a({1.0});
    // alpha = 1 reduction
    CHECK(t_alpha_apply(1.0, a, 1.0, {1.0})[0] == Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(s_alpha_apply(1.0, a, 1.0, {1.0})[0] == Approx(std::exp(-1.0)).epsilon(1e-14));
    // identities at t = 0
    CHECK(t_alpha_apply(0.75, a, 0.0, {2.5})[0] == Approx(2.5).epsilon(1e-15));
    CHECK(s_alpha_apply(0.75, a, 0.0, {1.0})[0] == Approx(0.81604893909826298).epsilon(1e-13));
    // frozen references
    CHECK(t_alpha_apply(0.75, a, 1.0, {1.0})[0] == Approx(0.39310830281575406).epsilon(1e-11));
    const SpectralOperator a4({4.0});
    CHECK(s_alpha_apply(0.6, a4, 0.5, {1.0})[0] == Approx(0.040104807402406629).epsilon(1e-10));
}

TEST_CASE("subordination oracle limits") {
    // mu -> 0: unweighted integral is the Mainardi mass, weighted hits 1/Gamma(alpha)
    for (double alpha : {0.6, 0.75, 0.9}) {
        const double unweighted = subordination_oracle(alpha, 0.0, 1.0, false);
        CHECK(unweighted == Approx(1.0).margin(1e-8));
        const double weighted = subordination_oracle(alpha, 0.0, 1.0, true);
        CHECK(weighted == Approx(specfun::recip_gamma(alpha)).margin(1e-7));
    }
    const double got = subordination_oracle(0.6, 1.0, 1.0, false);
    CHECK(got == Approx(oracle::ml_series(0.6, 1.0, -1.0)).margin(1e-6));
}

TEST_CASE("closed Mittag-Leffler forms match subordination quadrature") {
    for (double alpha : {0.6, 0.75, 0.9}) {
        const QuadratureRule rule = specfun::mainardi_rule(alpha);
        for (double mu : {1.0, 4.0, 25.0}) {
            for (double t : {0.1, 1.0, 2.0}) {
                const double t_closed = t_alpha_multiplier(alpha, mu, t);
                const double t_quad = subordination_oracle(alpha, mu, t, false, rule);
                const double s_closed = s_alpha_multiplier(alpha, mu, t);
                const double s_quad = subordination_oracle(alpha, mu, t, true, rule);
                INFO("alpha=" << alpha << " mu=" << mu << " t=" << t);
                CHECK(std::abs(t_closed - t_quad) < 1e-5);
                CHECK(std::abs(s_closed - s_quad) < 1e-5);
            }
        }
    }
}

TEST_CASE("exponential bound: E_alpha(-x) <= 1 on the sampled grid") {
    for (double alpha : {0.55, 0.75, 0.9, 1.0}) {
        for (double x = 0.0; x <= 60.0; x += 0.5) {
            const double v = alpha == 1.0 ? std::exp(-x) : specfun::mittag_leffler(alpha, 1.0, -x);
            CHECK(v <= 1.0 + 1e-12);
            CHECK(v >= 0.0);
        }
    }
}

TEST_CASE("S_alpha norm bound (diagonal operator norm vs M E_aa(w t^a))") {
    const SpectralOperator heat_like({1.0, 4.0, 9.0, 16.0});  // M = 1, omega = 0
    for (double alpha : {0.6, 0.75, 0.9}) {
        for (double t : {0.0, 0.1, 1.0, 5.0}) {
            const auto [observed, bound] = s_alpha_norm_bound(alpha, heat_like, t);
            INFO("alpha=" << alpha << " t=" << t);
            CHECK(observed <= bound * (1.0 + 1e-12));
            if (t == 0.0) CHECK(observed == Approx(bound).epsilon(1e-13));  // both 1/Gamma(alpha)
        }
        const auto [o0, b0] = s_alpha_norm_bound(alpha, heat_like, 0.0);
        CHECK(b0 == Approx(specfun::recip_gamma(alpha)).epsilon(1e-13));
    }
    // alpha = 1 scalar sanity: (e^{-1}, 1)
    const SpectralOperator one({1.0});
    const auto [o, b] = s_alpha_norm_bound(1.0, one, 1.0);
    CHECK(o == Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(b == Approx(1.0).epsilon(1e-14));
    // growth bound with M > 1, omega > 0 stays above the observed norm
    const SpectralOperator grown({1.0}, 2.0, 0.5);
    for (double t : {0.1, 1.0, 3.0}) {
        const auto [og, bg] = s_alpha_norm_bound(0.75, grown, t);
        CHECK(og <= bg);
    }
}

TEST_CASE("alpha = 1 degeneration to the semigroup at 1e-12") {
    const SpectralOperator a({1.0, 4.0, 9.0});
    const ModeVector v{1.0, -2.0, 0.5};
    for (double t : {0.0, 0.1, 0.5, 1.0, 3.0}) {
        const auto sg = semigroup_apply(a, t, v);
        const auto ta = t_alpha_apply(1.0, a, t, v);
        const auto sa = s_alpha_apply(1.0, a, t, v);
        for (std::size_t n = 0; n < 3; ++n) {
            CHECK(ta[n] == Approx(sg[n]).margin(1e-12));
            CHECK(sa[n] == Approx(sg[n]).margin(1e-12));
        }
    }
}

TEST_CASE("strong continuity surrogate: multiplier jumps halve under refinement") {
    const double alpha = 0.75, mu = 9.0;
    auto max_jump = [&](std::size_t n) {
        double worst = 0.0;
        // t in [0.25, 1], away from the t = 0 boundary layer
        for (std::size_t k = n / 4; k < n; ++k) {
            const double t0 = static_cast<double>(k) / n;
            const double t1 = static_cast<double>(k + 1) / n;
            worst = std::max(worst, std::abs(t_alpha_multiplier(alpha, mu, t1) -
                                             t_alpha_multiplier(alpha, mu, t0)));
        }
        return worst;
    };
    const double coarse = max_jump(64);
    const double fine = max_jump(128);
    CHECK(fine <= 0.6 * coarse);
}
