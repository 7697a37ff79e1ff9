#include <catch2/catch.hpp>

#include <cmath>
#include <complex>

#include "fsde/common.hpp"
#include "fsde/fft.hpp"
#include "fsde/io.hpp"
#include "fsde/linalg.hpp"
#include "fsde/quadrature.hpp"
#include "fsde/stats.hpp"

using namespace fsde;

TEST_CASE("gauss_legendre integrates polynomials exactly") {
    std::vector<double> x, w;
    quad::gauss_legendre(8, x, w);
    // degree 15 is exact with 8 nodes
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], 14);
    CHECK(s == Approx(2.0 / 15.0).epsilon(1e-13));
    double total_w = 0.0;
    for (double wi : w) total_w += wi;
    CHECK(total_w == Approx(2.0).epsilon(1e-14));
}

TEST_CASE("semi_infinite_rule handles exponential and algebraic integrands") {
    const QuadratureRule rule = quad::semi_infinite_rule(60.0);
    rule.validate();
    const double i1 = rule.integrate([](double r) { return std::exp(-r); });
    CHECK(i1 == Approx(1.0).epsilon(1e-10));
    // int_0^inf sqrt(r) e^{-r} = Gamma(3/2)
    const double i2 = rule.integrate([](double r) { return std::sqrt(r) * std::exp(-r); });
    CHECK(i2 == Approx(0.8862269254527580).epsilon(1e-9));
}

TEST_CASE("QuadratureRule validation") {
    CHECK_THROWS_AS(QuadratureRule({1.0, 0.5}, {1.0, 1.0}, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(QuadratureRule({0.5}, {1.0, 1.0}, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(QuadratureRule({0.5}, {1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("fft roundtrip and known transform") {
    std::vector<std::complex<double>> a = {1, 2, 3, 4, 5, 6, 7, 8};
    auto b = a;
    fft_pow2(b);
    // DC bin is the plain sum
    CHECK(b[0].real() == Approx(36.0).epsilon(1e-14));
    fft_pow2(b, true);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(b[i].real() == Approx(a[i].real()).margin(1e-12));
        CHECK(std::abs(b[i].imag()) < 1e-12);
    }
    CHECK_THROWS_AS(fft_pow2(a = {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("cholesky factor and failure reporting") {
    SymMatrix m(2);
    m(0, 0) = 4.0; m(0, 1) = 2.0; m(1, 0) = 2.0; m(1, 1) = 3.0;
    const SymMatrix L = cholesky_factor(m);
    CHECK(L(0, 0) == Approx(2.0));
    CHECK(L(1, 0) == Approx(1.0));
    CHECK(L(1, 1) == Approx(std::sqrt(2.0)));

    SymMatrix bad(2);
    bad(0, 0) = 1.0; bad(0, 1) = 2.0; bad(1, 0) = 2.0; bad(1, 1) = 1.0;
    CHECK_THROWS_WITH(cholesky_factor(bad), Catch::Contains("leading minor 2"));
}

TEST_CASE("jacobi eigenvalues of a known matrix") {
    SymMatrix m(3);
    m(0, 0) = 2; m(1, 1) = 3; m(2, 2) = 4;
    m(0, 1) = m(1, 0) = 1;
    auto ev = jacobi_eigenvalues(m);
    std::sort(ev.begin(), ev.end());
    // eigenvalues of [[2,1,0],[1,3,0],[0,0,4]]: (5±sqrt5)/2 and 4
    CHECK(ev[0] == Approx((5.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-10));
    CHECK(ev[1] == Approx((5.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-10));
    CHECK(ev[2] == Approx(4.0).epsilon(1e-10));
}

TEST_CASE("rng determinism and stream derivation") {
    Rng a(42), b(42), c(43);
    for (int i = 0; i < 16; ++i) {
        const double x = a.next_normal();
        CHECK(x == b.next_normal());
    }
    CHECK(a.next_u64() != c.next_u64());
    CHECK(derive_stream_seed(1, 0) != derive_stream_seed(1, 1));
    CHECK(derive_stream_seed(1, 0) != derive_stream_seed(2, 0));
    CHECK(derive_stream_seed(7, 3) == derive_stream_seed(7, 3));
}

TEST_CASE("rng normals have sane moments") {
    Rng r(2024);
    std::vector<double> xs(200000);
    r.fill_normal(xs);
    const auto s = stats::summarize(xs);
    CHECK(std::abs(s.mean) < 4.0 * s.std_error_of_mean());
    CHECK(std::abs(s.variance - 1.0) < 4.0 * s.std_error_of_variance());
}

TEST_CASE("sin_pi exact at integers and accurate elsewhere") {
    CHECK(sin_pi(3.0) == 0.0);
    CHECK(sin_pi(-120.0) == 0.0);
    CHECK(sin_pi(0.5) == Approx(1.0).epsilon(1e-15));
    CHECK(sin_pi(-110.5) == Approx(-1.0).epsilon(1e-15));
    CHECK(sin_pi(0.25) == Approx(std::sqrt(0.5)).epsilon(1e-15));
}

TEST_CASE("sha256 known vectors") {
    CHECK(io::sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(io::sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("csv writer quoting and layout") {
    io::CsvWriter w(2);
    w.row({"t", "va\"lue"});
    w.numeric_row(0.5, {1.0 / 3.0});
    const std::string s = w.str();
    CHECK(s.find("\"va\"\"lue\"") != std::string::npos);
    CHECK(s.find("0.33333333333333331") != std::string::npos);
    CHECK(s.find('\r') == std::string::npos);
}

TEST_CASE("ks tests behave on obvious inputs") {
    Rng r(7);
    std::vector<double> a(3000), b(3000);
    r.fill_normal(a);
    r.fill_normal(b);
    CHECK(stats::ks_two_sample(a, b).p_value > 0.01);
    CHECK(stats::ks_normal(a, 0.0, 1.0).p_value > 0.01);
    for (auto& x : b) x += 0.5;
    CHECK(stats::ks_two_sample(a, b).p_value < 1e-6);
}
