// Generate one fractional Brownian path with each generator and print the
// CSV of the circulant one; prints the empirical variance ratio against
// t^{2H} for a quick eyeball check.

#include <cstdio>
#include <iostream>

#include "fsde/fbm.hpp"
#include "fsde/stats.hpp"

using namespace fsde;

int main(int argc, char** argv) {
    const double H = argc > 1 ? std::atof(argv[1]) : 0.75;
    const fbm::HurstParameter h(H);
    const TimeGrid grid(1.0 / 256.0, 256);

    const auto chol = fbm::generate_cholesky(h, grid, 1);
    const auto circ = fbm::generate_circulant(h, grid, 1);
    const auto volt = fbm::generate_volterra(h, grid, 1);
    std::fprintf(stderr, "endpoints: cholesky %.6f circulant %.6f volterra %.6f\n",
                 chol.values.back(), circ.values.back(), volt.values.back());

    const std::size_t reps = 500;
    std::vector<double> ends(reps);
    for (std::size_t r = 0; r < reps; ++r)
        ends[r] = fbm::generate_circulant(h, grid, derive_stream_seed(7, r)).values.back();
    const auto s = stats::summarize(ends);
    std::fprintf(stderr, "Var beta(1) over %zu paths: %.4f (target 1)\n", reps, s.variance);

    std::cout << fbm::to_csv(circ);
    return 0;
}
