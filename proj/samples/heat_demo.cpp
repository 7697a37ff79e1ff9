// Solve the fractional stochastic heat equation once and dump the physical
// field xi(t, z) as CSV rows t,z,value.

#include <iostream>

#include "fsde/heat.hpp"
#include "fsde/io.hpp"

using namespace fsde;

int main() {
    heat::HeatConfig config;
    config.alpha = 0.75;
    config.hurst = 0.7;
    config.n_modes = 32;
    config.horizon = 1.0;
    config.delay = 0.25;
    config.initial = {heat::SpatialProfile::sine, 1.0, 1, {}};
    config.noise = {heat::SpatialProfile::parabola, 0.5, 1, {}};

    const solver::Problem problem = heat::build_problem(config);
    const TimeGrid grid(1.0 / 256.0, 256);
    const solver::Trajectory traj = solver::solve_mild(problem, grid, 20240911);

    std::cout << heat::field_csv(traj, heat::uniform_z_points(33));
    return 0;
}
