#pragma once

#include <atomic>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "fsde/config.hpp"
#include "fsde/heat.hpp"
#include "fsde/io.hpp"
#include "fsde/solver.hpp"
#include "fsde/verify.hpp"

namespace fsde::harness {

namespace fs = std::filesystem;

/// Per-grid-point first and second moments of mode coefficients and physical
/// probes, reduced in fixed path order so the result does not depend on the
/// worker count.
struct EnsembleStats {
    TimeGrid grid;
    std::size_t n_modes = 0;
    std::size_t n_paths = 0;
    std::vector<double> probe_z;
    // layout: [time][quantity]; quantities are modes then probes
    std::vector<double> mean;
    std::vector<double> variance;

    std::size_t n_quantities() const { return n_modes + probe_z.size(); }
    double std_error(std::size_t idx) const {
        return std::sqrt(variance[idx] / static_cast<double>(n_paths));
    }
};

namespace detail {

/// fixed-size blocks over the path index; each block reduced by one worker,
/// blocks combined sequentially afterwards
struct BlockAccumulator {
    std::size_t n_quant = 0;
    std::size_t rows = 0;
    std::vector<double> sum;
    std::vector<double> sum_sq;
    std::size_t count = 0;

    void init(std::size_t rows_, std::size_t quants) {
        rows = rows_;
        n_quant = quants;
        sum.assign(rows * quants, 0.0);
        sum_sq.assign(rows * quants, 0.0);
        count = 0;
    }

    void add_path(const std::vector<double>& row_major_values) {
        for (std::size_t i = 0; i < sum.size(); ++i) {
            sum[i] += row_major_values[i];
            sum_sq[i] += row_major_values[i] * row_major_values[i];
        }
        ++count;
    }
};

inline std::string trajectory_csv(const solver::Trajectory& traj) {
    io::CsvWriter w(traj.n_modes + 1);
    std::vector<std::string> header{"t"};
    for (std::size_t n = 1; n <= traj.n_modes; ++n) header.push_back("mode_" + std::to_string(n));
    w.row(header);
    std::vector<double> cells(traj.n_modes);
    const auto m = static_cast<std::ptrdiff_t>(traj.delay_steps);
    for (std::ptrdiff_t k = -m; k <= static_cast<std::ptrdiff_t>(traj.grid.n_steps); ++k) {
        for (std::size_t n = 0; n < traj.n_modes; ++n) cells[n] = traj.value(k, n);
        w.numeric_row(traj.time(k), cells);
    }
    return w.str();
}

}  // namespace detail

struct SimulateOutput {
    int exit_code = 0;
    std::string error_reason;  // machine-readable tag when exit_code != 0
    EnsembleStats stats;
    std::vector<std::string> files;
};

/// output directory after the FSDE_OUTPUT_DIR override
inline fs::path resolve_output_dir(const RunConfig& config) {
    if (const char* env = std::getenv("FSDE_OUTPUT_DIR")) return fs::path(env);
    return fs::path(config.output_directory);
}

inline SimulateOutput run_simulate(const RunConfig& config, std::ostream& err = std::cerr) {
    SimulateOutput result;
    solver::Problem problem = [&] { return config.build_problem(); }();
    const TimeGrid grid = config.grid();

    try {
        solver::validate_problem(problem, grid);
        if (config.type == RunConfig::ProblemType::heat) {
            const heat::HypothesisReport rep = heat::validate_hypotheses(config.heat_config);
            if (!rep.h1_ok)
                throw solver::HypothesisViolation(
                    "h1_violation", "p = " + io::format_double(rep.p) + " must exceed " +
                                        io::format_double(rep.p_required));
        }
        if (problem.lipschitz_hint > 0.0) {
            const double probed = solver::probe_lipschitz(problem);
            if (probed > problem.lipschitz_hint * 1.05)
                err << Json{{"warning", "f2_probe_exceeds_hint"},
                            {"probed", probed},
                            {"hint", problem.lipschitz_hint}}
                           .dump()
                    << "\n";
        }
    } catch (const solver::HypothesisViolation& e) {
        err << Json{{"error", e.reason_code}, {"message", e.what()}}.dump() << "\n";
        result.exit_code = 2;
        result.error_reason = e.reason_code;
        return result;
    }

    const solver::MildSolver shared_solver(problem, grid);
    const std::size_t rows = grid.n_steps + 1;
    const std::size_t nm = problem.n_modes();
    const bool heat_type = config.type == RunConfig::ProblemType::heat;

    std::vector<double> probe_z;
    if (heat_type && config.probe_points > 0) {
        // interior probes, uniformly placed
        for (std::size_t i = 1; i <= config.probe_points; ++i)
            probe_z.push_back(pi * static_cast<double>(i) /
                              static_cast<double>(config.probe_points + 1));
    }
    const std::size_t n_quant = nm + probe_z.size();

    const std::size_t block_size = 32;
    const std::size_t n_blocks = (config.n_paths + block_size - 1) / block_size;
    std::vector<detail::BlockAccumulator> blocks(n_blocks);
    std::vector<std::string> path_csvs(config.write_paths ? config.n_paths : 0);
    std::vector<std::string> field_csvs(config.write_paths && heat_type ? config.n_paths : 0);
    std::vector<std::size_t> iteration_counts(config.n_paths, 0);
    std::vector<std::vector<double>> sup_diffs(config.n_paths);
    std::atomic<int> failure{0};

    auto run_block = [&](std::size_t b) {
        auto& acc = blocks[b];
        acc.init(rows, n_quant);
        std::vector<double> values(rows * n_quant);
        const std::size_t lo = b * block_size;
        const std::size_t hi = std::min(lo + block_size, config.n_paths);
        for (std::size_t p = lo; p < hi; ++p) {
            if (failure.load(std::memory_order_relaxed)) return;
            const std::uint64_t path_seed = derive_stream_seed(config.master_seed, p);
            try {
                const fbm::QFbmPath noise = fbm::generate_qfbm(
                    fbm::HurstParameter(problem.hurst), grid, problem.eigenvalues, path_seed);
                const solver::Trajectory traj = shared_solver.picard_solve(noise);
                iteration_counts[p] = traj.iterations;
                sup_diffs[p] = traj.sup_differences;
                for (std::size_t k = 0; k < rows; ++k) {
                    for (std::size_t n = 0; n < nm; ++n)
                        values[k * n_quant + n] = traj.value(static_cast<std::ptrdiff_t>(k), n);
                    if (!probe_z.empty()) {
                        const auto field =
                            heat::to_physical(traj, static_cast<std::ptrdiff_t>(k), probe_z);
                        for (std::size_t q = 0; q < probe_z.size(); ++q)
                            values[k * n_quant + nm + q] = field[q];
                    }
                }
                acc.add_path(values);
                if (config.write_paths) {
                    path_csvs[p] = detail::trajectory_csv(traj);
                    if (heat_type)
                        field_csvs[p] = heat::field_csv(
                            traj, heat::uniform_z_points(config.heat_config.spatial_resolution));
                }
            } catch (const solver::PicardNonConvergence&) {
                failure.store(3, std::memory_order_relaxed);
                return;
            }
        }
    };

    {
        const std::size_t workers = std::min(config.worker_count, n_blocks);
        if (workers <= 1) {
            for (std::size_t b = 0; b < n_blocks; ++b) run_block(b);
        } else {
            std::atomic<std::size_t> next{0};
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (std::size_t w = 0; w < workers; ++w)
                pool.emplace_back([&] {
                    for (std::size_t b = next.fetch_add(1); b < n_blocks; b = next.fetch_add(1))
                        run_block(b);
                });
            for (auto& t : pool) t.join();
        }
    }

    if (failure.load() != 0) {
        err << Json{{"error", "picard_nonconvergence"}}.dump() << "\n";
        result.exit_code = 3;
        result.error_reason = "picard_nonconvergence";
        return result;
    }

    // sequential reduce in block order keeps the output byte-stable
    EnsembleStats stats;
    stats.grid = grid;
    stats.n_modes = nm;
    stats.n_paths = config.n_paths;
    stats.probe_z = probe_z;
    stats.mean.assign(rows * n_quant, 0.0);
    stats.variance.assign(rows * n_quant, 0.0);
    std::vector<double> total_sum(rows * n_quant, 0.0), total_sq(rows * n_quant, 0.0);
    for (const auto& b : blocks)
        for (std::size_t i = 0; i < total_sum.size(); ++i) {
            total_sum[i] += b.sum[i];
            total_sq[i] += b.sum_sq[i];
        }
    const double np = static_cast<double>(config.n_paths);
    for (std::size_t i = 0; i < total_sum.size(); ++i) {
        stats.mean[i] = total_sum[i] / np;
        stats.variance[i] =
            config.n_paths > 1
                ? std::max(0.0, (total_sq[i] - np * stats.mean[i] * stats.mean[i]) / (np - 1.0))
                : 0.0;
    }
    result.stats = stats;

    // --- files ---
    const fs::path out_dir = resolve_output_dir(config);
    fs::create_directories(out_dir);
    std::vector<std::pair<std::string, std::string>> outputs;  // rel path, content

    {
        io::CsvWriter w(1 + 3 * nm);
        std::vector<std::string> header{"t"};
        for (const char* kind : {"mean", "var", "se"})
            for (std::size_t n = 1; n <= nm; ++n)
                header.push_back(std::string(kind) + "_mode_" + std::to_string(n));
        w.row(header);
        std::vector<double> cells(3 * nm);
        for (std::size_t k = 0; k < rows; ++k) {
            for (std::size_t n = 0; n < nm; ++n) {
                const std::size_t idx = k * n_quant + n;
                cells[n] = stats.mean[idx];
                cells[nm + n] = stats.variance[idx];
                cells[2 * nm + n] = std::sqrt(stats.variance[idx] / np);
            }
            w.numeric_row(grid.t(k), cells);
        }
        outputs.emplace_back("stats_modes.csv", w.str());
    }

    if (!probe_z.empty()) {
        io::CsvWriter w(5);
        w.row({"t", "z", "mean", "var", "se"});
        for (std::size_t k = 0; k < rows; ++k)
            for (std::size_t q = 0; q < probe_z.size(); ++q) {
                const std::size_t idx = k * n_quant + nm + q;
                w.numeric_row(grid.t(k), {probe_z[q], stats.mean[idx], stats.variance[idx],
                                          std::sqrt(stats.variance[idx] / np)});
            }
        outputs.emplace_back("stats_probes.csv", w.str());
    }

    if (config.write_paths) {
        for (std::size_t p = 0; p < config.n_paths; ++p) {
            char name[48];
            std::snprintf(name, sizeof(name), "paths/path_%05zu.csv", p);
            outputs.emplace_back(name, path_csvs[p]);
            if (heat_type) {
                std::snprintf(name, sizeof(name), "fields/field_%05zu.csv", p);
                outputs.emplace_back(name, field_csvs[p]);
            }
        }
    }

    std::vector<std::string> seeds;
    for (std::size_t p = 0; p < config.n_paths; ++p)
        seeds.push_back(std::to_string(derive_stream_seed(config.master_seed, p)));

    {
        Json diag;
        diag["config_hash"] = config.config_hash();
        diag["master_seed"] = std::to_string(config.master_seed);
        diag["n_paths"] = config.n_paths;
        diag["iterations"] = iteration_counts;
        diag["sup_differences"] = sup_diffs;
        diag["path_seeds"] = seeds;
        if (config.type == RunConfig::ProblemType::heat) {
            const auto rep = heat::validate_hypotheses(config.heat_config);
            diag["hypotheses"] = Json{{"p", rep.p},
                                      {"p_required", rep.p_required},
                                      {"h1_ok", rep.h1_ok},
                                      {"h_integral_2p", rep.h_integral_2p},
                                      {"lipschitz_probe", rep.lipschitz_probe},
                                      {"lipschitz_hint", rep.lipschitz_hint},
                                      {"f2_ok", rep.f2_ok},
                                      {"f_at_zero_integral", rep.f_at_zero_integral},
                                      {"hoelder_bound", rep.hoelder_bound}};
        }
        outputs.emplace_back("diagnostics.json", diag.dump(2) + "\n");
    }

    Json manifest;
    manifest["config_hash"] = config.config_hash();
    manifest["master_seed"] = std::to_string(config.master_seed);
    manifest["seeds"] = seeds;
    Json files = Json::array();
    for (const auto& [rel, content] : outputs)
        files.push_back(Json{{"path", rel}, {"sha256", io::sha256_hex(content)}});
    manifest["files"] = files;
    outputs.emplace_back("manifest.json", manifest.dump(2) + "\n");

    for (const auto& [rel, content] : outputs) {
        const fs::path full = out_dir / rel;
        fs::create_directories(full.parent_path());
        io::write_file(full, content);
        result.files.push_back(rel);
    }
    return result;
}

/// executes the named invariant suite(s); writes a JSON report; 0 iff all pass
inline int run_verify(const RunConfig& config, const std::string& suite,
                      std::ostream& log = std::cout) {
    const std::vector<verify::CheckResult> checks = verify::run_suite(suite);
    bool all = true;
    Json jchecks = Json::array();
    for (const auto& c : checks) {
        all = all && c.pass;
        jchecks.push_back(Json{{"name", c.name},
                               {"observed", c.observed},
                               {"target", c.target},
                               {"pass", c.pass},
                               {"detail", c.detail}});
        log << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " observed=" << c.observed
            << " target=" << c.target << "\n";
    }
    Json report;
    report["suite"] = suite;
    report["config_hash"] = config.config_hash();
    report["all_pass"] = all;
    report["checks"] = jchecks;
    const fs::path out_dir = resolve_output_dir(config);
    fs::create_directories(out_dir);
    io::write_file(out_dir / ("verify_" + suite + ".json"), report.dump(2) + "\n");
    return all ? 0 : 1;
}

/// empirical-order study: relaxation vs closed form, alpha = 1 vs classical
/// on shared noise, and the RL residual, across halved grids
inline int run_convergence(const RunConfig& config, std::size_t levels,
                           std::ostream& log = std::cout) {
    if (levels < 3) throw std::invalid_argument("run_convergence: need at least 3 levels");
    const TimeGrid base = config.grid();

    struct Row {
        std::string study;
        std::size_t level;
        double dt;
        double error;
    };
    std::vector<Row> rows;

    // deterministic relaxation vs 1 - E_a(-t^a)
    const double alpha =
        config.type == RunConfig::ProblemType::heat ? config.heat_config.alpha : 0.75;
    for (std::size_t lvl = 0; lvl < levels; ++lvl) {
        const std::size_t n = base.n_steps << lvl;
        const TimeGrid grid(base.horizon() / static_cast<double>(n), n);
        solver::Problem p = verify::detail::relaxation_problem(alpha);
        p.horizon = grid.horizon();
        p.delay = grid.horizon() / 4.0;
        solver::MildSolver s(p, grid);
        const auto traj = s.picard_solve(verify::detail::zero_noise(grid));
        double sup = 0.0;
        for (std::size_t k = 0; k <= n; ++k) {
            const double t = grid.t(k);
            const double want =
                t == 0.0 ? 0.0
                         : 1.0 - specfun::mittag_leffler(alpha, 1.0, -std::pow(t, alpha));
            sup = std::max(sup, std::abs(traj.value(static_cast<std::ptrdiff_t>(k)) - want));
        }
        rows.push_back({"relaxation", lvl, grid.dt, sup});
    }

    // alpha = 1 stochastic vs the classical solver on shared noise
    for (std::size_t lvl = 0; lvl < levels; ++lvl) {
        const std::size_t n = base.n_steps << lvl;
        const TimeGrid grid(base.horizon() / static_cast<double>(n), n);
        solver::Problem p{1.0,
                          0.7,
                          operators::SpectralOperator({1.0, 4.0}),
                          grid.horizon(),
                          grid.horizon() / 4.0,
                          [](double, std::size_t) { return 1.0; },
                          [](double, const solver::DelaySegment& seg) {
                              operators::ModeVector f(seg.n_modes);
                              for (std::size_t m = 0; m < seg.n_modes; ++m)
                                  f[m] = 0.5 * seg.delayed(m);
                              return f;
                          },
                          [](double, std::size_t) { return 0.5; },
                          {1.0, 0.25},
                          0.25,
                          8.0};
        solver::MildSolver s(p, grid);
        double worst = 0.0;
        for (std::uint64_t path = 0; path < 8; ++path) {
            const auto noise = fbm::generate_qfbm(fbm::HurstParameter(0.7), grid, p.eigenvalues,
                                                  derive_stream_seed(config.master_seed, path));
            const auto ours = s.picard_solve(noise);
            const auto ref = classical::solve(p, grid, noise);
            for (std::size_t k = 0; k <= n; ++k) {
                double d2 = 0.0;
                for (std::size_t m = 0; m < 2; ++m) {
                    const double d = ours.value(static_cast<std::ptrdiff_t>(k), m) -
                                     ref.value(static_cast<std::ptrdiff_t>(k), m);
                    d2 += d * d;
                }
                worst = std::max(worst, std::sqrt(d2));
            }
        }
        rows.push_back({"alpha1_classical", lvl, grid.dt, worst});
    }

    // RL residual of the assembled equation
    for (std::size_t lvl = 0; lvl < levels; ++lvl) {
        const std::size_t n = base.n_steps << lvl;
        const TimeGrid grid(base.horizon() / static_cast<double>(n), n);
        solver::Problem p = verify::detail::relaxation_problem(alpha);
        p.horizon = grid.horizon();
        p.delay = grid.horizon() / 4.0;
        solver::MildSolver s(p, grid);
        const auto traj = s.picard_solve(verify::detail::zero_noise(grid));
        rows.push_back({"caputo_residual", lvl, grid.dt, solver::caputo_residual(traj, p)});
    }

    io::CsvWriter w(5);
    w.row({"study", "level", "dt", "error", "order"});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& r = rows[i];
        double order = 0.0;
        if (r.level > 0) {
            const Row& prev = rows[i - 1];
            if (prev.error > 0.0 && r.error > 0.0)
                order = std::log2(prev.error / r.error);
        }
        w.row({r.study, std::to_string(r.level), io::format_double(r.dt),
               io::format_double(r.error), r.level == 0 ? "" : io::format_double(order)});
        log << r.study << " level=" << r.level << " dt=" << r.dt << " error=" << r.error
            << (r.level > 0 ? " order=" + io::format_double(order) : "") << "\n";
    }
    const fs::path out_dir = resolve_output_dir(config);
    fs::create_directories(out_dir);
    io::write_file(out_dir / "convergence.csv", w.str());
    return 0;
}

}  // namespace fsde::harness
