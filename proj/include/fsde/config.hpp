#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsde/heat.hpp"
#include "fsde/io.hpp"
#include "fsde/solver.hpp"

namespace fsde::harness {

using Json = nlohmann::ordered_json;

/// raw diagonal problem given directly in the eigenbasis
struct SpectralConfig {
    double alpha = 0.75;
    double hurst = 0.7;
    std::vector<double> mu;              // generator eigenvalues
    std::vector<double> lambda;          // Q eigenvalues
    double horizon = 1.0;
    double delay = 0.25;
    std::vector<double> initial_modes;   // phi, held constant on [-r, 0]
    std::string drift_kind = "zero";     // heat drift catalog, acting mode-wise
    double drift_gain = 0.0;
    std::vector<double> noise_modes;     // h_n, time-constant
    double integrability_exponent = 3.0;
};

struct RunConfig {
    enum class ProblemType { heat, spectral };

    ProblemType type = ProblemType::heat;
    heat::HeatConfig heat_config;
    SpectralConfig spectral_config;

    std::size_t n_steps = 256;

    std::size_t n_paths = 8;
    std::uint64_t master_seed = 42;
    std::size_t worker_count = 1;

    std::string output_directory = "out";
    bool write_paths = false;
    std::size_t probe_points = 3;

    std::string verify_suite = "all";

    TimeGrid grid() const {
        const double horizon =
            type == ProblemType::heat ? heat_config.horizon : spectral_config.horizon;
        return TimeGrid(horizon / static_cast<double>(n_steps), n_steps);
    }

    solver::Problem build_problem() const;

    Json to_json() const;
    static RunConfig from_json(const Json& j);
    static RunConfig from_file(const std::filesystem::path& path);

    std::string canonical_dump() const { return to_json().dump(2) + "\n"; }

    /// hash of the experiment identity: execution knobs (worker count, output
    /// location) do not change the mathematical run and are excluded
    std::string config_hash() const {
        Json j = to_json();
        j["ensemble"].erase("worker_count");
        j["output"].erase("directory");
        return io::sha256_hex(j.dump(2) + "\n");
    }
};

namespace detail {

inline Json spatial_to_json(const heat::SpatialSpec& s) {
    Json j;
    j["profile"] = heat::to_string(s.profile);
    j["amplitude"] = s.amplitude;
    j["harmonic"] = s.harmonic;
    if (!s.coefficients.empty()) j["coefficients"] = s.coefficients;
    return j;
}

inline heat::SpatialSpec spatial_from_json(const Json& j) {
    heat::SpatialSpec s;
    s.profile = heat::spatial_profile_from_string(j.at("profile").get<std::string>());
    s.amplitude = j.value("amplitude", 0.0);
    s.harmonic = j.value("harmonic", 1);
    if (j.contains("coefficients")) s.coefficients = j.at("coefficients").get<std::vector<double>>();
    return s;
}

template <typename T>
T require(const Json& j, const std::string& key) {
    if (!j.contains(key)) throw std::invalid_argument("config: missing field '" + key + "'");
    return j.at(key).get<T>();
}

}  // namespace detail

inline solver::Problem RunConfig::build_problem() const {
    if (type == ProblemType::heat) return heat::build_problem(heat_config);

    const SpectralConfig& s = spectral_config;
    if (s.mu.empty()) throw std::invalid_argument("spectral config: need at least one eigenvalue");
    const std::size_t nm = s.mu.size();
    auto pad = [nm](std::vector<double> v) {
        v.resize(nm, 0.0);
        return v;
    };
    const std::vector<double> phi = pad(s.initial_modes);
    const std::vector<double> noise = pad(s.noise_modes);
    std::vector<double> lambda = s.lambda.empty() ? std::vector<double>(nm, 1.0) : pad(s.lambda);

    const heat::DriftKind kind = heat::drift_kind_from_string(s.drift_kind);
    const double gain = s.drift_gain;
    solver::DriftFn drift;
    switch (kind) {
        case heat::DriftKind::zero:
            drift = [nm](double, const solver::DelaySegment&) {
                return operators::ModeVector(nm, 0.0);
            };
            break;
        case heat::DriftKind::scaled_identity:
            drift = [nm, gain](double, const solver::DelaySegment& seg) {
                operators::ModeVector f(nm);
                for (std::size_t n = 0; n < nm; ++n) f[n] = gain * seg.delayed(n);
                return f;
            };
            break;
        case heat::DriftKind::bounded_sigmoid:
            drift = [nm, gain](double, const solver::DelaySegment& seg) {
                operators::ModeVector f(nm);
                for (std::size_t n = 0; n < nm; ++n) f[n] = gain * std::tanh(seg.delayed(n));
                return f;
            };
            break;
    }

    solver::Problem p{s.alpha,
                      s.hurst,
                      operators::SpectralOperator(s.mu, 1.0, 0.0),
                      s.horizon,
                      s.delay,
                      [phi](double, std::size_t n) { return phi[n]; },
                      std::move(drift),
                      [noise](double, std::size_t n) { return noise[n]; },
                      std::move(lambda),
                      kind == heat::DriftKind::zero ? 0.0 : gain * gain,
                      s.integrability_exponent};
    return p;
}

inline Json RunConfig::to_json() const {
    Json j;
    Json problem;
    if (type == ProblemType::heat) {
        const heat::HeatConfig& c = heat_config;
        problem["type"] = "heat";
        problem["alpha"] = c.alpha;
        problem["hurst"] = c.hurst;
        problem["n_modes"] = c.n_modes;
        problem["horizon"] = c.horizon;
        problem["delay"] = c.delay;
        problem["lambda_decay"] = c.lambda_decay;
        problem["drift"] = Json{{"kind", heat::to_string(c.drift_kind)}, {"gain", c.drift_gain}};
        problem["noise"] = detail::spatial_to_json(c.noise);
        problem["initial"] = detail::spatial_to_json(c.initial);
        problem["integrability_exponent"] = c.integrability_exponent;
        problem["spatial_resolution"] = c.spatial_resolution;
    } else {
        const SpectralConfig& s = spectral_config;
        problem["type"] = "spectral";
        problem["alpha"] = s.alpha;
        problem["hurst"] = s.hurst;
        problem["mu"] = s.mu;
        problem["lambda"] = s.lambda;
        problem["horizon"] = s.horizon;
        problem["delay"] = s.delay;
        problem["initial_modes"] = s.initial_modes;
        problem["drift"] = Json{{"kind", s.drift_kind}, {"gain", s.drift_gain}};
        problem["noise_modes"] = s.noise_modes;
        problem["integrability_exponent"] = s.integrability_exponent;
    }
    j["problem"] = problem;
    j["grid"] = Json{{"n_steps", n_steps}};
    j["ensemble"] = Json{{"n_paths", n_paths},
                         {"master_seed", std::to_string(master_seed)},
                         {"worker_count", worker_count}};
    j["output"] = Json{{"directory", output_directory},
                       {"write_paths", write_paths},
                       {"probe_points", probe_points}};
    j["verify"] = Json{{"suite", verify_suite}};
    return j;
}

inline RunConfig RunConfig::from_json(const Json& j) {
    RunConfig c;
    const Json& problem = j.at("problem");
    const std::string type = detail::require<std::string>(problem, "type");
    if (type == "heat") {
        c.type = ProblemType::heat;
        heat::HeatConfig& hc = c.heat_config;
        hc.alpha = detail::require<double>(problem, "alpha");
        hc.hurst = detail::require<double>(problem, "hurst");
        hc.n_modes = detail::require<std::size_t>(problem, "n_modes");
        hc.horizon = detail::require<double>(problem, "horizon");
        hc.delay = detail::require<double>(problem, "delay");
        hc.lambda_decay = problem.value("lambda_decay", 2.0);
        if (problem.contains("drift")) {
            hc.drift_kind =
                heat::drift_kind_from_string(problem.at("drift").value("kind", "zero"));
            hc.drift_gain = problem.at("drift").value("gain", 0.0);
        }
        if (problem.contains("noise")) hc.noise = detail::spatial_from_json(problem.at("noise"));
        if (problem.contains("initial"))
            hc.initial = detail::spatial_from_json(problem.at("initial"));
        hc.integrability_exponent = problem.value("integrability_exponent", 3.0);
        hc.spatial_resolution = problem.value("spatial_resolution", std::size_t{65});
    } else if (type == "spectral") {
        c.type = ProblemType::spectral;
        SpectralConfig& s = c.spectral_config;
        s.alpha = detail::require<double>(problem, "alpha");
        s.hurst = detail::require<double>(problem, "hurst");
        s.mu = detail::require<std::vector<double>>(problem, "mu");
        if (problem.contains("lambda")) s.lambda = problem.at("lambda").get<std::vector<double>>();
        s.horizon = detail::require<double>(problem, "horizon");
        s.delay = detail::require<double>(problem, "delay");
        if (problem.contains("initial_modes"))
            s.initial_modes = problem.at("initial_modes").get<std::vector<double>>();
        if (problem.contains("drift")) {
            s.drift_kind = problem.at("drift").value("kind", "zero");
            s.drift_gain = problem.at("drift").value("gain", 0.0);
        }
        if (problem.contains("noise_modes"))
            s.noise_modes = problem.at("noise_modes").get<std::vector<double>>();
        s.integrability_exponent = problem.value("integrability_exponent", 3.0);
    } else {
        throw std::invalid_argument("config: unknown problem type '" + type + "'");
    }

    c.n_steps = detail::require<std::size_t>(j.at("grid"), "n_steps");
    if (j.contains("ensemble")) {
        const Json& e = j.at("ensemble");
        c.n_paths = e.value("n_paths", std::size_t{1});
        if (c.n_paths == 0) throw std::invalid_argument("config: n_paths must be >= 1");
        if (e.contains("master_seed")) {
            const auto& seed = e.at("master_seed");
            c.master_seed = seed.is_string() ? std::stoull(seed.get<std::string>())
                                             : seed.get<std::uint64_t>();
        }
        c.worker_count = e.value("worker_count", std::size_t{1});
        if (c.worker_count == 0) throw std::invalid_argument("config: worker_count must be >= 1");
    }
    if (j.contains("output")) {
        const Json& o = j.at("output");
        c.output_directory = o.value("directory", std::string("out"));
        c.write_paths = o.value("write_paths", false);
        c.probe_points = o.value("probe_points", std::size_t{3});
    }
    if (j.contains("verify")) c.verify_suite = j.at("verify").value("suite", std::string("all"));
    return c;
}

inline RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    return from_json(Json::parse(io::read_file(path)));
}

}  // namespace fsde::harness
