#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsde/common.hpp"
#include "fsde/io.hpp"
#include "fsde/solver.hpp"

namespace fsde::heat {

using operators::ModeVector;
using operators::SpectralOperator;
using solver::DelaySegment;
using solver::Problem;
using solver::Trajectory;

/// named spatial profiles on [0, pi] used for initial data and noise shapes
enum class SpatialProfile { zero, sine, parabola, modes };

inline SpatialProfile spatial_profile_from_string(const std::string& s) {
    if (s == "zero") return SpatialProfile::zero;
    if (s == "sine") return SpatialProfile::sine;
    if (s == "parabola") return SpatialProfile::parabola;
    if (s == "modes") return SpatialProfile::modes;
    throw std::invalid_argument("unknown spatial profile: " + s);
}

inline std::string to_string(SpatialProfile p) {
    switch (p) {
        case SpatialProfile::zero: return "zero";
        case SpatialProfile::sine: return "sine";
        case SpatialProfile::parabola: return "parabola";
        case SpatialProfile::modes: return "modes";
    }
    return "?";
}

/// drift catalog: nonlinearities with known Lipschitz structure
enum class DriftKind { zero, scaled_identity, bounded_sigmoid };

inline DriftKind drift_kind_from_string(const std::string& s) {
    if (s == "zero") return DriftKind::zero;
    if (s == "scaled-identity") return DriftKind::scaled_identity;
    if (s == "bounded-sigmoid") return DriftKind::bounded_sigmoid;
    throw std::invalid_argument("unknown drift kind: " + s);
}

inline std::string to_string(DriftKind k) {
    switch (k) {
        case DriftKind::zero: return "zero";
        case DriftKind::scaled_identity: return "scaled-identity";
        case DriftKind::bounded_sigmoid: return "bounded-sigmoid";
    }
    return "?";
}

/// description of a function of space (and optionally a mode-coefficient list)
struct SpatialSpec {
    SpatialProfile profile = SpatialProfile::zero;
    double amplitude = 0.0;
    int harmonic = 1;                  // for `sine`: sin(harmonic * z)
    std::vector<double> coefficients;  // for `modes`: direct e_n coefficients
};

/// Dirichlet heat equation on [0, pi]: A = d^2/dz^2, eigenvalues -n^2,
/// e_n = sqrt(2/pi) sin(n z), semigroup norm bound e^{-t} (M = 1, omega = 0).
struct HeatConfig {
    double alpha = 0.75;        // (1/2, 1)
    double hurst = 0.7;         // (1/2, 1)
    std::size_t n_modes = 32;
    double horizon = 1.0;
    double delay = 0.25;
    double lambda_decay = 2.0;  // lambda_n = n^{-decay}, decay > 1
    DriftKind drift_kind = DriftKind::scaled_identity;
    double drift_gain = 0.5;    // k in k x(t-r) or k tanh(x(t-r))
    SpatialSpec noise;          // gamma(t, z) = noise profile (time-constant)
    SpatialSpec initial;        // phi(t, z) = initial profile (held on [-r, 0])
    double integrability_exponent = 3.0;
    std::size_t spatial_resolution = 65;  // output z-points
};

inline double eigenfunction(std::size_t n, double z) {
    return std::sqrt(2.0 / pi) * std::sin(static_cast<double>(n) * z);
}

namespace detail {

/// composite Simpson projection <g, e_n> on [0, pi]; the point count is taken
/// at 4x the larger of mode count and output resolution (odd, Simpson needs it)
inline std::vector<double> project_onto_modes(const std::function<double(double)>& g,
                                              std::size_t n_modes, std::size_t resolution_hint) {
    std::size_t points = 4 * std::max(n_modes, resolution_hint);
    if (points % 2 == 1) ++points;  // even interval count
    const double h = pi / static_cast<double>(points);
    std::vector<double> coeffs(n_modes, 0.0);
    for (std::size_t n = 1; n <= n_modes; ++n) {
        CompensatedSum acc;
        for (std::size_t i = 0; i <= points; ++i) {
            const double z = h * static_cast<double>(i);
            const double w = (i == 0 || i == points) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            acc.add(w * g(z) * eigenfunction(n, z));
        }
        coeffs[n - 1] = acc.total() * h / 3.0;
        if (!std::isfinite(coeffs[n - 1]))
            throw std::runtime_error("projection produced a non-finite coefficient");
    }
    return coeffs;
}

inline std::vector<double> spatial_coefficients(const SpatialSpec& spec, std::size_t n_modes,
                                                std::size_t resolution_hint) {
    switch (spec.profile) {
        case SpatialProfile::zero:
            return std::vector<double>(n_modes, 0.0);
        case SpatialProfile::modes: {
            std::vector<double> c = spec.coefficients;
            c.resize(n_modes, 0.0);
            for (auto& v : c) v *= spec.amplitude;
            return c;
        }
        case SpatialProfile::sine: {
            const int k = spec.harmonic;
            return project_onto_modes(
                [&](double z) { return spec.amplitude * std::sin(k * z); }, n_modes,
                resolution_hint);
        }
        case SpatialProfile::parabola:
            return project_onto_modes([&](double z) { return spec.amplitude * z * (pi - z); },
                                      n_modes, resolution_hint);
    }
    throw std::logic_error("spatial_coefficients: bad profile");
}

}  // namespace detail

/// abstract Problem from the heat data: mu_n = n^2, data projected onto the
/// sine basis, drift from the catalog acting mode-wise on the delayed state.
inline Problem build_problem(const HeatConfig& config) {
    if (!(config.alpha > 0.5) || !(config.alpha < 1.0))
        throw solver::HypothesisViolation("alpha_range", "heat example needs alpha in (1/2, 1)");
    if (config.n_modes == 0) throw std::invalid_argument("build_problem: n_modes >= 1");
    if (!(config.lambda_decay > 1.0))
        throw std::invalid_argument("build_problem: lambda decay must exceed 1 (trace class)");

    const std::size_t nm = config.n_modes;
    std::vector<double> mu(nm), lambda(nm);
    for (std::size_t n = 0; n < nm; ++n) {
        mu[n] = static_cast<double>((n + 1) * (n + 1));
        lambda[n] = std::pow(static_cast<double>(n + 1), -config.lambda_decay);
    }

    const std::vector<double> phi_coeffs =
        detail::spatial_coefficients(config.initial, nm, config.spatial_resolution);
    const std::vector<double> gamma_coeffs =
        detail::spatial_coefficients(config.noise, nm, config.spatial_resolution);

    solver::DriftFn drift;
    const double k = config.drift_gain;
    switch (config.drift_kind) {
        case DriftKind::zero:
            drift = [nm](double, const DelaySegment&) { return ModeVector(nm, 0.0); };
            break;
        case DriftKind::scaled_identity:
            drift = [nm, k](double, const DelaySegment& seg) {
                ModeVector f(nm);
                for (std::size_t n = 0; n < nm; ++n) f[n] = k * seg.delayed(n);
                return f;
            };
            break;
        case DriftKind::bounded_sigmoid:
            drift = [nm, k](double, const DelaySegment& seg) {
                ModeVector f(nm);
                for (std::size_t n = 0; n < nm; ++n) f[n] = k * std::tanh(seg.delayed(n));
                return f;
            };
            break;
    }

    Problem p{config.alpha,
              config.hurst,
              SpectralOperator(mu, 1.0, 0.0),
              config.horizon,
              config.delay,
              [phi_coeffs](double, std::size_t n) { return phi_coeffs[n]; },
              std::move(drift),
              [gamma_coeffs](double, std::size_t n) { return gamma_coeffs[n]; },
              lambda,
              config.drift_kind == DriftKind::zero ? 0.0 : k * k,
              config.integrability_exponent};
    return p;
}

/// hypothesis report for (f_1)-(f_3), (h_1) and the Hoelder bound
struct HypothesisReport {
    double p = 0.0;
    double p_required = 0.0;       // 1/(2 alpha - 1)
    bool h1_ok = false;
    double h_integral_2p = 0.0;    // int_0^b ||h||_{L20}^{2p} ds
    double lipschitz_probe = 0.0;  // empirical max (f_2) ratio
    double lipschitz_hint = 0.0;
    bool f2_ok = false;
    double f_at_zero_integral = 0.0;  // int_0^b ||f(s, 0)||^2 ds
    double hoelder_bound = 0.0;       // b^{((2a-1)p-1)/p} (int ||h||^{2p})^{1/p}
    bool all_hard_ok = false;
};

/// Monte Carlo Lipschitz probe plus the integrability checks. The probe pairs
/// include one structured pair supported before b - r, where the (f_2) ratio
/// of the catalog drifts attains its Lipschitz constant.
inline HypothesisReport validate_hypotheses(const HeatConfig& config,
                                            std::size_t probe_pairs = 200,
                                            std::uint64_t probe_seed = 0x9E3779B9) {
    const Problem p = build_problem(config);
    HypothesisReport rep;
    rep.p = p.integrability_exponent;
    rep.p_required = 1.0 / (2.0 * p.alpha - 1.0);
    rep.h1_ok = rep.p > rep.p_required;
    rep.lipschitz_hint = p.lipschitz_hint;

    const std::size_t nm = p.n_modes();
    // h is time-constant here; the integrals are exact
    double h_norm_sq = 0.0;
    for (std::size_t n = 0; n < nm; ++n) {
        const double hn = p.noise_coeff(0.0, n);
        h_norm_sq += p.eigenvalues[n] * hn * hn;
    }
    rep.h_integral_2p = std::pow(h_norm_sq, rep.p) * p.horizon;
    rep.hoelder_bound = std::pow(p.horizon, ((2.0 * p.alpha - 1.0) * rep.p - 1.0) / rep.p) *
                        std::pow(rep.h_integral_2p, 1.0 / rep.p);

    // (f_3): catalog drifts vanish on the zero segment
    DelaySegment zero_seg;
    zero_seg.delay = p.delay;
    zero_seg.anchor = 0.0;
    zero_seg.dt = p.delay / 8.0;
    zero_seg.n_modes = nm;
    zero_seg.samples.assign(9 * nm, 0.0);
    const ModeVector f0 = p.drift(0.0, zero_seg);
    double f0_sq = 0.0;
    for (double v : f0) f0_sq += v * v;
    rep.f_at_zero_integral = f0_sq * p.horizon;

    rep.lipschitz_probe = solver::probe_lipschitz(p, probe_pairs, probe_seed);
    rep.f2_ok = config.drift_kind == DriftKind::zero ||
                rep.lipschitz_probe <= p.lipschitz_hint * (1.0 + 0.05);
    rep.all_hard_ok = rep.h1_ok && std::isfinite(rep.h_integral_2p) &&
                      std::isfinite(rep.f_at_zero_integral);
    return rep;
}

/// xi(t, z) = sum_n x_n(t) e_n(z); boundary values are exactly zero
inline std::vector<double> to_physical(const Trajectory& traj, std::ptrdiff_t k,
                                       const std::vector<double>& z_points) {
    std::vector<double> out(z_points.size(), 0.0);
    for (std::size_t i = 0; i < z_points.size(); ++i) {
        const double z = z_points[i];
        if (z < 0.0 || z > pi) throw std::invalid_argument("to_physical: z outside [0, pi]");
        if (z == 0.0 || z == pi) continue;  // Dirichlet boundary, exactly 0
        CompensatedSum acc;
        for (std::size_t n = 0; n < traj.n_modes; ++n)
            acc.add(traj.value(k, n) * eigenfunction(n + 1, z));
        out[i] = acc.total();
    }
    return out;
}

inline std::vector<double> uniform_z_points(std::size_t count) {
    if (count < 2) throw std::invalid_argument("uniform_z_points: need at least 2 points");
    std::vector<double> z(count);
    for (std::size_t i = 0; i < count; ++i)
        z[i] = pi * static_cast<double>(i) / static_cast<double>(count - 1);
    z.back() = pi;
    return z;
}

/// physical-field CSV (t, z, value) over the whole trajectory
inline std::string field_csv(const Trajectory& traj, const std::vector<double>& z_points) {
    io::CsvWriter w(3);
    w.row({"t", "z", "value"});
    for (std::size_t k = 0; k <= traj.grid.n_steps; ++k) {
        const auto field = to_physical(traj, static_cast<std::ptrdiff_t>(k), z_points);
        for (std::size_t i = 0; i < z_points.size(); ++i)
            w.numeric_row(traj.grid.t(k), {z_points[i], field[i]});
    }
    return w.str();
}

}  // namespace fsde::heat
