#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsde {

inline constexpr double pi = 3.14159265358979323846;

/// Uniform grid t_k = k*dt, k = 0..n_steps. horizon() = dt*n_steps.
struct TimeGrid {
    double dt = 0.0;
    std::size_t n_steps = 0;

    TimeGrid() = default;
    TimeGrid(double dt_, std::size_t n_steps_) : dt(dt_), n_steps(n_steps_) {
        if (!(dt > 0.0) || n_steps == 0)
            throw std::invalid_argument("TimeGrid: need dt > 0 and n_steps >= 1");
        if (!std::isfinite(dt * static_cast<double>(n_steps)))
            throw std::invalid_argument("TimeGrid: horizon not finite");
    }

    double t(std::size_t k) const { return dt * static_cast<double>(k); }
    double horizon() const { return dt * static_cast<double>(n_steps); }
    std::size_t n_points() const { return n_steps + 1; }

    bool operator==(const TimeGrid& o) const { return dt == o.dt && n_steps == o.n_steps; }
};

/// Neumaier-compensated accumulator. total() applies the carry.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            carry += (sum - t) + x;
        else
            carry += (x - t) + sum;
        sum = t;
    }
    double total() const { return sum + carry; }
};

/// sin(pi*x) with exact argument reduction; exact zeros at integers.
inline double sin_pi(double x) {
    if (!std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
    double r = x - 2.0 * std::floor(0.5 * x);  // r in [0, 2)
    double sign = 1.0;
    if (r >= 1.0) {
        sign = -1.0;
        r -= 1.0;
    }
    if (r > 0.5) r = 1.0 - r;
    return sign * std::sin(pi * r);
}

inline bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

// --- deterministic RNG ------------------------------------------------------
//
// Stream derivation is part of the output contract: results must be identical
// for any worker count, so every path/mode gets its own generator seeded by a
// fixed 64-bit mix of (master, index).

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// seed for substream `index` of `master`: two splitmix64 steps of
/// master XOR (golden-ratio constant * (index+1)).
inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master ^ (0x9E3779B97F4A7C15ULL * (index + 1));
    (void)splitmix64(s);
    return splitmix64(s);
}

/// xoshiro256** with splitmix64 seed expansion; normals via Box-Muller.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;  // all-zero state is invalid
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// uniform in (0, 1]
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    void fill_normal(std::vector<double>& out) {
        for (auto& x : out) x = next_normal();
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4] = {};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace fsde
