#pragma once

#include <cmath>
#include <cstdint>

namespace sumidx::rng {

/// splitmix64 step. Stable across platforms; used everywhere randomness is
/// needed so that results do not depend on libstdc++ distribution details.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Derives an independent child seed for work item `stream` of a task seeded
/// with `master`. Child streams are reproducible regardless of the order in
/// which work items run.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t s = master ^ (0xD1B54A32D192ED03ull * (stream + 1));
    splitmix64(s);
    return splitmix64(s);
}

/// Minimal deterministic generator on top of splitmix64.
class Generator {
public:
    explicit Generator(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform double in [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1]; safe as a log() argument.
    double next_unit_open() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    /// Fair coin mapped to -1.0 / +1.0.
    double next_sign() { return (next_u64() >> 63) ? 1.0 : -1.0; }

    /// Standard normal via Box-Muller (one value per call, second cached).
    double next_gaussian() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        const double u1 = next_unit_open();
        const double u2 = next_unit();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925286766559 * u2;
        cached_ = radius * std::sin(angle);
        has_cached_ = true;
        return radius * std::cos(angle);
    }

    /// Child generator for an independent stream.
    Generator split(std::uint64_t stream) const { return Generator(derive_seed(state_, stream)); }

private:
    std::uint64_t state_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

} // namespace sumidx::rng
