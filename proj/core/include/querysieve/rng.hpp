#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace querysieve {

/// Deterministic random source. std::mt19937_64 output is pinned by the
/// standard; the distributions below are hand-rolled because the standard
/// library distributions are implementation-defined and would break
/// byte-identical reproducibility across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). n must be > 0.
    std::size_t uniform_index(std::size_t n) {
        // floor(u * n) is fine here: n is tiny compared to 2^53.
        auto idx = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
        return idx < n ? idx : n - 1;
    }

    /// Standard normal via Box-Muller (no cached spare, to keep the
    /// engine-call sequence position-independent).
    double normal() {
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace querysieve
