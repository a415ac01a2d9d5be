#pragma once

#include <cstdint>
#include <random>

namespace swarmsim {

/// Seeded random stream owned by the engine.
///
/// std::mt19937_64 has a standardized output sequence; the std
/// distributions do not, so the conversions to floating point are done
/// here to keep draws identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    void reseed(std::uint64_t seed) { engine_.seed(seed); }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// True with probability p. p <= 0 and p >= 1 never consume a draw
    /// differently from other values: exactly one draw per call.
    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace swarmsim
