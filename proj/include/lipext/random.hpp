#pragma once

#include <cstdint>
#include <random>

namespace lipext {

// All sampling goes through std::mt19937_64 seeded once per stage.
// Doubles take the top 53 bits: (next >> 11) * 2^-53, giving [0, 1).
// Integers in [0, n) use rejection on the top of the range, then modulo.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t index(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = engine_();
        while (v >= limit) v = engine_();
        return v % n;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace lipext
