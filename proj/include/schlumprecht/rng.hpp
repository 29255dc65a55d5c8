#pragma once

#include <cstdint>

namespace schlumprecht {

// SplitMix64. Seeded streams must be identical across platforms and standard
// library versions, which rules out <random> distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1), 53 bits
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi]
    std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next_u64() % span);
    }

    // uniform in [lo, hi)
    double next_real(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // magnitude in [0.1, 1.1) with a random sign; never zero
    double next_value() {
        const double mag = 0.1 + next_double();
        return next_u64() & 1 ? mag : -mag;
    }

private:
    std::uint64_t state_;
};

}  // namespace schlumprecht
