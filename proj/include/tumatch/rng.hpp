#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace tumatch {

// Seeded generator with hand-rolled output mappings, so streams are identical
// across standard-library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // uniform on [0, 1) with 53 random bits
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Box-Muller, one value per two uniforms
    double normal() {
        double u1 = uniform();
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.283185307179586476925286766559 * u2);
    }

    std::uint64_t bits() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

} // namespace tumatch
