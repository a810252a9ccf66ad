#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "teeshield/hash.hpp"

namespace teeshield {

// Deterministic RNG: mt19937_64 with explicit double conversion so results
// do not depend on libstdc++ distribution internals. Every consumer names
// its stream, which keeps runs reproducible when stages are added/removed.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}
    Rng(uint64_t seed, std::string_view stream) : gen_(derive_seed(seed, stream)) {}

    uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller without a cached spare, so the stream position is
    // a simple function of the number of draws.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    // Unbiased integer in [0, n), n > 0.
    size_t index(size_t n) {
        const uint64_t bound = n;
        const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        uint64_t v = gen_();
        while (v >= limit) v = gen_();
        return static_cast<size_t>(v % bound);
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        if (v.size() < 2) return;
        for (size_t i = v.size() - 1; i > 0; --i) {
            std::swap(v[i], v[index(i + 1)]);
        }
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace teeshield
