#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace teeshield {

inline constexpr uint64_t kFnvOffset = 1469598103934665603ull;
inline constexpr uint64_t kFnvPrime = 1099511628211ull;

// FNV-1a over raw bytes. Used for content addressing and seed derivation,
// not for anything adversarial.
inline uint64_t fnv1a64(const void* data, size_t n, uint64_t h = kFnvOffset) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
        h ^= static_cast<uint64_t>(p[i]);
        h *= kFnvPrime;
    }
    return h;
}

inline uint64_t fnv1a64(std::string_view s, uint64_t h = kFnvOffset) {
    return fnv1a64(s.data(), s.size(), h);
}

inline uint64_t fnv1a64_u64(uint64_t v, uint64_t h = kFnvOffset) {
    return fnv1a64(&v, sizeof(v), h);
}

// Derives an independent seed for a named stream from a base seed.
inline uint64_t derive_seed(uint64_t seed, std::string_view stream) {
    return fnv1a64(stream, fnv1a64_u64(seed));
}

std::string hash_hex(uint64_t h);

// FNV-1a of a whole file. Throws ValidationError if the file cannot be read.
uint64_t hash_file(const std::string& path);

}  // namespace teeshield
