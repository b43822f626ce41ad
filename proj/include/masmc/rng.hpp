#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

#include "masmc/errors.hpp"

namespace masmc {

// splitmix64 step: advances state and returns the next 64-bit output.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline uint64_t mix_combine(uint64_t a, uint64_t b) {
    uint64_t s = a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
    return splitmix64(s);
}

inline uint64_t hash_label(std::string_view label) {
    // FNV-1a
    uint64_t h = 0xcbf29ce484222325ull;
    for (char c : label) {
        h ^= static_cast<uint8_t>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

// Deterministic random stream addressed by (seed, purpose label, indices).
// Every draw in the project comes from one of these, so a run is a pure
// function of the master seed and the stream addresses.
class Substream {
public:
    Substream(uint64_t seed, std::string_view label,
              std::initializer_list<uint64_t> indices = {})
        : state_(mix_combine(seed, hash_label(label))) {
        for (uint64_t idx : indices) {
            state_ = mix_combine(state_, idx);
        }
    }

    uint64_t next() { return splitmix64(state_); }

    // Unbiased uniform draw from [0, bound) by rejection sampling.
    uint64_t below(uint64_t bound) {
        if (bound == 0) {
            throw DomainError("Substream::below: bound must be positive");
        }
        const uint64_t reject_under = (0 - bound) % bound; // 2^64 mod bound
        for (;;) {
            uint64_t r = next();
            if (r >= reject_under) {
                return r % bound;
            }
        }
    }

private:
    uint64_t state_;
};

inline uint64_t derive_u64(uint64_t seed, std::string_view label,
                           std::initializer_list<uint64_t> indices = {}) {
    return Substream(seed, label, indices).next();
}

} // namespace masmc
