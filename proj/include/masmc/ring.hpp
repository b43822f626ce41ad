#pragma once

#include <compare>
#include <cstdint>

#include "masmc/errors.hpp"
#include "masmc/rng.hpp"

namespace masmc {

// 2^61 - 1, prime. Large enough that random pads and shares never collide
// with plaintext values in practice.
inline constexpr uint64_t kDefaultModulus = (uint64_t{1} << 61) - 1;

// Prime small enough for frequency tests over the whole ring.
inline constexpr uint64_t kSmallTestModulus = 251;

bool is_prime_u64(uint64_t n);

// An element of Z_M. Always stored reduced: 0 <= v < M.
struct RingValue {
    uint64_t v = 0;

    friend constexpr bool operator==(RingValue, RingValue) = default;
    friend constexpr auto operator<=>(RingValue, RingValue) = default;
};

// Arithmetic over Z_M for a fixed prime modulus M >= 2.
class Ring {
public:
    explicit Ring(uint64_t modulus);

    uint64_t modulus() const { return m_; }

    bool contains(RingValue x) const { return x.v < m_; }

    RingValue reduce(uint64_t x) const { return {x % m_}; }

    RingValue reduce_signed(int64_t x) const {
        int64_t r = x % static_cast<int64_t>(m_);
        if (r < 0) {
            r += static_cast<int64_t>(m_);
        }
        return {static_cast<uint64_t>(r)};
    }

    RingValue add(RingValue a, RingValue b) const {
        uint64_t s = a.v + b.v; // m_ < 2^63, no overflow
        if (s >= m_) {
            s -= m_;
        }
        return {s};
    }

    RingValue sub(RingValue a, RingValue b) const {
        return {a.v >= b.v ? a.v - b.v : a.v + (m_ - b.v)};
    }

    RingValue mul(RingValue a, RingValue b) const {
        return {static_cast<uint64_t>(
            (static_cast<__uint128_t>(a.v) * b.v) % m_)};
    }

    RingValue uniform(Substream& rng) const { return {rng.below(m_)}; }

private:
    uint64_t m_;
};

// Additive output mask. Each decision maker holds one pad; the pads sum to
// the master pad held by the designated opener.
struct OutputPad {
    RingValue pad;
    uint32_t opener_id = 0;
};

inline RingValue apply_pad(const Ring& ring, RingValue v, const OutputPad& p) {
    return ring.add(v, p.pad);
}

inline RingValue remove_pad(const Ring& ring, RingValue v, const OutputPad& p) {
    return ring.sub(v, p.pad);
}

} // namespace masmc
