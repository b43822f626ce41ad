#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "masmc/ring.hpp"
#include "masmc/rng.hpp"

namespace masmc {

// Additive fragments of one input; the shares sum to the value mod M.
using ShareVector = std::vector<RingValue>;

// Splits v into fragment_count additive shares. The first r-1 are uniform
// ring elements, the last one completes the sum.
ShareVector split_into_shares(const Ring& ring, RingValue v,
                              uint32_t fragment_count, Substream& rng);

RingValue recombine_shares(const Ring& ring, std::span<const RingValue> shares);

} // namespace masmc
