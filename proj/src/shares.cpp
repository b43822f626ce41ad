#include "masmc/shares.hpp"

namespace masmc {

ShareVector split_into_shares(const Ring& ring, RingValue v,
                              uint32_t fragment_count, Substream& rng) {
    if (fragment_count == 0) {
        throw InvalidFragmentCount("fragment count must be >= 1");
    }
    ShareVector shares;
    shares.reserve(fragment_count);
    RingValue drawn_sum{0};
    for (uint32_t i = 0; i + 1 < fragment_count; ++i) {
        RingValue s = ring.uniform(rng);
        drawn_sum = ring.add(drawn_sum, s);
        shares.push_back(s);
    }
    shares.push_back(ring.sub(v, drawn_sum));
    return shares;
}

RingValue recombine_shares(const Ring& ring, std::span<const RingValue> shares) {
    if (shares.empty()) {
        throw EmptyShareVector("cannot recombine an empty share vector");
    }
    RingValue sum{0};
    for (RingValue s : shares) {
        sum = ring.add(sum, s);
    }
    return sum;
}

} // namespace masmc
