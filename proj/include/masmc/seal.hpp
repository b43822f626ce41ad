#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "masmc/errors.hpp"

namespace masmc {

enum class Role : uint8_t {
    party = 0,
    decision_maker = 1,
    agent = 2,
    opener = 3,
};

// One ordered (sender -> receiver) channel.
struct ChannelId {
    Role sender_role;
    uint32_t sender_index;
    Role receiver_role;
    uint32_t receiver_index;
};

struct ChannelKey {
    ChannelId id;
    std::array<uint8_t, 32> bytes;
};

// Keys are a pure function of (master seed, channel id), so both endpoints
// of a channel derive the same key without any exchange.
ChannelKey derive_channel_key(uint64_t master_seed, const ChannelId& id);

struct SealedMessage {
    uint64_t nonce = 0;
    std::vector<uint8_t> body; // ciphertext
    std::array<uint8_t, 16> tag{};
};

// Confidential + authenticated sealing: keyed stream XOR plus a keyed tag
// over (nonce, length, ciphertext). Deterministic from (key, nonce, plaintext);
// distinct nonces give unrelated keystreams.
SealedMessage channel_seal(const ChannelKey& key, uint64_t nonce,
                           std::span<const uint8_t> plaintext);

// Returns the plaintext iff the tag verifies; throws AuthFailure otherwise.
std::vector<uint8_t> channel_open(const ChannelKey& key, const SealedMessage& msg);

// Per-channel nonce discipline: a counter plus a used-nonce set, so a reuse
// attempt is an error rather than a silent keystream repeat.
class ChannelSealer {
public:
    explicit ChannelSealer(ChannelKey key, uint64_t first_nonce = 0)
        : key_(key), next_nonce_(first_nonce) {}

    SealedMessage seal(std::span<const uint8_t> plaintext);
    SealedMessage seal_with_nonce(uint64_t nonce, std::span<const uint8_t> plaintext);

    const ChannelKey& key() const { return key_; }

private:
    ChannelKey key_;
    uint64_t next_nonce_;
    std::set<uint64_t> used_;
};

} // namespace masmc
