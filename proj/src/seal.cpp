#include "masmc/seal.hpp"

#include <algorithm>
#include <cstring>

#include "masmc/rng.hpp"

namespace masmc {

namespace {

uint64_t fold_key(const ChannelKey& key) {
    uint64_t acc = 0x243f6a8885a308d3ull; // pi digits, nothing up the sleeve
    for (size_t w = 0; w < 4; ++w) {
        uint64_t word = 0;
        for (size_t b = 0; b < 8; ++b) {
            word |= static_cast<uint64_t>(key.bytes[w * 8 + b]) << (8 * b);
        }
        acc = mix_combine(acc, word);
    }
    return acc;
}

// Absorbs nonce, length and every 8-byte chunk of data into a chained mix.
std::array<uint8_t, 16> compute_tag(const ChannelKey& key, uint64_t nonce,
                                    std::span<const uint8_t> data) {
    uint64_t st = derive_u64(fold_key(key), "seal.tag", {nonce, data.size()});
    for (size_t off = 0; off < data.size(); off += 8) {
        uint64_t word = 0;
        const size_t n = std::min<size_t>(8, data.size() - off);
        for (size_t b = 0; b < n; ++b) {
            word |= static_cast<uint64_t>(data[off + b]) << (8 * b);
        }
        st = mix_combine(st, word);
    }
    std::array<uint8_t, 16> tag{};
    uint64_t lo = splitmix64(st);
    uint64_t hi = splitmix64(st);
    for (size_t b = 0; b < 8; ++b) {
        tag[b] = static_cast<uint8_t>(lo >> (8 * b));
        tag[8 + b] = static_cast<uint8_t>(hi >> (8 * b));
    }
    return tag;
}

void xor_keystream(const ChannelKey& key, uint64_t nonce,
                   std::span<uint8_t> data) {
    Substream ks(fold_key(key), "seal.keystream", {nonce});
    for (size_t off = 0; off < data.size(); off += 8) {
        uint64_t word = ks.next();
        const size_t n = std::min<size_t>(8, data.size() - off);
        for (size_t b = 0; b < n; ++b) {
            data[off + b] ^= static_cast<uint8_t>(word >> (8 * b));
        }
    }
}

} // namespace

ChannelKey derive_channel_key(uint64_t master_seed, const ChannelId& id) {
    Substream stream(master_seed, "channel.key",
                     {static_cast<uint64_t>(id.sender_role), id.sender_index,
                      static_cast<uint64_t>(id.receiver_role), id.receiver_index});
    ChannelKey key{};
    key.id = id;
    for (size_t w = 0; w < 4; ++w) {
        uint64_t word = stream.next();
        for (size_t b = 0; b < 8; ++b) {
            key.bytes[w * 8 + b] = static_cast<uint8_t>(word >> (8 * b));
        }
    }
    return key;
}

SealedMessage channel_seal(const ChannelKey& key, uint64_t nonce,
                           std::span<const uint8_t> plaintext) {
    SealedMessage msg;
    msg.nonce = nonce;
    msg.body.assign(plaintext.begin(), plaintext.end());
    xor_keystream(key, nonce, msg.body);
    msg.tag = compute_tag(key, nonce, msg.body);
    return msg;
}

std::vector<uint8_t> channel_open(const ChannelKey& key, const SealedMessage& msg) {
    const auto expected = compute_tag(key, msg.nonce, msg.body);
    if (std::memcmp(expected.data(), msg.tag.data(), expected.size()) != 0) {
        throw AuthFailure("sealed message failed authentication");
    }
    std::vector<uint8_t> plaintext = msg.body;
    xor_keystream(key, msg.nonce, plaintext);
    return plaintext;
}

SealedMessage ChannelSealer::seal(std::span<const uint8_t> plaintext) {
    while (used_.contains(next_nonce_)) {
        ++next_nonce_;
    }
    uint64_t nonce = next_nonce_++;
    used_.insert(nonce);
    return channel_seal(key_, nonce, plaintext);
}

SealedMessage ChannelSealer::seal_with_nonce(uint64_t nonce,
                                             std::span<const uint8_t> plaintext) {
    if (!used_.insert(nonce).second) {
        throw NonceReuse("nonce already used on this channel");
    }
    return channel_seal(key_, nonce, plaintext);
}

} // namespace masmc
