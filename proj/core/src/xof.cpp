#include "covertchat/xof.hpp"

#include "covertchat/errors.hpp"

namespace covertchat {

namespace {

constexpr std::size_t kRate = 168; // 1344-bit rate of SHAKE128

constexpr std::uint64_t kRoundConstants[24] = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL,
    0x8000000080008000ULL, 0x000000000000808bULL, 0x0000000080000001ULL,
    0x8000000080008081ULL, 0x8000000000008009ULL, 0x000000000000008aULL,
    0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL,
    0x8000000000008003ULL, 0x8000000000008002ULL, 0x8000000000000080ULL,
    0x000000000000800aULL, 0x800000008000000aULL, 0x8000000080008081ULL,
    0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL};

constexpr unsigned kRotc[24] = {1,  3,  6,  10, 15, 21, 28, 36, 45, 55, 2,  14,
                                27, 41, 56, 8,  25, 43, 62, 18, 39, 61, 20, 44};

constexpr unsigned kPiln[24] = {10, 7,  11, 17, 18, 3, 5,  16, 8,  21, 24, 4,
                                15, 23, 19, 13, 12, 2, 20, 14, 22, 9,  6,  1};

inline std::uint64_t rotl64(std::uint64_t x, unsigned n) {
    return (x << n) | (x >> (64 - n));
}

void keccak_f1600(std::array<std::uint64_t, 25>& s) {
    for (int round = 0; round < 24; ++round) {
        // theta
        std::uint64_t bc[5];
        for (int i = 0; i < 5; ++i) {
            bc[i] = s[i] ^ s[i + 5] ^ s[i + 10] ^ s[i + 15] ^ s[i + 20];
        }
        for (int i = 0; i < 5; ++i) {
            std::uint64_t t = bc[(i + 4) % 5] ^ rotl64(bc[(i + 1) % 5], 1);
            for (int j = 0; j < 25; j += 5) s[j + i] ^= t;
        }
        // rho + pi
        std::uint64_t t = s[1];
        for (int i = 0; i < 24; ++i) {
            unsigned j = kPiln[i];
            std::uint64_t tmp = s[j];
            s[j] = rotl64(t, kRotc[i]);
            t = tmp;
        }
        // chi
        for (int j = 0; j < 25; j += 5) {
            std::uint64_t row[5];
            for (int i = 0; i < 5; ++i) row[i] = s[j + i];
            for (int i = 0; i < 5; ++i) {
                s[j + i] = row[i] ^ (~row[(i + 1) % 5] & row[(i + 2) % 5]);
            }
        }
        // iota
        s[0] ^= kRoundConstants[round];
    }
}

} // namespace

XofStream::XofStream(const Bytes& key_material) {
    if (key_material.empty()) {
        throw Error("XofStream requires non-empty key material");
    }
    absorb(key_material);
}

XofStream::XofStream(const Bytes& key_material, AllowEmpty) { absorb(key_material); }

void XofStream::absorb(const Bytes& key_material) {
    // Absorb with SHAKE domain padding 0x1F ... 0x80.
    std::size_t offset = 0;
    std::size_t remaining = key_material.size();
    const std::uint8_t* data = key_material.data();
    while (remaining >= kRate) {
        for (std::size_t i = 0; i < kRate; ++i) {
            state_[i / 8] ^= static_cast<std::uint64_t>(data[offset + i]) << (8 * (i % 8));
        }
        keccak_f1600(state_);
        offset += kRate;
        remaining -= kRate;
    }
    for (std::size_t i = 0; i < remaining; ++i) {
        state_[i / 8] ^= static_cast<std::uint64_t>(data[offset + i]) << (8 * (i % 8));
    }
    state_[remaining / 8] ^= static_cast<std::uint64_t>(0x1F) << (8 * (remaining % 8));
    state_[(kRate - 1) / 8] ^= static_cast<std::uint64_t>(0x80) << (8 * ((kRate - 1) % 8));
    byte_pos_ = kRate; // force a refill on first read
    bit_pos_ = 0;
}

XofStream::XofStream(std::string_view key_material)
    : XofStream(Bytes(key_material.begin(), key_material.end())) {}

void XofStream::refill() {
    keccak_f1600(state_);
    for (std::size_t i = 0; i < kRate; ++i) {
        block_[i] = static_cast<std::uint8_t>(state_[i / 8] >> (8 * (i % 8)));
    }
    byte_pos_ = 0;
}

std::uint32_t XofStream::next_chunk(unsigned bits) {
    if (bits < 1 || bits > 32) {
        throw Error("chunk size must be within [1, 32] bits");
    }
    std::uint32_t value = 0;
    for (unsigned taken = 0; taken < bits;) {
        if (byte_pos_ >= kRate) refill();
        std::uint8_t cur = block_[byte_pos_];
        unsigned avail = 8 - bit_pos_;
        unsigned need = bits - taken;
        unsigned use = need < avail ? need : avail;
        // MSB-first slice of the current byte
        unsigned shift = avail - use;
        std::uint32_t piece = (cur >> shift) & ((1u << use) - 1u);
        value = (value << use) | piece;
        taken += use;
        bit_pos_ += use;
        if (bit_pos_ == 8) {
            bit_pos_ = 0;
            ++byte_pos_;
        }
    }
    return value;
}

std::uint8_t XofStream::next_byte() {
    if (bit_pos_ != 0) {
        throw Error("byte read on a bit-misaligned XOF stream");
    }
    if (byte_pos_ >= kRate) refill();
    return block_[byte_pos_++];
}

Bytes XofStream::squeeze(std::size_t n) {
    Bytes out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = next_byte();
    return out;
}

Bytes shake128(const Bytes& input, std::size_t outlen) {
    XofStream stream(input, XofStream::AllowEmpty{});
    return stream.squeeze(outlen);
}

} // namespace covertchat
