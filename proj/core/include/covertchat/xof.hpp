#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "covertchat/util.hpp"

namespace covertchat {

/// SHAKE128 extendable-output function over Keccak-f[1600].
///
/// Squeezing is incremental and unbounded. Bit chunks are read MSB-first
/// within each squeezed byte, bytes in squeeze order. This bit order is
/// wire-critical: sender and receiver position schedules are only equal if
/// both sides slice the XOF stream the same way.
class XofStream {
public:
    /// Absorbs the key material and positions the stream at output byte 0.
    /// The key must be non-empty.
    explicit XofStream(const Bytes& key_material);
    explicit XofStream(std::string_view key_material);

    /// Next chunk of `bits` bits (1..32) as an integer in [0, 2^bits).
    std::uint32_t next_chunk(unsigned bits);

    /// Next full byte of XOF output (consumes any partial bits of the
    /// current byte first by discarding them is NOT done; byte reads are
    /// only valid while the stream is byte-aligned).
    std::uint8_t next_byte();

    /// Squeezes `n` bytes; requires byte alignment.
    Bytes squeeze(std::size_t n);

private:
    struct AllowEmpty {};
    XofStream(const Bytes& key_material, AllowEmpty);
    friend Bytes shake128(const Bytes& input, std::size_t outlen);

    void absorb(const Bytes& input);
    void refill();

    std::array<std::uint64_t, 25> state_{};
    std::array<std::uint8_t, 168> block_{}; // SHAKE128 rate = 168 bytes
    std::size_t byte_pos_ = 0;              // next unread byte in block_
    unsigned bit_pos_ = 0;                  // bits already consumed of that byte
};

/// One-shot SHAKE128 with `outlen` output bytes.
Bytes shake128(const Bytes& input, std::size_t outlen);

} // namespace covertchat
