#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "covertchat/util.hpp"
#include "covertchat/xof.hpp"

namespace covertchat {

/// The strictly increasing embedding positions derived from key material:
///   b_0 =        d_o + PRF(),   b_i = b_{i-1} + d_o + PRF(),
/// where PRF() reads chunk_size bits from SHAKE128(key). Positions index
/// Unicode scalar values of the story.
struct PositionSchedule {
    std::size_t offset = 32;   // d_o, minimum gap between positions
    unsigned chunk_size = 5;   // PRF output width in bits
    std::vector<std::size_t> positions;

    std::size_t size() const noexcept { return positions.size(); }
    bool empty() const noexcept { return positions.empty(); }
    std::size_t operator[](std::size_t i) const { return positions[i]; }
};

/// Deterministically derives the first `n` positions for the given key
/// material. Requires d_o >= 1 and non-empty key material for n > 0.
PositionSchedule derive_schedule(const Bytes& key_material, std::size_t n,
                                 std::size_t d_o = 32, unsigned chunk_size = 5);

/// Continues an already-initialized XOF stream; used where one stream
/// feeds several consumers in sequence.
PositionSchedule derive_schedule(XofStream& stream, std::size_t n,
                                 std::size_t d_o = 32, unsigned chunk_size = 5);

} // namespace covertchat
