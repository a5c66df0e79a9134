#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "covertchat/alphabet.hpp"
#include "covertchat/positions.hpp"
#include "covertchat/util.hpp"

namespace covertchat {

/// Characters recovered from a story. Receiving needs only key material,
/// never a token model; this module therefore depends on none.
struct ExtractionResult {
    std::string chars;                      // uppercased story characters
    std::vector<std::size_t> positions_used;
};

/// Walks pos = d_o + PRF(), then pos += d_o + PRF() while pos < len(story),
/// collecting uppercase(story[pos]). Characters outside any alphabet are
/// still returned; rejecting them is the caller's (or the distinguisher's)
/// job. Deterministic in its inputs; empty result when the first position
/// already falls beyond the story.
ExtractionResult extract(std::string_view story, const Bytes& key_material,
                         std::size_t d_o = 32, unsigned chunk_size = 5);

/// The known-positions distinguisher: true iff every uppercased story
/// character probed at the schedule positions belongs to the alphabet.
/// Positions beyond the story count as non-members. Vacuously true for an
/// empty schedule.
bool distinguish(std::string_view story, const PositionSchedule& schedule,
                 const Alphabet& alphabet);

} // namespace covertchat
