#include "covertchat/extractor.hpp"

#include "covertchat/errors.hpp"
#include "covertchat/xof.hpp"

namespace covertchat {

ExtractionResult extract(std::string_view story, const Bytes& key_material,
                         std::size_t d_o, unsigned chunk_size) {
    if (d_o < 1) {
        throw Error("position offset d_o must be at least 1");
    }
    std::u32string scalars = utf8_decode(story);
    XofStream stream(key_material);
    ExtractionResult result;
    std::size_t pos = d_o + stream.next_chunk(chunk_size);
    while (pos < scalars.size()) {
        char32_t c = to_upper_scalar(scalars[pos]);
        // alphabet characters are single ASCII scalars; anything else is
        // recorded as-is and will fail later decoding
        result.chars.push_back(c < 128 ? static_cast<char>(c) : '\x7F');
        result.positions_used.push_back(pos);
        pos += d_o + stream.next_chunk(chunk_size);
    }
    return result;
}

bool distinguish(std::string_view story, const PositionSchedule& schedule,
                 const Alphabet& alphabet) {
    std::u32string scalars = utf8_decode(story);
    for (std::size_t pos : schedule.positions) {
        if (pos >= scalars.size()) return false;
        if (!alphabet.contains_char(scalars[pos])) return false;
    }
    return true;
}

} // namespace covertchat
