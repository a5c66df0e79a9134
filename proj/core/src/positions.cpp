#include "covertchat/positions.hpp"

#include "covertchat/errors.hpp"

namespace covertchat {

PositionSchedule derive_schedule(XofStream& stream, std::size_t n, std::size_t d_o,
                                 unsigned chunk_size) {
    if (d_o < 1) {
        throw Error("position offset d_o must be at least 1");
    }
    PositionSchedule schedule;
    schedule.offset = d_o;
    schedule.chunk_size = chunk_size;
    schedule.positions.reserve(n);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
        pos += d_o + stream.next_chunk(chunk_size);
        schedule.positions.push_back(pos);
    }
    return schedule;
}

PositionSchedule derive_schedule(const Bytes& key_material, std::size_t n,
                                 std::size_t d_o, unsigned chunk_size) {
    if (n == 0) {
        if (d_o < 1) {
            throw Error("position offset d_o must be at least 1");
        }
        PositionSchedule schedule;
        schedule.offset = d_o;
        schedule.chunk_size = chunk_size;
        return schedule;
    }
    XofStream stream(key_material);
    return derive_schedule(stream, n, d_o, chunk_size);
}

} // namespace covertchat
