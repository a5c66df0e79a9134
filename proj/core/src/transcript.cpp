#include "covertchat/transcript.hpp"

#include <algorithm>

#include "covertchat/errors.hpp"
#include "covertchat/util.hpp"

namespace covertchat {

namespace {
constexpr char32_t kMarkOpen = U'⟦';  // ⟦
constexpr char32_t kMarkClose = U'⟧'; // ⟧
} // namespace

void annotate_schedule(Transcript& transcript, const std::string& sender,
                       const PositionSchedule& schedule) {
    // cumulative scalar spans of the sender's embedding-carrying messages
    struct Span {
        std::size_t message_index;
        std::size_t start;
        std::size_t end;
    };
    std::vector<Span> spans;
    std::size_t cumulative = 0;
    for (std::size_t i = 0; i < transcript.messages.size(); ++i) {
        const ChatMessage& msg = transcript.messages[i];
        if (msg.sender != sender || msg.seq == 0) continue;
        std::size_t len = utf8_length(msg.text);
        spans.push_back({i, cumulative, cumulative + len});
        cumulative += len;
    }

    for (std::size_t pos : schedule.positions) {
        auto it = std::find_if(spans.begin(), spans.end(), [&](const Span& s) {
            return pos >= s.start && pos < s.end;
        });
        if (it == spans.end()) {
            throw Error("schedule position " + std::to_string(pos) +
                        " lies beyond " + sender + "'s story");
        }
        const ChatMessage& msg = transcript.messages[it->message_index];
        std::u32string scalars = utf8_decode(msg.text);
        std::size_t offset = pos - it->start;
        transcript.annotations.push_back(
            {it->message_index, offset, to_upper_scalar(scalars[offset])});
    }
}

std::string render_plain(const Transcript& transcript) {
    std::string out;
    for (const ChatMessage& msg : transcript.messages) {
        out += msg.sender + ":" + msg.text + "\n";
    }
    return out;
}

std::string render_annotated(const Transcript& transcript) {
    std::string out;
    for (std::size_t i = 0; i < transcript.messages.size(); ++i) {
        const ChatMessage& msg = transcript.messages[i];
        std::u32string scalars = utf8_decode(msg.text);
        if (scalars.find(kMarkOpen) != std::u32string::npos ||
            scalars.find(kMarkClose) != std::u32string::npos) {
            throw Error("message already contains annotation markers");
        }
        std::vector<std::size_t> marks;
        for (const Annotation& a : transcript.annotations) {
            if (a.message_index == i) marks.push_back(a.offset);
        }
        std::sort(marks.begin(), marks.end());
        std::u32string rendered;
        rendered.reserve(scalars.size() + marks.size() * 2);
        std::size_t next_mark = 0;
        for (std::size_t pos = 0; pos < scalars.size(); ++pos) {
            bool marked = next_mark < marks.size() && marks[next_mark] == pos;
            if (marked) {
                rendered += kMarkOpen;
                rendered += scalars[pos];
                rendered += kMarkClose;
                ++next_mark;
            } else {
                rendered += scalars[pos];
            }
        }
        out += msg.sender + ":" + utf8_encode(rendered) + "\n";
    }
    return out;
}

std::string strip_markers(const std::string& rendered) {
    std::u32string scalars = utf8_decode(rendered);
    std::u32string out;
    out.reserve(scalars.size());
    for (char32_t c : scalars) {
        if (c == kMarkOpen || c == kMarkClose) continue;
        out += c;
    }
    return utf8_encode(out);
}

} // namespace covertchat
