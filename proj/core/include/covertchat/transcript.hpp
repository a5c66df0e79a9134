#pragma once

#include <string>
#include <vector>

#include "covertchat/channel.hpp"
#include "covertchat/positions.hpp"

namespace covertchat {

/// One embedded character inside a transcript message.
struct Annotation {
    std::size_t message_index = 0; // into Transcript::messages
    std::size_t offset = 0;        // scalar offset inside the message text
    char32_t character = 0;
};

/// An ordered chat with an optional annotation layer marking where key or
/// ciphertext characters sit.
struct Transcript {
    std::vector<ChatMessage> messages;
    std::vector<Annotation> annotations;
};

/// Maps a party's absolute story positions onto its transcript messages.
/// The story is the concatenation of `sender`'s messages with seq >= 1
/// (the opening message of each side carries no embedded characters).
/// Annotations referencing positions beyond the story are rejected.
void annotate_schedule(Transcript& transcript, const std::string& sender,
                       const PositionSchedule& schedule);

/// Renders the chat with every annotated character wrapped in lenticular
/// markers, e.g. "come o(.)ver" -> "come o⟦V⟧er". Message texts must not
/// already contain the marker glyphs.
std::string render_annotated(const Transcript& transcript);

/// Drops the markers again; stripping render_annotated output reproduces
/// the plain rendering byte for byte.
std::string strip_markers(const std::string& rendered);

/// Plain rendering: one "sender: text" line per message.
std::string render_plain(const Transcript& transcript);

} // namespace covertchat
