#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

namespace covertchat {

struct ChatMessage {
    std::string sender;
    std::uint64_t seq = 0;
    std::string text;

    bool operator==(const ChatMessage&) const = default;
};

/// Demo transport framing: one UTF-8 record per line,
/// `sender<TAB>seq<TAB>text`. Senders must not contain tabs; texts must
/// not contain newlines (model-generated stories never do).
std::string format_wire(const ChatMessage& msg);
ChatMessage parse_wire(std::string_view line);

/// An ordered, reliable, loss-free message channel between two parties.
/// A channel endpoint belongs to one execution context at a time.
class Channel {
public:
    virtual ~Channel() = default;
    virtual void send(const ChatMessage& msg) = 0;
    virtual ChatMessage recv() = 0;
    /// Unblocks any pending recv on either side with an error; used to
    /// tear a session down when the local party fails mid-protocol.
    virtual void close() = 0;
};

/// A connected pair of in-process endpoints backed by blocking queues;
/// safe for one thread per endpoint.
std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>> make_inproc_pair();

/// TCP endpoints speaking the wire framing above. `tcp_listen` blocks for
/// exactly one peer. Throws covertchat::Error on socket failures or when
/// the peer closes mid-exchange.
std::unique_ptr<Channel> tcp_listen(std::uint16_t port);
std::unique_ptr<Channel> tcp_connect(const std::string& host, std::uint16_t port);

} // namespace covertchat
