#include "covertchat/channel.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>

#include "covertchat/errors.hpp"

namespace covertchat {

std::string format_wire(const ChatMessage& msg) {
    if (msg.sender.find('\t') != std::string::npos ||
        msg.sender.find('\n') != std::string::npos) {
        throw Error("sender name must not contain tab or newline");
    }
    if (msg.text.find('\n') != std::string::npos) {
        throw Error("message text must not contain newlines");
    }
    return msg.sender + "\t" + std::to_string(msg.seq) + "\t" + msg.text + "\n";
}

ChatMessage parse_wire(std::string_view line) {
    if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
    std::size_t first = line.find('\t');
    if (first == std::string_view::npos) throw Error("malformed wire record: no sender tab");
    std::size_t second = line.find('\t', first + 1);
    if (second == std::string_view::npos) throw Error("malformed wire record: no seq tab");
    ChatMessage msg;
    msg.sender = std::string(line.substr(0, first));
    std::string seq_text(line.substr(first + 1, second - first - 1));
    try {
        msg.seq = std::stoull(seq_text);
    } catch (const std::exception&) {
        throw Error("malformed wire record: bad seq '" + seq_text + "'");
    }
    msg.text = std::string(line.substr(second + 1));
    return msg;
}

namespace {

struct MessageQueue {
    std::mutex mutex;
    std::condition_variable ready;
    std::deque<ChatMessage> messages;
    bool closed = false;

    void push(const ChatMessage& msg) {
        {
            std::lock_guard lock(mutex);
            if (closed) throw Error("channel is closed");
            messages.push_back(msg);
        }
        ready.notify_one();
    }

    ChatMessage pop() {
        std::unique_lock lock(mutex);
        ready.wait(lock, [&] { return !messages.empty() || closed; });
        if (messages.empty()) throw Error("channel closed by peer");
        ChatMessage msg = std::move(messages.front());
        messages.pop_front();
        return msg;
    }

    void close() {
        {
            std::lock_guard lock(mutex);
            closed = true;
        }
        ready.notify_all();
    }
};

class InProcChannel final : public Channel {
public:
    InProcChannel(std::shared_ptr<MessageQueue> inbox, std::shared_ptr<MessageQueue> outbox)
        : inbox_(std::move(inbox)), outbox_(std::move(outbox)) {}

    void send(const ChatMessage& msg) override {
        // round-trip through the wire framing so both transports enforce
        // identical constraints
        outbox_->push(parse_wire(format_wire(msg)));
    }

    ChatMessage recv() override { return inbox_->pop(); }

    void close() override {
        inbox_->close();
        outbox_->close();
    }

private:
    std::shared_ptr<MessageQueue> inbox_;
    std::shared_ptr<MessageQueue> outbox_;
};

class TcpChannel final : public Channel {
public:
    explicit TcpChannel(int fd) : fd_(fd) {}
    ~TcpChannel() override {
        if (fd_ >= 0) ::close(fd_);
    }
    TcpChannel(const TcpChannel&) = delete;
    TcpChannel& operator=(const TcpChannel&) = delete;

    void send(const ChatMessage& msg) override {
        std::string wire = format_wire(msg);
        std::size_t sent = 0;
        while (sent < wire.size()) {
            ssize_t n = ::send(fd_, wire.data() + sent, wire.size() - sent, 0);
            if (n <= 0) throw Error("tcp send failed");
            sent += static_cast<std::size_t>(n);
        }
    }

    ChatMessage recv() override {
        while (true) {
            std::size_t newline = buffer_.find('\n');
            if (newline != std::string::npos) {
                std::string line = buffer_.substr(0, newline + 1);
                buffer_.erase(0, newline + 1);
                return parse_wire(line);
            }
            char chunk[4096];
            ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
            if (n <= 0) throw Error("tcp peer closed the connection mid-exchange");
            buffer_.append(chunk, static_cast<std::size_t>(n));
        }
    }

    void close() override { ::shutdown(fd_, SHUT_RDWR); }

private:
    int fd_;
    std::string buffer_;
};

} // namespace

std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>> make_inproc_pair() {
    auto a_to_b = std::make_shared<MessageQueue>();
    auto b_to_a = std::make_shared<MessageQueue>();
    return {std::make_unique<InProcChannel>(b_to_a, a_to_b),
            std::make_unique<InProcChannel>(a_to_b, b_to_a)};
}

std::unique_ptr<Channel> tcp_listen(std::uint16_t port) {
    int listener = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listener < 0) throw Error("socket() failed");
    int yes = 1;
    ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_ANY);
    addr.sin_port = htons(port);
    if (::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
        ::close(listener);
        throw Error("bind() failed on port " + std::to_string(port));
    }
    if (::listen(listener, 1) != 0) {
        ::close(listener);
        throw Error("listen() failed");
    }
    int fd = ::accept(listener, nullptr, nullptr);
    ::close(listener);
    if (fd < 0) throw Error("accept() failed");
    return std::make_unique<TcpChannel>(fd);
}

std::unique_ptr<Channel> tcp_connect(const std::string& host, std::uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* results = nullptr;
    if (::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &results) != 0) {
        throw Error("cannot resolve host " + host);
    }
    int fd = -1;
    for (addrinfo* r = results; r; r = r->ai_next) {
        fd = ::socket(r->ai_family, r->ai_socktype, r->ai_protocol);
        if (fd < 0) continue;
        if (::connect(fd, r->ai_addr, r->ai_addrlen) == 0) break;
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(results);
    if (fd < 0) throw Error("cannot connect to " + host + ":" + std::to_string(port));
    return std::make_unique<TcpChannel>(fd);
}

} // namespace covertchat
