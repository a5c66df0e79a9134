#include "covertchat/ecdhe.hpp"

#include <exception>
#include <numeric>
#include <thread>

#include "covertchat/crypto.hpp"
#include "covertchat/errors.hpp"
#include "covertchat/symmetric.hpp"

namespace covertchat {

std::size_t Composition::sum() const {
    return std::accumulate(parts.begin(), parts.end(), std::size_t{0});
}

Composition rand_composition(std::size_t n, std::size_t low, std::size_t m,
                             std::mt19937_64& rng) {
    if (m == 0) {
        throw Error("composition needs at least one part");
    }
    if (m * low > n) {
        throw Error("infeasible composition: " + std::to_string(m) + " parts of at least " +
                    std::to_string(low) + " cannot sum to " + std::to_string(n));
    }
    Composition comp;
    comp.parts.assign(m, low);
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    for (std::size_t extra = n - m * low; extra > 0; --extra) {
        comp.parts[pick(rng)] += 1;
    }
    return comp;
}

namespace {

template <typename Seq, typename Slice>
std::vector<Slice> partition_impl(const Seq& seq, const Composition& comp) {
    std::size_t total = comp.sum();
    if (seq.size() != total) {
        throw Error("partition: sequence of length " + std::to_string(seq.size()) +
                    " does not match composition sum " + std::to_string(total));
    }
    std::vector<Slice> out;
    out.reserve(comp.parts.size());
    std::size_t offset = 0;
    for (std::size_t len : comp.parts) {
        out.emplace_back(seq.begin() + static_cast<std::ptrdiff_t>(offset),
                         seq.begin() + static_cast<std::ptrdiff_t>(offset + len));
        offset += len;
    }
    return out;
}

} // namespace

std::vector<std::string> partition(std::string_view seq, const Composition& comp) {
    return partition_impl<std::string_view, std::string>(seq, comp);
}

std::vector<std::vector<std::size_t>> partition(const std::vector<std::size_t>& seq,
                                                const Composition& comp) {
    return partition_impl<std::vector<std::size_t>, std::vector<std::size_t>>(seq, comp);
}

ExchangeConfig ExchangeConfig::toy_profile() {
    ExchangeConfig config;
    config.curve = CurveId::secp112r1_toy;
    config.m = 3;
    config.low = 7;
    config.embedder.alphabet = Alphabet(4, " ETAOINSHRDLCUMW");
    return config;
}

namespace {

std::size_t chars_per_key(const CurveParams& curve, int level) {
    std::size_t bits = curve.encoding_hex_width * 4;
    std::size_t n = bits / static_cast<std::size_t>(level);
    if (level == 3) n = (bits + 2) / 3;
    return n;
}

} // namespace

ExchangeOutcome run_party(const ExchangeConfig& config, Role role, Channel& channel) {
    if (!config.model) {
        throw Error("exchange config has no token model");
    }
    config.embedder.validate();
    const CurveParams& curve = curve_params(config.curve);
    const Alphabet& alphabet = config.embedder.alphabet;
    const std::size_t n = chars_per_key(curve, alphabet.level());

    std::mt19937_64 rng(config.seed != 0 ? config.seed : std::random_device{}());
    const std::string own_name =
        !config.sender_name.empty() ? config.sender_name
                                    : (role == Role::initiator ? "alice" : "bob");

    // both position schedules come from the shared (or empty) root key:
    // dk1 drives the initiator's positions, dk2 the responder's
    SessionKeys keys = derive_keys(config.rootkey.value_or(""), config.salt, config.count);
    PositionSchedule initiator_schedule =
        derive_schedule(keys.dk1, n, config.d_o, config.chunk_size);
    PositionSchedule responder_schedule =
        derive_schedule(keys.dk2, n, config.d_o, config.chunk_size);
    const PositionSchedule& own_schedule =
        role == Role::initiator ? initiator_schedule : responder_schedule;
    const PositionSchedule& peer_schedule =
        role == Role::initiator ? responder_schedule : initiator_schedule;

    // ephemeral key material and the message split
    std::string scalar = config.fixed_scalar_hex
                             ? *config.fixed_scalar_hex
                             : random_scalar_hex(config.curve);
    std::string own_public =
        scalar_mult_x(config.curve, scalar, curve.generator_x_hex);
    Composition comp = config.fixed_composition
                           ? *config.fixed_composition
                           : rand_composition(n, config.low, config.m, rng);
    std::string own_chars =
        alphabet.encode(digits_from_bytes(from_hex(own_public), alphabet.level()));
    std::vector<std::string> char_parts = partition(own_chars, comp);
    std::vector<std::vector<std::size_t>> position_parts =
        partition(own_schedule.positions, comp);

    ExchangeOutcome outcome;
    outcome.own_public_hex = own_public;
    outcome.own_schedule = own_schedule;
    outcome.peer_schedule = peer_schedule;
    outcome.composition = comp;

    std::uint64_t own_seq = 0;
    std::string chat; // running context handed to the model
    auto deliver = [&](const std::string& text) {
        ChatMessage msg{own_name, own_seq++, text};
        channel.send(msg);
        outcome.transcript.push_back(msg);
        chat += text;
    };
    auto receive = [&]() -> const ChatMessage& {
        ChatMessage msg = channel.recv();
        outcome.transcript.push_back(std::move(msg));
        chat += outcome.transcript.back().text;
        return outcome.transcript.back();
    };

    // the two opening messages carry no embedded characters
    if (role == Role::initiator) {
        deliver(sample_story(*config.model, config.topic, config.initial_message_scalars,
                             config.embedder.t0,
                             static_cast<std::size_t>(config.embedder.k0), rng));
        receive();
    } else {
        receive();
        deliver(sample_story(*config.model, config.topic, config.initial_message_scalars,
                             config.embedder.t0,
                             static_cast<std::size_t>(config.embedder.k0), rng));
    }

    std::string own_story;
    std::vector<std::string> peer_inputs;
    auto embed_round = [&](std::size_t j) {
        PositionSchedule round_schedule;
        round_schedule.offset = config.d_o;
        round_schedule.chunk_size = config.chunk_size;
        round_schedule.positions = position_parts[j];
        std::string grown = embed(*config.model, chat, own_story, config.embedder,
                                  char_parts[j], round_schedule, rng);
        std::string input = grown.substr(own_story.size());
        own_story = std::move(grown);
        deliver(input);
    };

    for (std::size_t j = 0; j < config.m; ++j) {
        if (role == Role::initiator) {
            embed_round(j);
            peer_inputs.push_back(receive().text);
        } else {
            peer_inputs.push_back(receive().text);
            embed_round(j);
        }
    }

    // the peer's public key sits at its schedule inside the concatenation
    // of its round inputs (the opening messages are not part of it)
    std::string peer_story;
    std::vector<std::size_t> peer_ends;
    for (const std::string& input : peer_inputs) {
        peer_story += input;
        peer_ends.push_back(utf8_length(peer_story));
    }
    auto round_of = [&](std::size_t pos) {
        for (std::size_t j = 0; j < peer_ends.size(); ++j) {
            if (pos < peer_ends[j]) return static_cast<int>(j);
        }
        return static_cast<int>(peer_ends.size()) - 1;
    };

    std::u32string peer_scalars = utf8_decode(peer_story);
    std::string peer_chars;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t pos = peer_schedule[i];
        if (pos >= peer_scalars.size()) {
            throw ProtocolFailureError(
                "peer story too short for key character " + std::to_string(i), round_of(pos));
        }
        char32_t c = to_upper_scalar(peer_scalars[pos]);
        if (!alphabet.contains_char(c)) {
            throw ProtocolFailureError("non-embeddable character at key position " +
                                           std::to_string(i),
                                       round_of(pos));
        }
        peer_chars.push_back(static_cast<char>(c));
    }

    std::string peer_public;
    try {
        Bytes key_bytes = bytes_from_digits(alphabet.decode(peer_chars), alphabet.level());
        peer_public = to_hex(key_bytes);
    } catch (const Error& e) {
        throw ProtocolFailureError(std::string("cannot decode peer public key: ") + e.what(),
                                   -1);
    }
    outcome.peer_public_hex = peer_public;
    outcome.shared_key_hex = scalar_mult_x(config.curve, scalar, peer_public);
    return outcome;
}

std::pair<ExchangeOutcome, ExchangeOutcome> run_exchange(const ExchangeConfig& initiator,
                                                         const ExchangeConfig& responder) {
    auto [a_end, b_end] = make_inproc_pair();
    ExchangeOutcome a_out;
    ExchangeOutcome b_out;
    std::exception_ptr a_err;
    std::exception_ptr b_err;

    std::thread responder_thread([&] {
        try {
            b_out = run_party(responder, Role::responder, *b_end);
        } catch (...) {
            b_err = std::current_exception();
            b_end->close(); // unblock the initiator if it is waiting on us
        }
    });
    try {
        a_out = run_party(initiator, Role::initiator, *a_end);
    } catch (...) {
        a_err = std::current_exception();
        a_end->close();
    }
    responder_thread.join();
    if (a_err) std::rethrow_exception(a_err);
    if (b_err) std::rethrow_exception(b_err);
    return {std::move(a_out), std::move(b_out)};
}

} // namespace covertchat
