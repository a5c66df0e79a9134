#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "covertchat/channel.hpp"
#include "covertchat/curves.hpp"
#include "covertchat/embedder.hpp"
#include "covertchat/positions.hpp"
#include "covertchat/token_model.hpp"

namespace covertchat {

/// m integers, each >= low, summing to n: how a public key's characters
/// spread over the chat messages.
struct Composition {
    std::vector<std::size_t> parts;

    std::size_t sum() const;
};

/// Random composition of n into m parts each >= low. Not uniform over all
/// compositions (nothing requires that); deterministic under a seeded rng.
/// Throws covertchat::Error when m * low > n or m == 0.
Composition rand_composition(std::size_t n, std::size_t low, std::size_t m,
                             std::mt19937_64& rng);

/// Consecutive slices of seq with the composition's lengths, order
/// preserved. Throws covertchat::Error when the lengths do not add up.
std::vector<std::string> partition(std::string_view seq, const Composition& comp);
std::vector<std::vector<std::size_t>> partition(const std::vector<std::size_t>& seq,
                                                const Composition& comp);

enum class Role { initiator, responder };

/// One party's view of an ephemeral key exchange over a chat channel.
struct ExchangeConfig {
    const TokenModel* model = nullptr;
    EmbedderConfig embedder;
    CurveId curve = CurveId::curve25519;
    std::size_t m = 10;  // chat rounds per side
    std::size_t low = 3; // minimum characters per round
    std::optional<std::string> rootkey; // previous shared secret, if any
    Bytes salt;
    unsigned count = 600000;
    std::size_t d_o = 32;
    unsigned chunk_size = 5;
    std::string topic = "catching up";
    std::string sender_name; // defaults to "alice"/"bob" by role
    std::uint64_t seed = 0;  // non-protocol randomness (fillers, shuffles)
    std::size_t initial_message_scalars = 48;

    // test hooks; production leaves these unset
    std::optional<std::string> fixed_scalar_hex;
    std::optional<Composition> fixed_composition;

    /// Toy-curve preset from the worked example: secp112r1, m=3, low=7,
    /// and the permuted level-4 alphabet ending in W.
    static ExchangeConfig toy_profile();
};

struct ExchangeOutcome {
    std::string shared_key_hex;
    std::string own_public_hex;
    std::string peer_public_hex;
    std::vector<ChatMessage> transcript;   // every message, global order
    PositionSchedule own_schedule;         // where own key characters sit
    PositionSchedule peer_schedule;        // where the peer's sit
    Composition composition;               // own message split
};

/// Runs one side of the exchange over a channel: derive both schedules
/// from the (possibly absent) root key, trade initial messages, then m
/// alternating embedding rounds, then recover the peer's public key from
/// the concatenation of its round inputs and derive the shared key.
/// Throws ProtocolFailureError (with the failing round) when extraction
/// meets a non-embeddable character; propagates EmbeddingStuckError.
ExchangeOutcome run_party(const ExchangeConfig& config, Role role, Channel& channel);

/// Both sides over an in-process channel pair, on two threads.
std::pair<ExchangeOutcome, ExchangeOutcome> run_exchange(const ExchangeConfig& initiator,
                                                         const ExchangeConfig& responder);

} // namespace covertchat
