#pragma once

#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "covertchat/alphabet.hpp"
#include "covertchat/embedder.hpp"
#include "covertchat/token_model.hpp"
#include "covertchat/util.hpp"

namespace covertchat {

/// The two halves of the 64-byte PBKDF2 output: dk1 encrypts, dk2 seeds
/// the position schedule.
struct SessionKeys {
    Bytes dk1; // 32 bytes
    Bytes dk2; // 32 bytes
};

/// Everything both sides must agree on out of band, none of it secret.
/// Nonce non-repetition per (password, salt) is the caller's duty.
struct SharedParams {
    Bytes salt;
    unsigned count = 600000; // PBKDF2 iterations
    Bytes nonce;             // 12 bytes
    Bytes associated_data;
    int level = 4;
    std::optional<std::string> alphabet_chars; // custom ordering, default otherwise
    std::size_t d_o = 32;
    unsigned chunk_size = 5;
    static constexpr int tag_bits = 128;

    Alphabet alphabet() const;
    void validate() const;
};

SessionKeys derive_keys(std::string_view password, const Bytes& salt, unsigned count);

/// Password-based authenticated encryption into a story: AEAD-encrypt,
/// hex-map tag || ciphertext through the alphabet, embed at positions
/// derived from dk2, and round the story off inside the length window.
/// The plaintext must be non-empty. Propagates EmbeddingStuckError.
std::string encrypt_to_story(std::string_view password, const Bytes& plaintext,
                             std::string_view topic, const TokenModel& model,
                             const SharedParams& params, const EmbedderConfig& config,
                             std::mt19937_64& rng, EmbedTrace* trace = nullptr);

/// The inverse path. Returns the plaintext, or nullopt (Fail) when the
/// extracted characters do not decode or the authentication tag does not
/// verify. Decryption needs no token model.
std::optional<Bytes> decrypt_from_story(std::string_view password,
                                        std::string_view story,
                                        const SharedParams& params);

} // namespace covertchat
