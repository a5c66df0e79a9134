#include "covertchat/symmetric.hpp"

#include "covertchat/crypto.hpp"
#include "covertchat/errors.hpp"
#include "covertchat/extractor.hpp"

namespace covertchat {

Alphabet SharedParams::alphabet() const {
    if (alphabet_chars) return Alphabet(level, *alphabet_chars);
    return Alphabet::default_for_level(level);
}

void SharedParams::validate() const {
    if (count < 1) throw Error("PBKDF2 count must be at least 1");
    if (nonce.size() != 12) throw Error("nonce must be 12 bytes");
    if (level < 1 || level > 4) throw Error("level must be within [1, 4]");
    if (d_o < 1) throw Error("d_o must be at least 1");
    if (chunk_size < 1 || chunk_size > 32) throw Error("chunk_size must be within [1, 32]");
    alphabet(); // validates custom orderings
}

SessionKeys derive_keys(std::string_view password, const Bytes& salt, unsigned count) {
    Bytes dk = crypto::pbkdf2_sha256(password, salt, count, 64);
    SessionKeys keys;
    keys.dk1.assign(dk.begin(), dk.begin() + 32);
    keys.dk2.assign(dk.begin() + 32, dk.end());
    return keys;
}

std::string encrypt_to_story(std::string_view password, const Bytes& plaintext,
                             std::string_view topic, const TokenModel& model,
                             const SharedParams& params, const EmbedderConfig& config,
                             std::mt19937_64& rng, EmbedTrace* trace) {
    params.validate();
    if (plaintext.empty()) {
        throw Error("plaintext must be non-empty");
    }
    if (config.d_o != params.d_o || config.level() != params.level) {
        throw Error("embedder config disagrees with shared params on d_o or level");
    }

    SessionKeys keys = derive_keys(password, params.salt, params.count);
    crypto::AeadOutput sealed =
        crypto::aead_seal(keys.dk1, params.nonce, params.associated_data, plaintext);

    // Enc = tag || ciphertext, mapped digit-wise into the alphabet
    Bytes enc = sealed.tag;
    enc.insert(enc.end(), sealed.ciphertext.begin(), sealed.ciphertext.end());
    const Alphabet alphabet = params.alphabet();
    std::string digits = digits_from_bytes(enc, params.level);
    std::string chars = alphabet.encode(digits);

    PositionSchedule schedule =
        derive_schedule(keys.dk2, chars.size(), params.d_o, params.chunk_size);

    std::string story = embed(model, topic, "", config, chars, schedule, rng, trace);
    return finish_story(model, topic, story,
                        schedule.positions.back() + params.d_o - 1, config, rng, trace);
}

std::optional<Bytes> decrypt_from_story(std::string_view password,
                                        std::string_view story,
                                        const SharedParams& params) {
    params.validate();
    SessionKeys keys = derive_keys(password, params.salt, params.count);
    ExtractionResult extracted =
        extract(story, keys.dk2, params.d_o, params.chunk_size);

    Bytes enc;
    try {
        const Alphabet alphabet = params.alphabet();
        std::string digits = alphabet.decode(extracted.chars);
        enc = bytes_from_digits(digits, params.level);
    } catch (const Error&) {
        // non-embeddable character or impossible digit count: tamper evidence
        return std::nullopt;
    }
    if (enc.size() < 16) {
        return std::nullopt;
    }
    Bytes tag(enc.begin(), enc.begin() + 16);
    Bytes ciphertext(enc.begin() + 16, enc.end());
    return crypto::aead_open(keys.dk1, params.nonce, params.associated_data, ciphertext,
                             tag);
}

} // namespace covertchat
