#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "covertchat/util.hpp"

namespace covertchat::crypto {

/// PBKDF2-HMAC-SHA256. `count >= 1`, `dklen >= 1`. The password may be
/// empty (the key-exchange bootstrap keys off the empty string when no
/// root key is shared yet).
Bytes pbkdf2_sha256(std::string_view password, const Bytes& salt, unsigned count,
                    std::size_t dklen);

/// ChaCha20-Poly1305 (RFC 8439): 32-byte key, 12-byte nonce, 16-byte tag.
struct AeadOutput {
    Bytes ciphertext; // same length as the plaintext
    Bytes tag;        // 16 bytes
};

AeadOutput aead_seal(const Bytes& key, const Bytes& nonce, const Bytes& associated_data,
                     const Bytes& plaintext);

/// Returns the plaintext, or nullopt when tag verification fails.
std::optional<Bytes> aead_open(const Bytes& key, const Bytes& nonce,
                               const Bytes& associated_data, const Bytes& ciphertext,
                               const Bytes& tag);

/// Cryptographically strong random bytes.
Bytes random_bytes(std::size_t n);

/// X25519 scalar multiplication on raw 32-byte values (RFC 7748 wire
/// order: little-endian u coordinates, scalars clamped internally).
Bytes x25519(const Bytes& scalar32, const Bytes& u32);
Bytes x25519_base(const Bytes& scalar32);

} // namespace covertchat::crypto
