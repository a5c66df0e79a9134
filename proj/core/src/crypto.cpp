#include "covertchat/crypto.hpp"

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <memory>

#include "covertchat/errors.hpp"

namespace covertchat::crypto {

namespace {

struct CipherCtxDeleter {
    void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

struct PkeyDeleter {
    void operator()(EVP_PKEY* k) const { EVP_PKEY_free(k); }
};
using Pkey = std::unique_ptr<EVP_PKEY, PkeyDeleter>;

struct PkeyCtxDeleter {
    void operator()(EVP_PKEY_CTX* c) const { EVP_PKEY_CTX_free(c); }
};
using PkeyCtx = std::unique_ptr<EVP_PKEY_CTX, PkeyCtxDeleter>;

[[noreturn]] void fail(const char* what) {
    throw Error(std::string("openssl: ") + what + " failed");
}

} // namespace

Bytes pbkdf2_sha256(std::string_view password, const Bytes& salt, unsigned count,
                    std::size_t dklen) {
    if (count < 1) throw Error("PBKDF2 iteration count must be at least 1");
    if (dklen < 1) throw Error("PBKDF2 output length must be at least 1");
    Bytes out(dklen);
    if (PKCS5_PBKDF2_HMAC(password.data(), static_cast<int>(password.size()),
                          salt.data(), static_cast<int>(salt.size()),
                          static_cast<int>(count), EVP_sha256(),
                          static_cast<int>(dklen), out.data()) != 1) {
        fail("PKCS5_PBKDF2_HMAC");
    }
    return out;
}

AeadOutput aead_seal(const Bytes& key, const Bytes& nonce, const Bytes& associated_data,
                     const Bytes& plaintext) {
    if (key.size() != 32) throw Error("AEAD key must be 32 bytes");
    if (nonce.size() != 12) throw Error("AEAD nonce must be 12 bytes");
    CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx) fail("EVP_CIPHER_CTX_new");
    if (EVP_EncryptInit_ex(ctx.get(), EVP_chacha20_poly1305(), nullptr, key.data(),
                           nonce.data()) != 1) {
        fail("EVP_EncryptInit_ex");
    }
    int len = 0;
    if (!associated_data.empty() &&
        EVP_EncryptUpdate(ctx.get(), nullptr, &len, associated_data.data(),
                          static_cast<int>(associated_data.size())) != 1) {
        fail("EVP_EncryptUpdate(aad)");
    }
    AeadOutput out;
    out.ciphertext.resize(plaintext.size());
    if (!plaintext.empty() &&
        EVP_EncryptUpdate(ctx.get(), out.ciphertext.data(), &len, plaintext.data(),
                          static_cast<int>(plaintext.size())) != 1) {
        fail("EVP_EncryptUpdate");
    }
    unsigned char tail[16];
    if (EVP_EncryptFinal_ex(ctx.get(), tail, &len) != 1) fail("EVP_EncryptFinal_ex");
    out.tag.resize(16);
    if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_GET_TAG, 16, out.tag.data()) != 1) {
        fail("EVP_CTRL_AEAD_GET_TAG");
    }
    return out;
}

std::optional<Bytes> aead_open(const Bytes& key, const Bytes& nonce,
                               const Bytes& associated_data, const Bytes& ciphertext,
                               const Bytes& tag) {
    if (key.size() != 32) throw Error("AEAD key must be 32 bytes");
    if (nonce.size() != 12) throw Error("AEAD nonce must be 12 bytes");
    if (tag.size() != 16) return std::nullopt;
    CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx) fail("EVP_CIPHER_CTX_new");
    if (EVP_DecryptInit_ex(ctx.get(), EVP_chacha20_poly1305(), nullptr, key.data(),
                           nonce.data()) != 1) {
        fail("EVP_DecryptInit_ex");
    }
    int len = 0;
    if (!associated_data.empty() &&
        EVP_DecryptUpdate(ctx.get(), nullptr, &len, associated_data.data(),
                          static_cast<int>(associated_data.size())) != 1) {
        fail("EVP_DecryptUpdate(aad)");
    }
    Bytes plaintext(ciphertext.size());
    if (!ciphertext.empty() &&
        EVP_DecryptUpdate(ctx.get(), plaintext.data(), &len, ciphertext.data(),
                          static_cast<int>(ciphertext.size())) != 1) {
        return std::nullopt;
    }
    Bytes tag_copy = tag;
    if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_SET_TAG, 16, tag_copy.data()) != 1) {
        fail("EVP_CTRL_AEAD_SET_TAG");
    }
    unsigned char tail[16];
    if (EVP_DecryptFinal_ex(ctx.get(), tail, &len) != 1) {
        return std::nullopt; // tag mismatch
    }
    return plaintext;
}

Bytes random_bytes(std::size_t n) {
    Bytes out(n);
    if (!out.empty() && RAND_bytes(out.data(), static_cast<int>(n)) != 1) {
        fail("RAND_bytes");
    }
    return out;
}

Bytes x25519(const Bytes& scalar32, const Bytes& u32) {
    if (scalar32.size() != 32 || u32.size() != 32) {
        throw Error("X25519 operands must be 32 bytes");
    }
    Pkey priv(EVP_PKEY_new_raw_private_key(EVP_PKEY_X25519, nullptr, scalar32.data(), 32));
    if (!priv) fail("EVP_PKEY_new_raw_private_key");
    Pkey peer(EVP_PKEY_new_raw_public_key(EVP_PKEY_X25519, nullptr, u32.data(), 32));
    if (!peer) fail("EVP_PKEY_new_raw_public_key");
    PkeyCtx ctx(EVP_PKEY_CTX_new(priv.get(), nullptr));
    if (!ctx) fail("EVP_PKEY_CTX_new");
    if (EVP_PKEY_derive_init(ctx.get()) != 1) fail("EVP_PKEY_derive_init");
    if (EVP_PKEY_derive_set_peer(ctx.get(), peer.get()) != 1) {
        fail("EVP_PKEY_derive_set_peer");
    }
    std::size_t outlen = 32;
    Bytes out(outlen);
    if (EVP_PKEY_derive(ctx.get(), out.data(), &outlen) != 1) {
        throw InvalidPointError("X25519 derive rejected the peer coordinate");
    }
    out.resize(outlen);
    return out;
}

Bytes x25519_base(const Bytes& scalar32) {
    if (scalar32.size() != 32) throw Error("X25519 scalar must be 32 bytes");
    Pkey priv(EVP_PKEY_new_raw_private_key(EVP_PKEY_X25519, nullptr, scalar32.data(), 32));
    if (!priv) fail("EVP_PKEY_new_raw_private_key");
    std::size_t len = 32;
    Bytes out(len);
    if (EVP_PKEY_get_raw_public_key(priv.get(), out.data(), &len) != 1) {
        fail("EVP_PKEY_get_raw_public_key");
    }
    out.resize(len);
    return out;
}

} // namespace covertchat::crypto
