#include "covertchat/curves.hpp"

#include <openssl/bn.h>
#include <openssl/ec.h>

#include <algorithm>
#include <cctype>
#include <memory>

#include "covertchat/crypto.hpp"
#include "covertchat/errors.hpp"

namespace covertchat {

namespace {

struct BnDeleter {
    void operator()(BIGNUM* bn) const { BN_free(bn); }
};
using Bn = std::unique_ptr<BIGNUM, BnDeleter>;

struct BnCtxDeleter {
    void operator()(BN_CTX* ctx) const { BN_CTX_free(ctx); }
};
using BnCtx = std::unique_ptr<BN_CTX, BnCtxDeleter>;

struct EcGroupDeleter {
    void operator()(EC_GROUP* g) const { EC_GROUP_free(g); }
};
using EcGroup = std::unique_ptr<EC_GROUP, EcGroupDeleter>;

struct EcPointDeleter {
    void operator()(EC_POINT* p) const { EC_POINT_free(p); }
};
using EcPoint = std::unique_ptr<EC_POINT, EcPointDeleter>;

Bn bn_from_dec(const char* dec) {
    BIGNUM* raw = nullptr;
    if (BN_dec2bn(&raw, dec) == 0) throw Error("BN_dec2bn failed");
    return Bn(raw);
}

Bn bn_from_hex(std::string_view hex) {
    BIGNUM* raw = nullptr;
    std::string s(hex);
    if (BN_hex2bn(&raw, s.c_str()) == 0) throw Error("invalid hex value");
    return Bn(raw);
}

std::string bn_to_hex_padded(const BIGNUM* bn, std::size_t width) {
    char* raw = BN_bn2hex(bn);
    if (!raw) throw Error("BN_bn2hex failed");
    std::string s(raw);
    OPENSSL_free(raw);
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (s.size() > width) {
        // BN_bn2hex pads to whole bytes, so a leading zero nibble can appear
        std::size_t strip = s.find_first_not_of('0');
        if (strip == std::string::npos) strip = s.size() - 1;
        s = s.substr(std::min(strip, s.size() - 1));
        if (s.size() > width) throw Error("value does not fit the curve encoding width");
    }
    return std::string(width - s.size(), '0') + s;
}

// secp112r1, the didactic curve of the key-exchange worked example.
constexpr const char* kToyPrimeDec = "4451685225093714772084598273548427";
constexpr const char* kToyADec = "4451685225093714772084598273548424";
constexpr const char* kToyBDec = "2061118396808653202902996166388514";
constexpr const char* kToyGxDec = "188281465057972534892223778713752";
constexpr const char* kToyGyDec = "3419875491033170827167861896082688";
constexpr const char* kToyOrderDec = "4451685225093714776491891542548933";

const EC_GROUP* toy_group() {
    static EcGroup group = [] {
        BnCtx ctx(BN_CTX_new());
        Bn p = bn_from_dec(kToyPrimeDec);
        Bn a = bn_from_dec(kToyADec);
        Bn b = bn_from_dec(kToyBDec);
        EcGroup g(EC_GROUP_new_curve_GFp(p.get(), a.get(), b.get(), ctx.get()));
        if (!g) throw Error("EC_GROUP_new_curve_GFp failed");
        Bn gx = bn_from_dec(kToyGxDec);
        Bn gy = bn_from_dec(kToyGyDec);
        EcPoint gen(EC_POINT_new(g.get()));
        if (!gen ||
            EC_POINT_set_affine_coordinates(g.get(), gen.get(), gx.get(), gy.get(),
                                            ctx.get()) != 1) {
            throw Error("toy curve generator is not on the curve");
        }
        Bn order = bn_from_dec(kToyOrderDec);
        Bn cofactor = bn_from_dec("1");
        if (EC_GROUP_set_generator(g.get(), gen.get(), order.get(), cofactor.get()) != 1) {
            throw Error("EC_GROUP_set_generator failed");
        }
        return g;
    }();
    return group.get();
}

std::string toy_scalar_mult_x(std::string_view scalar_hex, std::string_view x_hex) {
    BnCtx ctx(BN_CTX_new());
    const EC_GROUP* group = toy_group();
    Bn scalar = bn_from_hex(scalar_hex);
    Bn order = bn_from_dec(kToyOrderDec);
    if (BN_is_zero(scalar.get()) || BN_is_negative(scalar.get()) ||
        BN_cmp(scalar.get(), order.get()) >= 0) {
        throw Error("scalar outside the toy curve's valid range");
    }
    Bn x = bn_from_hex(x_hex);
    EcPoint point(EC_POINT_new(group));
    // Decompression; the y parity does not matter because x(k*P) = x(k*(-P)).
    if (!point ||
        EC_POINT_set_compressed_coordinates(group, point.get(), x.get(), 0, ctx.get()) != 1) {
        throw InvalidPointError("x coordinate is not on secp112r1 (no square root)");
    }
    EcPoint result(EC_POINT_new(group));
    if (!result ||
        EC_POINT_mul(group, result.get(), nullptr, point.get(), scalar.get(), ctx.get()) != 1) {
        throw Error("EC_POINT_mul failed");
    }
    if (EC_POINT_is_at_infinity(group, result.get())) {
        throw InvalidPointError("scalar multiplication landed at infinity");
    }
    Bn rx(BN_new());
    Bn ry(BN_new());
    if (EC_POINT_get_affine_coordinates(group, result.get(), rx.get(), ry.get(),
                                        ctx.get()) != 1) {
        throw Error("EC_POINT_get_affine_coordinates failed");
    }
    return bn_to_hex_padded(rx.get(), 28);
}

Bytes hex_to_fixed_le(std::string_view hex, std::size_t width_bytes) {
    std::string padded(hex);
    if (padded.size() > width_bytes * 2) {
        throw Error("hex value wider than the curve encoding");
    }
    padded.insert(0, width_bytes * 2 - padded.size(), '0');
    Bytes be = from_hex(padded);
    return Bytes(be.rbegin(), be.rend());
}

std::string le_to_hex(const Bytes& le) {
    Bytes be(le.rbegin(), le.rend());
    return to_hex(be);
}

std::string curve25519_scalar_mult_x(std::string_view scalar_hex, std::string_view x_hex) {
    Bytes scalar = hex_to_fixed_le(scalar_hex, 32);
    Bytes u = hex_to_fixed_le(x_hex, 32);
    return le_to_hex(crypto::x25519(scalar, u));
}

} // namespace

const CurveParams& curve_params(CurveId id) {
    static const CurveParams c25519{
        CurveId::curve25519,
        "curve25519",
        // 2^255 - 19
        "57896044618658097711785492504343953926634992332820282019728792003956564819949",
        "486662",
        "",
        // 2^252 + 27742317777372353535851937790883648493
        "7237005577332262213973186563042994240857116359379907606001950938285454250989",
        "0000000000000000000000000000000000000000000000000000000000000009",
        64};
    static const CurveParams toy{CurveId::secp112r1_toy,
                                 "secp112r1-toy",
                                 kToyPrimeDec,
                                 kToyADec,
                                 kToyBDec,
                                 kToyOrderDec,
                                 "09487239995A5EE76B55F9C2F098",
                                 28};
    switch (id) {
        case CurveId::curve25519: return c25519;
        case CurveId::secp112r1_toy: return toy;
    }
    throw Error("unknown curve id");
}

CurveId curve_from_name(std::string_view name) {
    if (name == "curve25519") return CurveId::curve25519;
    if (name == "secp112r1-toy" || name == "secp112r1") return CurveId::secp112r1_toy;
    throw Error("unknown curve '" + std::string(name) +
                "' (expected curve25519 or secp112r1-toy)");
}

std::string scalar_mult_x(CurveId curve, std::string_view scalar_hex,
                          std::string_view x_hex) {
    switch (curve) {
        case CurveId::curve25519: return curve25519_scalar_mult_x(scalar_hex, x_hex);
        case CurveId::secp112r1_toy: return toy_scalar_mult_x(scalar_hex, x_hex);
    }
    throw Error("unknown curve id");
}

std::string random_scalar_hex(CurveId curve) {
    if (curve == CurveId::curve25519) {
        // 32 random bytes; clamping happens inside the ladder.
        Bytes le = crypto::random_bytes(32);
        return le_to_hex(le);
    }
    Bn order = bn_from_dec(kToyOrderDec);
    Bn scalar(BN_new());
    do {
        if (BN_rand_range(scalar.get(), order.get()) != 1) {
            throw Error("BN_rand_range failed");
        }
    } while (BN_is_zero(scalar.get()));
    return bn_to_hex_padded(scalar.get(), 28);
}

} // namespace covertchat
