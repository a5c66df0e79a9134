#pragma once

#include <string>
#include <string_view>

#include "covertchat/util.hpp"

namespace covertchat {

enum class CurveId {
    curve25519,
    secp112r1_toy,
};

/// Curve domain parameters. Public-key x coordinates travel through the
/// protocol as big-endian hex strings of exactly `encoding_hex_width`
/// symbols (64 for Curve25519, 28 for the toy curve), which is also the
/// number of characters a key occupies once mapped into an alphabet.
struct CurveParams {
    CurveId id;
    std::string name;
    std::string prime_dec;       // field prime, decimal
    std::string a_dec;           // Weierstrass a4 / Montgomery A coefficient
    std::string b_dec;           // Weierstrass a6 (empty for curve25519)
    std::string order_dec;       // group order (prime subgroup)
    std::string generator_x_hex; // x_g, big-endian, encoding_hex_width symbols
    std::size_t encoding_hex_width;
};

const CurveParams& curve_params(CurveId id);

/// Parses "curve25519" / "secp112r1-toy".
CurveId curve_from_name(std::string_view name);

/// x coordinate of scalar * P where P is the point with the given x
/// coordinate. All values are big-endian hex. For Curve25519 this is
/// x-only ladder arithmetic with standard scalar clamping; for the toy
/// curve the point is decompressed first (either square root gives the
/// same result) and InvalidPointError is thrown when no root exists.
std::string scalar_mult_x(CurveId curve, std::string_view scalar_hex,
                          std::string_view x_hex);

/// Uniform scalar in the curve's valid range, big-endian hex.
std::string random_scalar_hex(CurveId curve);

} // namespace covertchat
