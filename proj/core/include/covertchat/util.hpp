#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace covertchat {

using Bytes = std::vector<std::uint8_t>;

/// Uppercase hex, two symbols per byte.
std::string to_hex(const Bytes& data);
std::string to_hex(const std::uint8_t* data, std::size_t len);

/// Accepts upper or lower case; throws covertchat::Error on odd length or
/// non-hex symbols.
Bytes from_hex(std::string_view hex);

/// ASCII-only uppercasing; non-ASCII scalars pass through unchanged.
char32_t to_upper_scalar(char32_t c);
std::string to_upper_ascii(std::string_view s);

/// UTF-8 <-> Unicode scalar values. Story positions index scalar values,
/// so all position-sensitive code goes through these.
std::u32string utf8_decode(std::string_view utf8);
std::string utf8_encode(std::u32string_view scalars);

/// Number of Unicode scalar values in a UTF-8 string.
std::size_t utf8_length(std::string_view utf8);

Bytes str_to_bytes(std::string_view s);
std::string bytes_to_str(const Bytes& b);

} // namespace covertchat
