#pragma once

#include <string>
#include <string_view>

#include "covertchat/util.hpp"

namespace covertchat {

/// An embeddable character set: the 2^level radix digits S_l paired with an
/// ordered list of 2^level characters L_l (uppercase letters plus SPACE).
/// The digit-to-character map is the natural one between the ordered lists.
///
/// Immutable after construction; safe for unrestricted concurrent reads.
class Alphabet {
public:
    /// Builds an alphabet from its level (1..4) and the ordered character
    /// string, e.g. " ETAONISRHDLUCMF" for the default level 4. Characters
    /// must be SPACE or A-Z, duplicate-free, exactly 2^level of them.
    Alphabet(int level, std::string_view chars);

    /// The default alphabets: the most frequent English characters in
    /// frequency order, SPACE first. Level 1: " E", 2: " ETA",
    /// 3: " ETAONIS", 4: " ETAONISRHDLUCMF".
    static Alphabet default_for_level(int level);

    int level() const noexcept { return level_; }
    const std::string& digits() const noexcept { return digits_; }
    const std::string& chars() const noexcept { return chars_; }
    std::size_t size() const noexcept { return chars_.size(); }

    bool contains_char(char32_t c) const;

    /// Digit-by-digit map S_l -> L_l. Length preserving.
    /// Throws InvalidDigitError naming the offending position.
    std::string encode(std::string_view digit_string) const;

    /// Inverse map, case-insensitive on letters.
    /// Throws NotEmbeddableError naming the offending position.
    std::string decode(std::string_view chars) const;

private:
    int level_;
    std::string digits_;
    std::string chars_;
    int digit_index_[128];
    int char_index_[128];
};

/// The canonical digit symbols "0".."F" truncated to 2^level symbols.
std::string canonical_digits(int level);

/// Big-endian bit expansion of bytes into a radix-2^level digit string.
/// For level 3 the bit string is padded on the right with zero bits to a
/// multiple of 3; the original bit length is always 8 * bytes.size() and,
/// because the padding is shorter than 3 bits, it is recoverable from the
/// digit count alone (the unique multiple of 8 in [3n-2, 3n]).
std::string digits_from_bytes(const Bytes& bytes, int level);

/// Inverse of digits_from_bytes. Throws covertchat::Error if the digit
/// count cannot correspond to a whole number of bytes or if level-3
/// padding bits are not zero.
Bytes bytes_from_digits(std::string_view digits, int level);

} // namespace covertchat
