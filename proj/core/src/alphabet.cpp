#include "covertchat/alphabet.hpp"

#include <algorithm>

#include "covertchat/errors.hpp"

namespace covertchat {

namespace {
constexpr std::string_view kDefaultChars[5] = {
    "", " E", " ETA", " ETAONIS", " ETAONISRHDLUCMF"};
} // namespace

std::string canonical_digits(int level) {
    if (level < 1 || level > 4) {
        throw Error("alphabet level must be within [1, 4]");
    }
    static constexpr std::string_view all = "0123456789ABCDEF";
    return std::string(all.substr(0, std::size_t{1} << level));
}

Alphabet::Alphabet(int level, std::string_view chars)
    : level_(level), digits_(canonical_digits(level)), chars_(chars) {
    const std::size_t expected = std::size_t{1} << level;
    if (chars_.size() != expected) {
        throw Error("alphabet for level " + std::to_string(level) + " needs " +
                    std::to_string(expected) + " characters, got " +
                    std::to_string(chars_.size()));
    }
    std::fill(std::begin(digit_index_), std::end(digit_index_), -1);
    std::fill(std::begin(char_index_), std::end(char_index_), -1);
    for (std::size_t i = 0; i < digits_.size(); ++i) {
        digit_index_[static_cast<unsigned char>(digits_[i])] = static_cast<int>(i);
    }
    for (std::size_t i = 0; i < chars_.size(); ++i) {
        char c = chars_[i];
        if (!(c == ' ' || (c >= 'A' && c <= 'Z'))) {
            throw Error("alphabet characters must be SPACE or A-Z");
        }
        if (char_index_[static_cast<unsigned char>(c)] != -1) {
            throw Error(std::string("duplicate alphabet character '") + c + "'");
        }
        char_index_[static_cast<unsigned char>(c)] = static_cast<int>(i);
    }
}

Alphabet Alphabet::default_for_level(int level) {
    if (level < 1 || level > 4) {
        throw Error("alphabet level must be within [1, 4]");
    }
    return Alphabet(level, kDefaultChars[level]);
}

bool Alphabet::contains_char(char32_t c) const {
    char32_t up = to_upper_scalar(c);
    if (up >= 128) return false;
    return char_index_[static_cast<unsigned char>(up)] != -1;
}

std::string Alphabet::encode(std::string_view digit_string) const {
    std::string out;
    out.reserve(digit_string.size());
    for (std::size_t i = 0; i < digit_string.size(); ++i) {
        unsigned char d = static_cast<unsigned char>(digit_string[i]);
        int idx = d < 128 ? digit_index_[d] : -1;
        if (idx < 0) {
            throw InvalidDigitError("digit symbol '" + std::string(1, digit_string[i]) +
                                        "' at position " + std::to_string(i) +
                                        " is not a base-2^" + std::to_string(level_) +
                                        " symbol",
                                    i);
        }
        out.push_back(chars_[static_cast<std::size_t>(idx)]);
    }
    return out;
}

std::string Alphabet::decode(std::string_view chars) const {
    std::string out;
    out.reserve(chars.size());
    for (std::size_t i = 0; i < chars.size(); ++i) {
        char c = chars[i];
        if (c >= 'a' && c <= 'z') c = static_cast<char>(c - ('a' - 'A'));
        int idx = static_cast<unsigned char>(c) < 128
                      ? char_index_[static_cast<unsigned char>(c)]
                      : -1;
        if (idx < 0) {
            throw NotEmbeddableError("character at position " + std::to_string(i) +
                                         " is outside the level-" + std::to_string(level_) +
                                         " embeddable set",
                                     i);
        }
        out.push_back(digits_[static_cast<std::size_t>(idx)]);
    }
    return out;
}

std::string digits_from_bytes(const Bytes& bytes, int level) {
    const std::string digit_set = canonical_digits(level);
    const std::size_t total_bits = bytes.size() * 8;
    std::size_t padded_bits = total_bits;
    if (level == 3 && padded_bits % 3 != 0) {
        padded_bits += 3 - padded_bits % 3;
    }
    std::string out;
    out.reserve(padded_bits / level);
    std::uint32_t acc = 0;
    unsigned acc_bits = 0;
    auto bit_at = [&](std::size_t i) -> unsigned {
        if (i >= total_bits) return 0; // right zero padding (level 3 only)
        return (bytes[i / 8] >> (7 - i % 8)) & 1u;
    };
    for (std::size_t i = 0; i < padded_bits; ++i) {
        acc = acc << 1 | bit_at(i);
        if (++acc_bits == static_cast<unsigned>(level)) {
            out.push_back(digit_set[acc]);
            acc = 0;
            acc_bits = 0;
        }
    }
    return out;
}

Bytes bytes_from_digits(std::string_view digits, int level) {
    const std::string digit_set = canonical_digits(level);
    int value_of[128];
    std::fill(std::begin(value_of), std::end(value_of), -1);
    for (std::size_t i = 0; i < digit_set.size(); ++i) {
        value_of[static_cast<unsigned char>(digit_set[i])] = static_cast<int>(i);
    }

    const std::size_t digit_bits = digits.size() * static_cast<std::size_t>(level);
    std::size_t payload_bits = digit_bits;
    if (level == 3) {
        // original bit length is the unique multiple of 8 in [3n-2, 3n]
        payload_bits = digit_bits - digit_bits % 8;
        if (digit_bits - payload_bits > 2) {
            throw Error("level-3 digit count " + std::to_string(digits.size()) +
                        " cannot delimit a whole number of bytes");
        }
    } else if (digit_bits % 8 != 0) {
        throw Error("digit string of " + std::to_string(digits.size()) +
                    " level-" + std::to_string(level) +
                    " symbols does not cover whole bytes");
    }

    Bytes out(payload_bits / 8, 0);
    for (std::size_t i = 0; i < digits.size(); ++i) {
        int v = static_cast<unsigned char>(digits[i]) < 128
                    ? value_of[static_cast<unsigned char>(digits[i])]
                    : -1;
        if (v < 0) {
            throw InvalidDigitError("digit symbol at position " + std::to_string(i) +
                                        " is not a base-2^" + std::to_string(level) +
                                        " symbol",
                                    i);
        }
        for (int b = level - 1; b >= 0; --b) {
            std::size_t bit_index = i * static_cast<std::size_t>(level) +
                                    static_cast<std::size_t>(level - 1 - b);
            unsigned bit = (static_cast<unsigned>(v) >> b) & 1u;
            if (bit_index >= payload_bits) {
                if (bit != 0) {
                    throw Error("non-zero level-3 padding bits");
                }
                continue;
            }
            out[bit_index / 8] |= static_cast<std::uint8_t>(bit << (7 - bit_index % 8));
        }
    }
    return out;
}

} // namespace covertchat
