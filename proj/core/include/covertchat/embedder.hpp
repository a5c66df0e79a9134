#pragma once

#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "covertchat/alphabet.hpp"
#include "covertchat/positions.hpp"
#include "covertchat/token_model.hpp"

namespace covertchat {

/// Sampling and back-off parameters for constrained story generation.
///
/// t_slow_down is fixed to 0.2 / (21 * top_f): the temperature headroom of
/// the human-like range [0.7, 0.9] spread over the 21 k values times top_f
/// retry attempts each. Callers normally fill top_f from
/// analysis::min_top_f(sec, level) so that the probability of ever leaving
/// the optimal sampling ranges stays below 2^-sec.
struct EmbedderConfig {
    double t0 = 0.7;
    int k0 = 40;
    Alphabet alphabet = Alphabet::default_for_level(4);
    int sec = 32;
    int top_f = 1;
    std::size_t d_o = 32;
    /// Cap on consecutive backtracks while stuck on one character; the
    /// algorithm as printed can loop forever on an adversarial corpus, so
    /// protocol code fails loudly instead.
    std::size_t max_restarts = 64;

    int level() const { return alphabet.level(); }
    double t_slow_down() const { return 0.2 / (21.0 * static_cast<double>(top_f)); }
    void validate() const;
};

/// Per-token record of how the final story was produced; lets tests check
/// vocabulary closure and sampling-parameter discipline.
struct CommittedToken {
    std::string text;
    double temperature = 0.0;
    int k = 0;
    bool carries_embedding = false;
};

struct EmbedTrace {
    std::vector<CommittedToken> tokens;
    std::size_t restarts = 0;      // total story truncations
    std::size_t max_consecutive_restarts = 0; // worst streak on one character
    std::size_t model_calls = 0;
};

/// Out-of-range-safe indexing: the scalar at position b, or nullopt when
/// b >= the number of scalar values.
std::optional<char32_t> char_at(std::u32string_view story, std::size_t b);
std::optional<char32_t> char_at(std::string_view story_utf8, std::size_t b);

/// Grows `story0` token by token so that chars[i], uppercased, lands
/// exactly at scalar position schedule[i], with temperature/k back-off and
/// backtracking. On success the returned story satisfies
///   uppercase(story[b_i]) = chars[i]  for all i, and
///   b_{n-1}+1 <= len(story) <= b_{n-1} + d_o - 1.
///
/// Preconditions (InvalidScheduleError): chars and schedule have equal
/// length, every chars[i] is in the alphabet, positions strictly increase
/// with gaps >= d_o, and len(story0) < b_0. Throws EmbeddingStuckError when
/// max_restarts consecutive backtracks cannot place a character.
std::string embed(const TokenModel& model, std::string_view topic,
                  std::string_view story0, const EmbedderConfig& config,
                  std::string_view chars, const PositionSchedule& schedule,
                  std::mt19937_64& rng, EmbedTrace* trace = nullptr);

/// Extends a finished embedding up to `limit` scalar values, preferring to
/// stop once the story ends at sentence punctuation. Never exceeds the cap.
std::string finish_story(const TokenModel& model, std::string_view topic,
                         std::string_view story, std::size_t limit,
                         const EmbedderConfig& config, std::mt19937_64& rng,
                         EmbedTrace* trace = nullptr);

} // namespace covertchat
