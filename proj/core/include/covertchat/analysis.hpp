#pragma once

#include <array>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "covertchat/alphabet.hpp"
#include "covertchat/embedder.hpp"
#include "covertchat/positions.hpp"
#include "covertchat/symmetric.hpp"
#include "covertchat/token_model.hpp"

namespace covertchat::analysis {

/// Single-character and digram frequencies over {SPACE, A-Z}, case-folded.
/// Loaded from a plain-text file: `char<TAB>freq` lines and
/// `digram<TAB>offset<TAB>freq` lines; '#' starts a comment.
class FrequencyTable {
public:
    static FrequencyTable parse(std::string_view text);
    static FrequencyTable load_file(const std::string& path);
    /// The table shipped with the library (see core/data).
    static const FrequencyTable& builtin_english();

    double char_freq(char32_t c) const; // 0 when absent
    double digram_freq(std::string_view digram, int offset) const;
    bool has_digrams() const noexcept { return !digrams_.empty(); }

    /// p_l: the frequency of the rarest character of the alphabet.
    double min_freq(const Alphabet& alphabet) const;

    double char_sum() const;
    double digram_sum(int offset) const;

private:
    std::map<char, double> chars_;
    std::map<std::pair<std::string, int>, double> digrams_;
};

inline constexpr std::array<int, 6> kSecLevels = {16, 32, 48, 64, 96, 128};

/// P(j) = 2^-6 * C(6, j-1): the token-length model, a binomial centered on
/// the four-character average token. j ranges over [1, 7].
double token_length_pmf(int j);

/// Pr(Y != emptyset) = (1/7) * sum_j (p_l / j)^(k * P(j)), exactly as the
/// bound is printed. Note it *decreases* in k; the formula is implemented
/// literally, surprising shape and all.
double pr_nonempty(int k, double p_l);

/// Upper bound on the probability that some token was produced outside
/// the optimal sampling ranges: prod_{k=40..60} (1 - pr_nonempty(k,p))^f.
/// Evaluated in 100-digit floats so the sec=128 regime stays exact.
double p_dist_bound(double p_l, int top_f);

/// Smallest top_f with p_dist_bound(p_l, top_f) <= 2^-sec, where p_l is
/// the rarest-character frequency of the level's default alphabet.
int min_top_f(int sec, int level, const FrequencyTable& table);
int min_top_f(int sec, int level); // builtin table

/// The full (sec, level) -> top_f grid, recomputed from the formulas.
struct SecurityTable {
    std::map<std::pair<int, int>, int> top_f; // (sec, level) -> top_f
    int at(int sec, int level) const;
};
SecurityTable build_security_table(const FrequencyTable& table);

/// Default embedder parameters for a (sec, level) pair: top_f from the
/// security table, everything else the documented defaults.
EmbedderConfig default_embedder_config(int sec, int level,
                                       const FrequencyTable& table =
                                           FrequencyTable::builtin_english());

/// Empirical statistical distance between token-level feature
/// distributions of two story corpora: total-variation distance over the
/// pooled word-length histogram and over character frequencies at seeded
/// random probe offsets, averaged. Requires `min_stories` per corpus.
double tok_stat_distance(const std::vector<std::string>& corpus_a,
                         const std::vector<std::string>& corpus_b,
                         std::size_t min_stories = 100, std::uint64_t probe_seed = 1);

struct BootstrapCI {
    double point = 0.0;
    double low = 0.0;
    double high = 0.0;
};

/// Percentile bootstrap over stories (95% interval).
BootstrapCI tok_stat_bootstrap(const std::vector<std::string>& corpus_a,
                               const std::vector<std::string>& corpus_b,
                               std::size_t resamples = 200, std::uint64_t seed = 1,
                               std::size_t min_stories = 100);

/// What a distinguishing adversary gets to see per trial. The true
/// schedule models the granted knowledge of the known-positions
/// distinguisher; honest adversaries may ignore it.
struct AdversaryView {
    const std::string& story;
    const PositionSchedule& true_schedule;
    const Alphabet& alphabet;
    std::mt19937_64& rng;
};

/// Returns true for "this story carries an embedding".
using Adversary = std::function<bool(const AdversaryView&)>;

struct GameConfig {
    const TokenModel* model = nullptr;
    SharedParams params;      // keep count small here; this runs many trials
    EmbedderConfig embedder;
    std::string password = "correct horse battery staple";
    std::string topic = "weekend plans";
    std::size_t plaintext_bytes = 4;
    std::uint64_t seed = 7;
};

struct GameResult {
    std::size_t trials = 0;
    std::size_t correct = 0;
    double advantage = 0.0; // |Pr[guess correct] - 1/2|
    double sigma = 0.0;     // stddev of the estimator under the null
};

/// The embedded-vs-plain distinguishing game: per trial the challenger
/// flips a coin, produces either an encrypting story or an unconstrained
/// story of comparable length, and scores the adversary's guess. The
/// adaptive-oracle secrecy game is the same experiment with the coin read
/// as the oracle's mode, so both entry points share the engine.
GameResult ind_cc_game(const Adversary& adversary, const GameConfig& config,
                       std::size_t trials);
GameResult ss_adv_game(const Adversary& adversary, const GameConfig& config,
                       std::size_t trials);

Adversary random_guess_adversary();
/// The known-positions distinguisher: membership test at the true schedule.
Adversary prop1_adversary();
/// Prop-1 mechanics but with a freshly random (wrong) schedule.
Adversary independent_schedule_adversary(std::uint64_t seed);
/// Baseline: alphabet-membership rate at random probe positions compared
/// against the expected plain-text rate.
Adversary frequency_adversary(const FrequencyTable& table =
                                  FrequencyTable::builtin_english());

} // namespace covertchat::analysis
