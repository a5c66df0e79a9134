#include "covertchat/analysis.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "covertchat/errors.hpp"
#include "covertchat/extractor.hpp"

namespace covertchat::analysis {

namespace detail {
extern const char* kBuiltinFrequencyTable; // generated from core/data
}

using BigFloat = boost::multiprecision::cpp_bin_float_100;

FrequencyTable FrequencyTable::parse(std::string_view text) {
    FrequencyTable table;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;

        std::vector<std::string_view> fields;
        std::size_t field_start = 0;
        while (true) {
            std::size_t tab = line.find('\t', field_start);
            if (tab == std::string_view::npos) {
                fields.push_back(line.substr(field_start));
                break;
            }
            fields.push_back(line.substr(field_start, tab - field_start));
            field_start = tab + 1;
        }

        auto parse_freq = [&](std::string_view s) {
            double v = std::stod(std::string(s));
            if (v < 0.0) throw Error("negative frequency at line " + std::to_string(line_no));
            return v;
        };
        if (fields.size() == 2 && fields[0].size() == 1) {
            char c = static_cast<char>(std::toupper(static_cast<unsigned char>(fields[0][0])));
            table.chars_[c] = parse_freq(fields[1]);
        } else if (fields.size() == 3 && fields[0].size() == 2) {
            std::string digram = to_upper_ascii(fields[0]);
            int offset = std::stoi(std::string(fields[1]));
            table.digrams_[{digram, offset}] = parse_freq(fields[2]);
        } else {
            throw Error("malformed frequency table line " + std::to_string(line_no));
        }
    }
    if (table.chars_.empty()) throw Error("frequency table has no character entries");
    return table;
}

FrequencyTable FrequencyTable::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open frequency table " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

const FrequencyTable& FrequencyTable::builtin_english() {
    static const FrequencyTable table = parse(detail::kBuiltinFrequencyTable);
    return table;
}

double FrequencyTable::char_freq(char32_t c) const {
    char32_t up = to_upper_scalar(c);
    if (up >= 128) return 0.0;
    auto it = chars_.find(static_cast<char>(up));
    return it == chars_.end() ? 0.0 : it->second;
}

double FrequencyTable::digram_freq(std::string_view digram, int offset) const {
    auto it = digrams_.find({to_upper_ascii(digram), offset});
    return it == digrams_.end() ? 0.0 : it->second;
}

double FrequencyTable::min_freq(const Alphabet& alphabet) const {
    double best = 1.0;
    for (char c : alphabet.chars()) {
        best = std::min(best, char_freq(static_cast<unsigned char>(c)));
    }
    return best;
}

double FrequencyTable::char_sum() const {
    double sum = 0.0;
    for (const auto& [c, f] : chars_) sum += f;
    return sum;
}

double FrequencyTable::digram_sum(int offset) const {
    double sum = 0.0;
    for (const auto& [key, f] : digrams_) {
        if (key.second == offset) sum += f;
    }
    return sum;
}

double token_length_pmf(int j) {
    if (j < 1 || j > 7) {
        throw Error("token length class must be within [1, 7]");
    }
    static constexpr int kBinomial6[7] = {1, 6, 15, 20, 15, 6, 1};
    return static_cast<double>(kBinomial6[j - 1]) / 64.0;
}

namespace {

BigFloat pr_nonempty_big(int k, const BigFloat& p_l) {
    BigFloat sum = 0;
    for (int j = 1; j <= 7; ++j) {
        BigFloat base = p_l / j;
        BigFloat exponent = BigFloat(k) * BigFloat(token_length_pmf(j));
        sum += boost::multiprecision::pow(base, exponent);
    }
    return sum / 7;
}

BigFloat p_dist_bound_big(const BigFloat& p_l, int top_f) {
    BigFloat product = 1;
    for (int k = 40; k <= 60; ++k) {
        BigFloat factor = 1 - pr_nonempty_big(k, p_l);
        product *= boost::multiprecision::pow(factor, BigFloat(top_f));
    }
    return product;
}

} // namespace

double pr_nonempty(int k, double p_l) {
    if (k < 1) throw Error("k must be at least 1");
    if (!(p_l > 0.0 && p_l < 1.0)) throw Error("p_l must lie in (0, 1)");
    return static_cast<double>(pr_nonempty_big(k, BigFloat(p_l)));
}

double p_dist_bound(double p_l, int top_f) {
    if (top_f < 1) throw Error("top_f must be at least 1");
    if (!(p_l > 0.0 && p_l < 1.0)) throw Error("p_l must lie in (0, 1)");
    return static_cast<double>(p_dist_bound_big(BigFloat(p_l), top_f));
}

int min_top_f(int sec, int level, const FrequencyTable& table) {
    if (std::find(kSecLevels.begin(), kSecLevels.end(), sec) == kSecLevels.end()) {
        throw Error("sec must be one of 16, 32, 48, 64, 96, 128");
    }
    const Alphabet alphabet = Alphabet::default_for_level(level);
    const BigFloat p_l(table.min_freq(alphabet));
    if (!(p_l > 0)) throw Error("frequency table lacks the alphabet's characters");
    const BigFloat threshold = boost::multiprecision::pow(BigFloat(2), -sec);

    // bound = B^top_f with B = prod_k (1 - pr_nonempty); start at the
    // closed-form solution and settle the integer boundary exactly
    BigFloat log_b = 0;
    for (int k = 40; k <= 60; ++k) {
        log_b += boost::multiprecision::log(1 - pr_nonempty_big(k, p_l));
    }
    BigFloat estimate = BigFloat(sec) * boost::multiprecision::log(BigFloat(2)) / -log_b;
    int top_f = static_cast<int>(boost::multiprecision::ceil(estimate).convert_to<long>());
    top_f = std::max(top_f, 1);
    while (p_dist_bound_big(p_l, top_f) > threshold) ++top_f;
    while (top_f > 1 && p_dist_bound_big(p_l, top_f - 1) <= threshold) --top_f;
    return top_f;
}

int min_top_f(int sec, int level) {
    return min_top_f(sec, level, FrequencyTable::builtin_english());
}

int SecurityTable::at(int sec, int level) const {
    auto it = top_f.find({sec, level});
    if (it == top_f.end()) {
        throw Error("security table has no entry for sec=" + std::to_string(sec) +
                    " level=" + std::to_string(level));
    }
    return it->second;
}

SecurityTable build_security_table(const FrequencyTable& table) {
    SecurityTable grid;
    for (int sec : kSecLevels) {
        for (int level = 1; level <= 4; ++level) {
            grid.top_f[{sec, level}] = min_top_f(sec, level, table);
        }
    }
    return grid;
}

EmbedderConfig default_embedder_config(int sec, int level, const FrequencyTable& table) {
    EmbedderConfig config;
    config.alphabet = Alphabet::default_for_level(level);
    config.sec = sec;
    config.top_f = min_top_f(sec, level, table);
    return config;
}

namespace {

std::vector<double> normalize(const std::vector<double>& hist) {
    double total = 0.0;
    for (double v : hist) total += v;
    std::vector<double> out(hist.size(), 0.0);
    if (total <= 0.0) return out;
    for (std::size_t i = 0; i < hist.size(); ++i) out[i] = hist[i] / total;
    return out;
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
    return sum / 2.0;
}

constexpr std::size_t kMaxWordLen = 24;
constexpr std::size_t kProbesPerCorpus = 20000;

struct CorpusFeatures {
    std::vector<double> word_lengths; // 1..kMaxWordLen, clamped
    std::vector<double> char_counts;  // 128 ASCII buckets + 1 overflow
};

CorpusFeatures corpus_features(const std::vector<std::string>& corpus,
                               std::uint64_t probe_seed) {
    CorpusFeatures f;
    f.word_lengths.assign(kMaxWordLen, 0.0);
    f.char_counts.assign(129, 0.0);
    for (const std::string& story : corpus) {
        std::size_t run = 0;
        for (char c : story) {
            if (std::isspace(static_cast<unsigned char>(c))) {
                if (run > 0) f.word_lengths[std::min(run, kMaxWordLen) - 1] += 1.0;
                run = 0;
            } else {
                ++run;
            }
        }
        if (run > 0) f.word_lengths[std::min(run, kMaxWordLen) - 1] += 1.0;
    }
    std::mt19937_64 rng(probe_seed);
    std::uniform_int_distribution<std::size_t> story_pick(0, corpus.size() - 1);
    for (std::size_t probe = 0; probe < kProbesPerCorpus; ++probe) {
        const std::string& story = corpus[story_pick(rng)];
        std::u32string scalars = utf8_decode(story);
        if (scalars.empty()) continue;
        std::uniform_int_distribution<std::size_t> pos_pick(0, scalars.size() - 1);
        char32_t c = to_upper_scalar(scalars[pos_pick(rng)]);
        f.char_counts[c < 128 ? static_cast<std::size_t>(c) : 128] += 1.0;
    }
    return f;
}

double feature_distance(const CorpusFeatures& a, const CorpusFeatures& b) {
    double length_tv = total_variation(normalize(a.word_lengths), normalize(b.word_lengths));
    double char_tv = total_variation(normalize(a.char_counts), normalize(b.char_counts));
    return 0.5 * length_tv + 0.5 * char_tv;
}

} // namespace

double tok_stat_distance(const std::vector<std::string>& corpus_a,
                         const std::vector<std::string>& corpus_b,
                         std::size_t min_stories, std::uint64_t probe_seed) {
    if (corpus_a.size() < min_stories || corpus_b.size() < min_stories) {
        throw Error("token-statistics distance needs at least " +
                    std::to_string(min_stories) + " stories per corpus");
    }
    return feature_distance(corpus_features(corpus_a, probe_seed),
                            corpus_features(corpus_b, probe_seed));
}

BootstrapCI tok_stat_bootstrap(const std::vector<std::string>& corpus_a,
                               const std::vector<std::string>& corpus_b,
                               std::size_t resamples, std::uint64_t seed,
                               std::size_t min_stories) {
    BootstrapCI ci;
    ci.point = tok_stat_distance(corpus_a, corpus_b, min_stories, seed);
    std::mt19937_64 rng(seed ^ 0x9E3779B97F4A7C15ULL);
    std::vector<double> samples;
    samples.reserve(resamples);
    auto resample = [&](const std::vector<std::string>& corpus) {
        std::uniform_int_distribution<std::size_t> pick(0, corpus.size() - 1);
        std::vector<std::string> out;
        out.reserve(corpus.size());
        for (std::size_t i = 0; i < corpus.size(); ++i) out.push_back(corpus[pick(rng)]);
        return out;
    };
    for (std::size_t r = 0; r < resamples; ++r) {
        samples.push_back(tok_stat_distance(resample(corpus_a), resample(corpus_b),
                                            min_stories, seed + r + 1));
    }
    std::sort(samples.begin(), samples.end());
    ci.low = samples[static_cast<std::size_t>(0.025 * static_cast<double>(samples.size()))];
    ci.high = samples[std::min(samples.size() - 1,
                               static_cast<std::size_t>(0.975 * static_cast<double>(samples.size())))];
    return ci;
}

namespace {

GameResult run_distinguishing_game(const Adversary& adversary, const GameConfig& config,
                                   std::size_t trials) {
    if (!config.model) throw Error("game config has no token model");
    if (trials < 1) throw Error("need at least one trial");
    config.params.validate();
    config.embedder.validate();

    // one setup per game: fixed password, hence fixed keys and a fixed
    // schedule (the challenge length is fixed, so n is too)
    SessionKeys keys = derive_keys(config.password, config.params.salt, config.params.count);
    const Alphabet alphabet = config.params.alphabet();
    const std::size_t enc_bytes = 16 + config.plaintext_bytes;
    const std::size_t n =
        digits_from_bytes(Bytes(enc_bytes, 0), config.params.level).size();
    PositionSchedule schedule =
        derive_schedule(keys.dk2, n, config.params.d_o, config.params.chunk_size);

    std::mt19937_64 rng(config.seed);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<std::size_t> window(
        1, config.params.d_o > 2 ? config.params.d_o - 1 : 1);

    std::size_t correct = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        bool embedded = coin(rng) == 1;
        std::string story;
        if (embedded) {
            Bytes plaintext(config.plaintext_bytes);
            for (auto& b : plaintext) b = static_cast<std::uint8_t>(rng());
            story = encrypt_to_story(config.password, plaintext, config.topic,
                                     *config.model, config.params, config.embedder, rng);
        } else {
            std::size_t target = schedule.positions.back() + window(rng);
            story = sample_story(*config.model, config.topic, target, config.embedder.t0,
                                 static_cast<std::size_t>(config.embedder.k0), rng);
        }
        bool guess = adversary(AdversaryView{story, schedule, alphabet, rng});
        if (guess == embedded) ++correct;
    }

    GameResult result;
    result.trials = trials;
    result.correct = correct;
    result.advantage =
        std::abs(static_cast<double>(correct) / static_cast<double>(trials) - 0.5);
    result.sigma = std::sqrt(0.25 / static_cast<double>(trials));
    return result;
}

} // namespace

GameResult ind_cc_game(const Adversary& adversary, const GameConfig& config,
                       std::size_t trials) {
    return run_distinguishing_game(adversary, config, trials);
}

GameResult ss_adv_game(const Adversary& adversary, const GameConfig& config,
                       std::size_t trials) {
    return run_distinguishing_game(adversary, config, trials);
}

Adversary random_guess_adversary() {
    return [](const AdversaryView& view) {
        std::uniform_int_distribution<int> coin(0, 1);
        return coin(view.rng) == 1;
    };
}

Adversary prop1_adversary() {
    return [](const AdversaryView& view) {
        return distinguish(view.story, view.true_schedule, view.alphabet);
    };
}

Adversary independent_schedule_adversary(std::uint64_t seed) {
    return [seed](const AdversaryView& view) {
        std::mt19937_64 key_rng(seed);
        Bytes key(32);
        for (auto& b : key) b = static_cast<std::uint8_t>(key_rng());
        PositionSchedule wrong =
            derive_schedule(key, view.true_schedule.size(), view.true_schedule.offset,
                            view.true_schedule.chunk_size);
        return distinguish(view.story, wrong, view.alphabet);
    };
}

Adversary frequency_adversary(const FrequencyTable& table) {
    return [table](const AdversaryView& view) {
        // expected alphabet-membership rate of plain text at random spots
        double expected = 0.0;
        for (char c : view.alphabet.chars()) {
            expected += table.char_freq(static_cast<unsigned char>(c));
        }
        std::u32string scalars = utf8_decode(view.story);
        if (scalars.empty()) return false;
        std::uniform_int_distribution<std::size_t> pick(0, scalars.size() - 1);
        constexpr std::size_t kProbes = 64;
        std::size_t hits = 0;
        for (std::size_t i = 0; i < kProbes; ++i) {
            if (view.alphabet.contains_char(scalars[pick(view.rng)])) ++hits;
        }
        double rate = static_cast<double>(hits) / kProbes;
        return rate > expected + 0.08;
    };
}

} // namespace covertchat::analysis
