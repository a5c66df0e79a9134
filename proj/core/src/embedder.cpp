#include "covertchat/embedder.hpp"

#include <algorithm>

#include "covertchat/errors.hpp"
#include "covertchat/util.hpp"

namespace covertchat {

namespace {

constexpr int kValidSecs[] = {16, 32, 48, 64, 96, 128};
// Proximity margin from the retry loop: once the story is within this many
// characters of the target position, in-between tokens stop and the
// temperature-only attempts begin. Matches the ~7-character maximum token
// assumption of the probability model; not configurable.
constexpr std::size_t kProximityMargin = 6;

struct WorkingToken {
    std::string text;
    std::size_t end; // scalar length of the story after this token
    double temperature;
    int k;
    bool carries_embedding;
};

bool chars_equal_uppercase(char32_t story_char, char32_t wanted) {
    return to_upper_scalar(story_char) == to_upper_scalar(wanted);
}

} // namespace

void EmbedderConfig::validate() const {
    if (!(t0 >= 0.7 && t0 <= 0.9)) {
        throw Error("T0 must lie in the optimal range [0.7, 0.9]");
    }
    if (k0 < 40 || k0 > 60) {
        throw Error("k0 must lie in the optimal range [40, 60]");
    }
    if (std::find(std::begin(kValidSecs), std::end(kValidSecs), sec) ==
        std::end(kValidSecs)) {
        throw Error("sec must be one of 16, 32, 48, 64, 96, 128");
    }
    if (top_f < 1) {
        throw Error("top_f must be at least 1");
    }
    if (d_o < 1) {
        throw Error("d_o must be at least 1");
    }
    if (max_restarts < 1) {
        throw Error("max_restarts must be at least 1");
    }
}

std::optional<char32_t> char_at(std::u32string_view story, std::size_t b) {
    if (b >= story.size()) return std::nullopt;
    return story[b];
}

std::optional<char32_t> char_at(std::string_view story_utf8, std::size_t b) {
    // streaming decode so indexing stays scalar-based without materializing
    std::size_t index = 0;
    std::size_t i = 0;
    while (i < story_utf8.size()) {
        auto lead = static_cast<unsigned char>(story_utf8[i]);
        std::size_t width = lead < 0x80 ? 1 : (lead & 0xE0) == 0xC0 ? 2
                                          : (lead & 0xF0) == 0xE0   ? 3
                                                                    : 4;
        if (index == b) {
            std::u32string one = utf8_decode(story_utf8.substr(i, width));
            return one.empty() ? std::optional<char32_t>{} : std::optional<char32_t>{one[0]};
        }
        i += width;
        ++index;
    }
    return std::nullopt;
}

std::string embed(const TokenModel& model, std::string_view topic,
                  std::string_view story0, const EmbedderConfig& config,
                  std::string_view chars, const PositionSchedule& schedule,
                  std::mt19937_64& rng, EmbedTrace* trace) {
    config.validate();

    const std::size_t n = chars.size();
    if (n != schedule.size()) {
        throw InvalidScheduleError("character list and position schedule differ in length");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!config.alphabet.contains_char(static_cast<unsigned char>(chars[i]))) {
            throw InvalidScheduleError(std::string("character '") + chars[i] +
                                       "' is not embeddable at level " +
                                       std::to_string(config.level()));
        }
        std::size_t gap = i == 0 ? schedule[0] : schedule[i] - schedule[i - 1];
        if (i > 0 && schedule[i] <= schedule[i - 1]) {
            throw InvalidScheduleError("positions must be strictly increasing");
        }
        if (i > 0 && gap < config.d_o) {
            throw InvalidScheduleError("position gap below d_o");
        }
    }
    if (n == 0) {
        return std::string(story0);
    }

    std::u32string story = utf8_decode(story0);
    if (story.size() >= schedule[0]) {
        throw InvalidScheduleError("initial story already reaches the first position");
    }

    const std::string topic_str(topic);
    const double t_step = config.t_slow_down();

    std::vector<WorkingToken> tokens;
    std::size_t i = 0;
    std::size_t prev_pos = story.size();
    double temperature = config.t0;
    int k = config.k0;
    int slow_down = 0;
    bool close = false;
    std::size_t restarts_since_commit = 0;
    std::size_t total_restarts = 0;
    std::size_t model_calls = 0;

    auto append_token = [&](const Candidate& c, bool embeds) {
        std::u32string tok = utf8_decode(c.text);
        story += tok;
        tokens.push_back({c.text, story.size(), temperature, k, embeds});
    };

    while (i < n) {
        const std::size_t target = schedule[i];
        TokenCandidates candidates = model.top_k(
            {topic_str, utf8_encode(story), temperature, static_cast<std::size_t>(k)});
        ++model_calls;
        if (candidates.empty()) {
            throw EmbeddingStuckError("model returned no candidates", i, total_restarts);
        }

        // Y: candidates that put chars[i] exactly at the target position.
        // The last character additionally has to respect the story length
        // cap b_{n-1} + d_o - 1; with gaps >= token lengths this never
        // excludes anything in practice.
        std::vector<const Candidate*> matching;
        for (const Candidate& c : candidates.tokens) {
            std::u32string tok = utf8_decode(c.text);
            if (target < story.size() + tok.size()) {
                char32_t at = target >= story.size() ? tok[target - story.size()]
                                                     : story[target];
                if (chars_equal_uppercase(at, static_cast<unsigned char>(chars[i]))) {
                    if (i + 1 == n &&
                        story.size() + tok.size() > schedule[n - 1] + config.d_o - 1) {
                        continue;
                    }
                    matching.push_back(&c);
                }
            }
        }

        if (!matching.empty()) {
            // successful embedding: commit a uniformly random member
            std::uniform_int_distribution<std::size_t> pick(0, matching.size() - 1);
            append_token(*matching[pick(rng)], true);
            prev_pos = story.size();
            temperature = config.t0;
            k = config.k0;
            slow_down = 0;
            close = false;
            restarts_since_commit = 0;
            ++i;
            continue;
        }

        // in-between token: scan a shuffled copy for one that keeps clear
        // of the target, then for one that lands in the proximity zone
        std::vector<const Candidate*> shuffled;
        shuffled.reserve(candidates.size());
        for (const Candidate& c : candidates.tokens) shuffled.push_back(&c);
        std::shuffle(shuffled.begin(), shuffled.end(), rng);

        bool committed = false;
        bool retry_armed = false;
        for (const Candidate* c : shuffled) {
            if (story.size() + utf8_length(c->text) + kProximityMargin < target) {
                append_token(*c, false);
                committed = true;
                break;
            }
        }
        if (!committed) {
            // The near zone admits tokens ending exactly at the target:
            // with space-prefixed word tokens a token boundary is the only
            // way the SPACE character can ever occupy a position, and the
            // strict bound would make that unreachable.
            for (const Candidate* c : shuffled) {
                if (story.size() + utf8_length(c->text) <= target) {
                    if (!close) {
                        close = true;
                        append_token(*c, false);
                        committed = true;
                    } else {
                        ++slow_down;
                        if (slow_down < config.top_f) {
                            temperature += t_step; // try again, just hotter
                            retry_armed = true;
                        } else {
                            slow_down = 0;
                        }
                    }
                    break;
                }
            }
        }

        if (!committed && !retry_armed) {
            // truncate back to the last successful embedding and relax
            story.resize(prev_pos);
            while (!tokens.empty() && tokens.back().end > prev_pos) tokens.pop_back();
            temperature += t_step;
            k += 1;
            slow_down = 0;
            close = false;
            ++total_restarts;
            if (++restarts_since_commit > config.max_restarts) {
                throw EmbeddingStuckError(
                    "gave up placing character " + std::to_string(i) + " after " +
                        std::to_string(restarts_since_commit - 1) + " consecutive restarts",
                    i, total_restarts);
            }
        }
    }

    if (trace) {
        trace->restarts += total_restarts;
        trace->model_calls += model_calls;
        for (const WorkingToken& t : tokens) {
            trace->tokens.push_back({t.text, t.temperature, t.k, t.carries_embedding});
        }
    }
    return utf8_encode(story);
}

std::string finish_story(const TokenModel& model, std::string_view topic,
                         std::string_view story, std::size_t limit,
                         const EmbedderConfig& config, std::mt19937_64& rng,
                         EmbedTrace* trace) {
    std::u32string out = utf8_decode(story);
    if (out.size() > limit) {
        throw Error("finish_story: story already exceeds the length cap");
    }
    const std::string topic_str(topic);
    auto ends_sentence = [&]() {
        if (out.empty()) return false;
        char32_t c = out.back();
        return c == U'.' || c == U'!' || c == U'?';
    };
    while (!ends_sentence()) {
        TokenCandidates candidates =
            model.top_k({topic_str, utf8_encode(out), config.t0,
                         static_cast<std::size_t>(config.k0)});
        if (trace) ++trace->model_calls;
        std::vector<const Candidate*> fits;
        for (const Candidate& c : candidates.tokens) {
            if (out.size() + utf8_length(c.text) <= limit) fits.push_back(&c);
        }
        if (fits.empty()) break;
        // keep the renormalized probabilities among the fitting candidates
        double total = 0.0;
        for (const Candidate* c : fits) total += c->probability;
        std::uniform_real_distribution<double> dist(0.0, total);
        double x = dist(rng);
        const Candidate* chosen = fits.back();
        for (const Candidate* c : fits) {
            if (x < c->probability) {
                chosen = c;
                break;
            }
            x -= c->probability;
        }
        out += utf8_decode(chosen->text);
        if (trace) {
            trace->tokens.push_back({chosen->text, config.t0, config.k0, false});
        }
    }
    return utf8_encode(out);
}

} // namespace covertchat
