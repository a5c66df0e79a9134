#include "covertchat/token_model.hpp"

#include <algorithm>
#include <cctype>
#include <atomic>
#include <cmath>
#include <iostream>

#include "covertchat/errors.hpp"
#include "covertchat/util.hpp"

namespace covertchat {

namespace {

std::vector<std::string> split_words(std::string_view text) {
    std::vector<std::string> words;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) words.emplace_back(text.substr(start, i - start));
    }
    return words;
}

std::string last_word(std::string_view text) {
    std::size_t end = text.size();
    while (end > 0 && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    if (end == 0) return {};
    std::size_t start = end;
    while (start > 0 && !std::isspace(static_cast<unsigned char>(text[start - 1]))) --start;
    return std::string(text.substr(start, end - start));
}

void validate_query(const ModelQuery& query) {
    if (!(query.temperature > 0.0)) {
        throw Error("temperature must be positive");
    }
    if (query.k < 1) {
        throw Error("k must be at least 1");
    }
}

} // namespace

BigramModel BigramModel::from_corpus(std::string_view corpus, std::size_t min_words) {
    std::vector<std::string> words = split_words(corpus);
    if (words.empty()) {
        throw Error("corpus is empty");
    }
    if (words.size() < min_words) {
        throw Error("corpus has " + std::to_string(words.size()) +
                    " words, need at least " + std::to_string(min_words));
    }

    std::map<std::string, std::map<std::string, std::size_t>> bigram_counts;
    std::map<std::string, std::size_t> unigram_counts;
    for (std::size_t i = 0; i < words.size(); ++i) {
        ++unigram_counts[words[i]];
        if (i + 1 < words.size()) {
            ++bigram_counts[words[i]][words[i + 1]];
        }
    }

    auto to_sorted = [](const std::map<std::string, std::size_t>& counts) {
        std::vector<Entry> entries;
        entries.reserve(counts.size());
        for (const auto& [word, count] : counts) entries.push_back({word, count});
        std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            if (a.count != b.count) return a.count > b.count;
            return a.word < b.word;
        });
        return entries;
    };

    BigramModel model;
    model.unigram_ = to_sorted(unigram_counts);
    for (const auto& [context, counts] : bigram_counts) {
        model.successors_[context] = to_sorted(counts);
    }
    return model;
}

TokenCandidates BigramModel::top_k(const ModelQuery& query) const {
    validate_query(query);
    if (query.k > unigram_.size()) {
        static std::atomic<bool> warned{false};
        if (!warned.exchange(true)) {
            std::clog << "covertchat: k=" << query.k << " exceeds vocabulary size "
                      << unigram_.size() << ", truncating (reported once)\n";
        }
    }

    std::string context = last_word(query.story);
    if (context.empty()) context = last_word(query.topic);

    const std::vector<Entry>* pool = &unigram_;
    if (!context.empty()) {
        auto it = successors_.find(context);
        if (it != successors_.end() && !it->second.empty()) pool = &it->second;
    }

    const std::size_t take = std::min<std::size_t>(query.k, pool->size());
    TokenCandidates out;
    out.tokens.reserve(take);

    // softmax of log(count)/T over the selected k, computed stably
    double max_scaled = -1e300;
    std::vector<double> scaled(take);
    for (std::size_t i = 0; i < take; ++i) {
        scaled[i] = std::log(static_cast<double>((*pool)[i].count)) / query.temperature;
        max_scaled = std::max(max_scaled, scaled[i]);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < take; ++i) {
        scaled[i] = std::exp(scaled[i] - max_scaled);
        total += scaled[i];
    }
    for (std::size_t i = 0; i < take; ++i) {
        out.tokens.push_back({" " + (*pool)[i].word, scaled[i] / total});
    }
    return out;
}

const Candidate& sample_token(const TokenCandidates& candidates, std::mt19937_64& rng) {
    if (candidates.empty()) {
        throw Error("cannot sample from empty candidate set");
    }
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    double x = dist(rng);
    double cumulative = 0.0;
    for (const Candidate& c : candidates.tokens) {
        cumulative += c.probability;
        if (x < cumulative) return c;
    }
    return candidates.tokens.back();
}

std::string sample_story(const TokenModel& model, std::string_view topic,
                         std::size_t min_scalars, double temperature, std::size_t k,
                         std::mt19937_64& rng, std::string_view story0) {
    std::string story(story0);
    while (utf8_length(story) < min_scalars) {
        TokenCandidates candidates =
            model.top_k({std::string(topic), story, temperature, k});
        if (candidates.empty()) break;
        story += sample_token(candidates, rng).text;
    }
    return story;
}

} // namespace covertchat
