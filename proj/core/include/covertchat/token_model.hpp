#pragma once

#include <cstddef>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace covertchat {

/// One next-token candidate with its renormalized probability.
struct Candidate {
    std::string text; // includes its leading space, e.g. " cat"
    double probability = 0.0;
};

/// Top-k candidates, sorted by descending probability; probabilities are
/// softmax(logit / T) restricted to the k selected tokens, so they sum to 1.
struct TokenCandidates {
    std::vector<Candidate> tokens;

    bool empty() const noexcept { return tokens.empty(); }
    std::size_t size() const noexcept { return tokens.size(); }
};

struct ModelQuery {
    std::string topic;
    std::string story;
    double temperature = 0.7;
    std::size_t k = 40;
};

/// Contract for anything that can propose continuations of a story: the
/// deterministic offline reference model below, or a remote HTTP adapter.
/// Implementations are read-only after construction and safe to query
/// concurrently. Candidate selection and sampling always happen in the
/// caller, never in the model.
class TokenModel {
public:
    virtual ~TokenModel() = default;

    /// The k highest-logit continuations of (topic, story). Temperature
    /// rescales probabilities but never reorders candidates, so the
    /// selected set depends only on logit order.
    virtual TokenCandidates top_k(const ModelQuery& query) const = 0;
};

/// Word-level bigram model over a whitespace-tokenized corpus. Logits are
/// log successor counts; an unknown context falls back to the unigram
/// distribution. Tokens carry their leading space so concatenation needs
/// no separator logic. Construction is deterministic: logit ties break by
/// lexicographic token order.
class BigramModel : public TokenModel {
public:
    /// `min_words` guards against corpora too small to produce usable
    /// statistics; tests that hand-count tiny corpora lower it.
    static BigramModel from_corpus(std::string_view corpus, std::size_t min_words = 1000);

    TokenCandidates top_k(const ModelQuery& query) const override;

    std::size_t vocabulary_size() const noexcept { return unigram_.size(); }

private:
    struct Entry {
        std::string word;
        std::size_t count;
    };
    // per-context successor lists and the unigram fallback, both sorted by
    // (count desc, word asc) once at build time
    std::map<std::string, std::vector<Entry>> successors_;
    std::vector<Entry> unigram_;
};

/// Samples one candidate according to its probability.
const Candidate& sample_token(const TokenCandidates& candidates, std::mt19937_64& rng);

/// Unconstrained story generation: appends sampled tokens until the story
/// holds at least `min_scalars` Unicode scalar values.
std::string sample_story(const TokenModel& model, std::string_view topic,
                         std::size_t min_scalars, double temperature, std::size_t k,
                         std::mt19937_64& rng, std::string_view story0 = {});

} // namespace covertchat
