#pragma once

#include <memory>
#include <string>

#include "covertchat/token_model.hpp"

namespace covertchat {

/// Adapter to an OpenAI-compatible completions endpoint that exposes top
/// log-probabilities. Each top_k turns into one request with max_tokens 1;
/// the returned logprobs become renormalized candidate probabilities. The
/// adapter samples nothing itself, so it behaves exactly like the offline
/// reference model under the embedding loop.
///
/// Requests on one instance are serialized; use one instance per
/// connection for parallelism.
class RemoteModel : public TokenModel {
public:
    struct Options {
        std::string endpoint;   // e.g. http://localhost:8000/v1/completions
        std::string api_key;    // optional bearer token
        std::string model_name; // optional "model" request field
        int timeout_seconds = 120;
    };

    explicit RemoteModel(Options options);
    ~RemoteModel() override;

    /// Throws ModelUnavailableError on transport/HTTP failures and
    /// UnsupportedModelError when the endpoint answers without logprobs.
    /// When the endpoint returns fewer alternatives than k, the candidate
    /// list is truncated with a warning.
    TokenCandidates top_k(const ModelQuery& query) const override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace covertchat
