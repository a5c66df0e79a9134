#include "covertchat/remote_model.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>

#include <httplib.h>
#include <json.hpp>

#include "covertchat/errors.hpp"

namespace covertchat {

using nlohmann::json;

struct RemoteModel::Impl {
    Options options;
    std::string host;
    std::string path;
    mutable std::mutex request_mutex;

    Impl(Options opts) : options(std::move(opts)) {
        // split scheme://host[:port] from the path
        std::string url = options.endpoint;
        std::size_t scheme = url.find("://");
        std::size_t path_start =
            url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
        if (path_start == std::string::npos) {
            host = url;
            path = "/v1/completions";
        } else {
            host = url.substr(0, path_start);
            path = url.substr(path_start);
        }
    }
};

RemoteModel::RemoteModel(Options options)
    : impl_(std::make_unique<Impl>(std::move(options))) {}

RemoteModel::~RemoteModel() = default;

TokenCandidates RemoteModel::top_k(const ModelQuery& query) const {
    if (!(query.temperature > 0.0) || query.k < 1) {
        throw Error("invalid model query");
    }
    json request = {
        {"prompt", query.topic + "\n\n" + query.story},
        {"max_tokens", 1},
        {"temperature", query.temperature},
        {"logprobs", query.k},
    };
    if (!impl_->options.model_name.empty()) {
        request["model"] = impl_->options.model_name;
    }

    httplib::Result result = [&] {
        std::lock_guard lock(impl_->request_mutex);
        httplib::Client client(impl_->host);
        client.set_connection_timeout(impl_->options.timeout_seconds);
        client.set_read_timeout(impl_->options.timeout_seconds);
        httplib::Headers headers;
        if (!impl_->options.api_key.empty()) {
            headers.emplace("Authorization", "Bearer " + impl_->options.api_key);
        }
        return client.Post(impl_->path, headers, request.dump(), "application/json");
    }();

    if (!result) {
        throw ModelUnavailableError("cannot reach completions endpoint " +
                                    impl_->options.endpoint);
    }
    if (result->status < 200 || result->status >= 300) {
        throw ModelUnavailableError("completions endpoint answered HTTP " +
                                    std::to_string(result->status));
    }

    json response;
    try {
        response = json::parse(result->body);
    } catch (const json::exception& e) {
        throw ModelUnavailableError(std::string("malformed completions response: ") +
                                    e.what());
    }

    if (!response.contains("choices") || response["choices"].empty()) {
        throw UnsupportedModelError("completions response has no choices");
    }
    const json& choice = response["choices"][0];
    if (!choice.contains("logprobs") || choice["logprobs"].is_null() ||
        !choice["logprobs"].contains("top_logprobs") ||
        choice["logprobs"]["top_logprobs"].empty()) {
        throw UnsupportedModelError("endpoint does not expose top log-probabilities");
    }
    const json& top = choice["logprobs"]["top_logprobs"][0];
    if (!top.is_object() || top.empty()) {
        throw UnsupportedModelError("empty top_logprobs entry");
    }

    struct Raw {
        std::string text;
        double logprob;
    };
    std::vector<Raw> raw;
    raw.reserve(top.size());
    for (auto it = top.begin(); it != top.end(); ++it) {
        raw.push_back({it.key(), it.value().get<double>()});
    }
    std::sort(raw.begin(), raw.end(), [](const Raw& a, const Raw& b) {
        if (a.logprob != b.logprob) return a.logprob > b.logprob;
        return a.text < b.text;
    });
    if (raw.size() > query.k) raw.resize(query.k);
    if (raw.size() < query.k) {
        std::clog << "covertchat: endpoint returned " << raw.size()
                  << " logprobs, fewer than requested k=" << query.k << "\n";
    }

    // softmax over the returned logprobs; the endpoint already applied its
    // sampling configuration, nothing is rescaled here
    double max_lp = raw.front().logprob;
    double total = 0.0;
    for (const Raw& r : raw) total += std::exp(r.logprob - max_lp);
    TokenCandidates out;
    out.tokens.reserve(raw.size());
    for (const Raw& r : raw) {
        out.tokens.push_back({r.text, std::exp(r.logprob - max_lp) / total});
    }
    return out;
}

} // namespace covertchat
