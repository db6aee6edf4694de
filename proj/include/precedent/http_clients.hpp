// SPDX-License-Identifier: Apache-2.0
// Copyright 2025 Precedent Contributors
//
// Network-backed Embedder and CompletionClient. Only constructed when the
// configuration names an endpoint.
//
//   embedder:   POST {"texts": [..]}   ->  {"vectors": [[..], ..]}
//   completion: POST {"prompt": ".."}  ->  {"text": ".."}

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "precedent/error.hpp"
#include "precedent/pipeline.hpp"
#include "precedent/vector_index.hpp"

namespace precedent {

struct Endpoint {
    std::string base;  // scheme://host[:port]
    std::string path;  // starts with '/'
};

inline Endpoint split_endpoint(const std::string& url) {
    const auto scheme = url.find("://");
    if (scheme == std::string::npos) {
        throw Error(Errc::InvalidConfig, "endpoint '" + url + "' lacks a scheme", "endpoint");
    }
    const auto slash = url.find('/', scheme + 3);
    if (slash == std::string::npos) return {url, "/"};
    return {url.substr(0, slash), url.substr(slash)};
}

inline std::string encode_embed_request(const std::vector<std::string>& texts) {
    return nlohmann::json{{"texts", texts}}.dump();
}

inline std::vector<EmbeddingVector> decode_embed_response(const std::string& body, std::size_t expected,
                                                          std::size_t dimension) {
    std::vector<EmbeddingVector> out;
    try {
        const auto j = nlohmann::json::parse(body);
        const auto& vectors = j.at("vectors");
        if (!vectors.is_array() || vectors.size() != expected) {
            throw Error(Errc::Upstream, "embedder returned " + std::to_string(vectors.size()) +
                                            " vectors, expected " + std::to_string(expected));
        }
        for (const auto& v : vectors) {
            auto values = v.get<std::vector<double>>();
            if (values.size() != dimension) {
                throw Error(Errc::DimensionMismatch, "embedder returned dimension " +
                                                         std::to_string(values.size()) + ", expected " +
                                                         std::to_string(dimension));
            }
            out.emplace_back(std::move(values));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::Upstream, std::string("malformed embedder response: ") + e.what());
    }
    return out;
}

class HttpEmbedder final : public Embedder {
public:
    HttpEmbedder(std::string url, std::size_t dimension, std::size_t batch_size = 64)
        : url_(std::move(url)), endpoint_(split_endpoint(url_)), dimension_(dimension), batch_(batch_size) {}

    [[nodiscard]] std::size_t dimension() const override { return dimension_; }
    [[nodiscard]] std::string tag() const override { return "http:" + url_ + ":" + std::to_string(dimension_); }

    [[nodiscard]] EmbeddingVector embed(std::string_view text) const override {
        return embed_batch({std::string(text)}).front();
    }

    [[nodiscard]] std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) const override {
        std::vector<EmbeddingVector> out;
        out.reserve(texts.size());
        httplib::Client client(endpoint_.base);
        client.set_read_timeout(60, 0);
        for (std::size_t i = 0; i < texts.size(); i += batch_) {
            std::vector<std::string> part(texts.begin() + static_cast<std::ptrdiff_t>(i),
                                          texts.begin() + static_cast<std::ptrdiff_t>(std::min(texts.size(), i + batch_)));
            auto res = client.Post(endpoint_.path, encode_embed_request(part), "application/json");
            if (!res) throw Error(Errc::Upstream, "embedder at " + url_ + " unreachable");
            if (res->status != 200) {
                throw Error(Errc::Upstream, "embedder returned HTTP " + std::to_string(res->status));
            }
            for (auto& v : decode_embed_response(res->body, part.size(), dimension_)) out.push_back(std::move(v));
        }
        return out;
    }

private:
    std::string url_;
    Endpoint endpoint_;
    std::size_t dimension_;
    std::size_t batch_;
};

class HttpCompletionClient final : public CompletionClient {
public:
    explicit HttpCompletionClient(std::string url) : url_(std::move(url)), endpoint_(split_endpoint(url_)) {}

    [[nodiscard]] std::string endpoint() const override { return url_; }

    [[nodiscard]] std::string complete(const std::string& prompt) const override {
        httplib::Client client(endpoint_.base);
        client.set_read_timeout(120, 0);
        auto res = client.Post(endpoint_.path, nlohmann::json{{"prompt", prompt}}.dump(), "application/json");
        if (!res) throw Error(Errc::Upstream, "completion endpoint " + url_ + " unreachable");
        if (res->status != 200) {
            throw Error(Errc::Upstream, "completion endpoint returned HTTP " + std::to_string(res->status));
        }
        try {
            return nlohmann::json::parse(res->body).at("text").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::Upstream, std::string("malformed completion response: ") + e.what());
        }
    }

private:
    std::string url_;
    Endpoint endpoint_;
};

}  // namespace precedent
