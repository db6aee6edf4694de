// SPDX-License-Identifier: Apache-2.0
// Copyright 2025 Precedent Contributors
//
// Service configuration: one JSON file plus PRECEDENT_* environment overrides.
//
//   {
//     "corpus": "store.jsonl",
//     "embedder": "reference" | "http",
//     "embedder_endpoint": "http://host:port/embed",
//     "embedder_dimension": 1024,
//     "completion_endpoint": "http://host:port/complete",
//     "weights": {"w_text": .., "w_cit": .., "w_court": ..},
//     "k": 5, "n": 3,
//     "bind": "127.0.0.1:8080"
//   }

#pragma once

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <string>

#include "json.hpp"
#include "precedent/error.hpp"
#include "precedent/reranker.hpp"

namespace precedent {

struct ServiceConfig {
    std::string corpus_path;
    std::string embedder_mode = "reference";
    std::string embedder_endpoint;
    std::size_t embedder_dimension = 1024;
    std::string completion_endpoint;
    Weights default_weights = Weights::uniform();
    int default_k = 5;
    int default_n = 3;
    std::string bind = "127.0.0.1:8080";

    void validate() const {
        if (embedder_mode != "reference" && embedder_mode != "http") {
            throw Error(Errc::InvalidConfig, "embedder must be 'reference' or 'http'", "embedder");
        }
        if (embedder_mode == "http" && embedder_endpoint.empty()) {
            throw Error(Errc::InvalidConfig, "http embedder needs embedder_endpoint", "embedder_endpoint");
        }
        default_weights.validate();
        if (default_k < 1) throw Error(Errc::InvalidConfig, "k must be >= 1", "k");
        if (default_n < 0) throw Error(Errc::InvalidConfig, "n must be >= 0", "n");
    }
};

/// Parses "0.25", "1", or a fraction such as "1/3".
inline double parse_weight(const std::string& text, const char* field) {
    auto parse = [&](std::string_view s) {
        try {
            std::size_t used = 0;
            const double v = std::stod(std::string(s), &used);
            if (used != s.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw Error(Errc::InvalidWeights, "cannot parse weight '" + text + "'", field);
        }
    };
    if (auto slash = text.find('/'); slash != std::string::npos) {
        const double num = parse(std::string_view(text).substr(0, slash));
        const double den = parse(std::string_view(text).substr(slash + 1));
        if (den == 0.0) throw Error(Errc::InvalidWeights, "zero denominator in '" + text + "'", field);
        return num / den;
    }
    return parse(text);
}

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

inline std::optional<std::string> process_env(const std::string& name) {
    if (const char* v = std::getenv(name.c_str())) return std::string(v);
    return std::nullopt;
}

inline void apply_config_json(ServiceConfig& c, const nlohmann::json& j) {
    try {
        c.corpus_path = j.value("corpus", c.corpus_path);
        c.embedder_mode = j.value("embedder", c.embedder_mode);
        c.embedder_endpoint = j.value("embedder_endpoint", c.embedder_endpoint);
        c.embedder_dimension = j.value("embedder_dimension", c.embedder_dimension);
        c.completion_endpoint = j.value("completion_endpoint", c.completion_endpoint);
        if (auto it = j.find("weights"); it != j.end()) {
            c.default_weights = {it->at("w_text").get<double>(), it->at("w_cit").get<double>(),
                                 it->at("w_court").get<double>()};
        }
        c.default_k = j.value("k", c.default_k);
        c.default_n = j.value("n", c.default_n);
        c.bind = j.value("bind", c.bind);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::InvalidConfig, std::string("config: ") + e.what());
    }
}

/// Defaults, then the file (when given), then environment variables.
inline ServiceConfig load_config(const std::optional<std::string>& path, const EnvLookup& env = process_env) {
    ServiceConfig c;
    if (path) {
        std::ifstream in(*path);
        if (!in) throw Error(Errc::Io, "cannot read config '" + *path + "'");
        try {
            apply_config_json(c, nlohmann::json::parse(in));
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::InvalidConfig, "config '" + *path + "': " + e.what());
        }
    }
    auto as_int = [](const std::string& s, const char* field) {
        int v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size()) {
            throw Error(Errc::InvalidConfig, std::string(field) + " must be an integer", field);
        }
        return v;
    };
    if (auto v = env("PRECEDENT_CORPUS")) c.corpus_path = *v;
    if (auto v = env("PRECEDENT_EMBEDDER")) c.embedder_mode = *v;
    if (auto v = env("PRECEDENT_EMBEDDER_ENDPOINT")) c.embedder_endpoint = *v;
    if (auto v = env("PRECEDENT_EMBEDDER_DIMENSION")) {
        c.embedder_dimension = static_cast<std::size_t>(as_int(*v, "embedder_dimension"));
    }
    if (auto v = env("PRECEDENT_COMPLETION_ENDPOINT")) c.completion_endpoint = *v;
    if (auto v = env("PRECEDENT_W_TEXT")) c.default_weights.w_text = parse_weight(*v, "w_text");
    if (auto v = env("PRECEDENT_W_CIT")) c.default_weights.w_cit = parse_weight(*v, "w_cit");
    if (auto v = env("PRECEDENT_W_COURT")) c.default_weights.w_court = parse_weight(*v, "w_court");
    if (auto v = env("PRECEDENT_K")) c.default_k = as_int(*v, "k");
    if (auto v = env("PRECEDENT_N")) c.default_n = as_int(*v, "n");
    if (auto v = env("PRECEDENT_BIND")) c.bind = *v;
    c.validate();
    return c;
}

}  // namespace precedent
