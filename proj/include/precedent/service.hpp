// SPDX-License-Identifier: Apache-2.0
// Copyright 2025 Precedent Contributors
//
// JSON-over-HTTP surface:
//
//   POST /query            QueryRequest -> QueryResponse
//   GET  /cases/{id}       case, opinions, passages, citations
//   GET  /stats            corpus counts and ranking convergence
//   GET  /scores/{case_id} raw and scaled authority scores
//   GET  /health           200 once a corpus is loaded, 503 before
//
// Routing lives in Service::handle so it can be exercised without sockets;
// attach() binds it to an httplib::Server. The corpus pointer is swapped
// atomically under a mutex: a request sees either the old or the new corpus.

#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "httplib.h"
#include "json.hpp"
#include "precedent/config.hpp"
#include "precedent/pipeline.hpp"

namespace precedent {

struct HttpReply {
    int status = 200;
    std::string body;
};

inline int http_status_for(Errc code) noexcept {
    switch (code) {
    case Errc::InvalidWeights:
    case Errc::InvalidArgument:
    case Errc::InvalidFactorKind:
    case Errc::EmptyInput:
    case Errc::MalformedInput:
        return 400;
    case Errc::UnknownCase:
    case Errc::UnknownCourt:
        return 404;
    case Errc::EmptyCorpus:
    case Errc::AnalyzerUnavailable:
        return 503;
    case Errc::Upstream:
        return 502;
    default:
        return 500;
    }
}

inline HttpReply error_reply(int status, std::string_view code, const std::string& message,
                             const std::string& field = {}) {
    nlohmann::json j{{"error", code}, {"message", message}};
    if (!field.empty()) j["field"] = field;
    return {status, j.dump()};
}

inline HttpReply error_reply(const Error& e) {
    return error_reply(http_status_for(e.code()), to_string(e.code()), e.detail(), e.field());
}

class Service {
public:
    explicit Service(QueryRequest defaults = {},
                     std::shared_ptr<const FactorAnalyzer> analyzer = std::make_shared<TemplateFactorAnalyzer>())
        : defaults_(std::move(defaults)), analyzer_(std::move(analyzer)) {}

    void load(std::shared_ptr<const Corpus> corpus) {
        std::lock_guard lock(mutex_);
        corpus_ = std::move(corpus);
    }

    [[nodiscard]] std::shared_ptr<const Corpus> snapshot() const {
        std::lock_guard lock(mutex_);
        return corpus_;
    }

    [[nodiscard]] HttpReply handle(std::string_view method, std::string_view path, std::string_view body = {}) const {
        const auto corpus = snapshot();
        try {
            if (path == "/health") {
                if (method != "GET") return method_not_allowed();
                if (!corpus) return error_reply(503, "CorpusNotLoaded", "no corpus loaded");
                return {200, nlohmann::json{{"status", "ok"}, {"cases", corpus->graph().cases().size()}}.dump()};
            }
            const bool known = path == "/stats" || path == "/query" || path.starts_with("/cases/") ||
                               path.starts_with("/scores/");
            if (!known) return error_reply(404, "NotFound", "no route for " + std::string(path));
            if (!corpus) return error_reply(503, "CorpusNotLoaded", "no corpus loaded");

            if (path == "/query") {
                if (method != "POST") return method_not_allowed();
                nlohmann::json j;
                try {
                    j = nlohmann::json::parse(body);
                } catch (const nlohmann::json::exception& e) {
                    return error_reply(400, "MalformedInput", e.what(), "body");
                }
                const auto request = parse_query_request(j, defaults_);
                return {200, to_json(retrieve(request, *corpus, *analyzer_)).dump()};
            }
            if (method != "GET") return method_not_allowed();
            if (path == "/stats") return {200, stats_json(*corpus).dump()};
            if (path.starts_with("/cases/")) {
                return {200, case_json(*corpus, std::string(path.substr(7))).dump()};
            }
            return {200, scores_json(*corpus, std::string(path.substr(8))).dump()};
        } catch (const Error& e) {
            return error_reply(e);
        } catch (const std::exception& e) {
            return error_reply(500, "Internal", e.what());
        }
    }

    /// Registers every route on `server`; `this` must outlive it.
    void attach(httplib::Server& server) const {
        auto forward = [this](const httplib::Request& req, httplib::Response& res) {
            auto reply = handle(req.method, req.path, req.body);
            res.status = reply.status;
            res.set_content(reply.body, "application/json");
        };
        server.Get(R"(/.*)", forward);
        server.Post(R"(/.*)", forward);
    }

    static nlohmann::json stats_json(const Corpus& corpus) {
        const auto s = corpus.graph().stats();
        const auto& a = corpus.scores();
        return {{"case_count", s.case_count},
                {"opinion_count", s.opinion_count},
                {"court_count", s.court_count},
                {"passage_count", s.passage_count},
                {"citation_count", s.citation_count},
                {"chunk_count", corpus.index().size()},
                {"year_min", s.year_min ? nlohmann::json(*s.year_min) : nlohmann::json()},
                {"year_max", s.year_max ? nlohmann::json(*s.year_max) : nlohmann::json()},
                {"ranking",
                 {{"citation_iterations", a.citation_iterations},
                  {"court_iterations", a.court_iterations},
                  {"converged", a.converged()}}}};
    }

    static nlohmann::json case_json(const Corpus& corpus, const CaseId& id) {
        const auto& g = corpus.graph();
        const auto& c = g.case_at(id);
        nlohmann::json opinions = nlohmann::json::array();
        for (const auto& oid : g.opinions_of(id)) {
            const auto& o = g.opinion_at(oid);
            opinions.push_back({{"opinion_id", oid},
                                {"opinion_kind", std::string(to_string(o.opinion_kind))},
                                {"passages", to_json(detail::passages_by_factor(g, oid))}});
        }
        return {{"case_id", c.case_id},
                {"name", c.name},
                {"year", c.year},
                {"court_id", c.court_id},
                {"court_name", g.court_at(c.court_id).name},
                {"cites", c.cites},
                {"opinions", std::move(opinions)},
                {"cited_cases", g.cited_cases(id)},
                {"citing_cases", g.citing_cases(id)}};
    }

    static nlohmann::json scores_json(const Corpus& corpus, const CaseId& id) {
        const auto& c = corpus.graph().case_at(id);
        const auto& a = corpus.scores();
        return {{"case_id", id},
                {"citation_raw", a.citation_rank.at(id)},
                {"citation_scaled", a.citation_scaled.at(id)},
                {"court_id", c.court_id},
                {"court_raw", a.court_rank.at(c.court_id)},
                {"court_scaled", a.court_scaled.at(c.court_id)}};
    }

private:
    static HttpReply method_not_allowed() { return error_reply(405, "MethodNotAllowed", "method not allowed"); }

    QueryRequest defaults_;
    std::shared_ptr<const FactorAnalyzer> analyzer_;
    mutable std::mutex mutex_;
    std::shared_ptr<const Corpus> corpus_;
};

/// Request defaults taken from a service configuration.
inline QueryRequest request_defaults(const ServiceConfig& c) {
    QueryRequest r;
    r.weights = c.default_weights;
    r.k = c.default_k;
    r.n = c.default_n;
    return r;
}

}  // namespace precedent
