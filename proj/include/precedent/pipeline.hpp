// SPDX-License-Identifier: Apache-2.0
// Copyright 2025 Precedent Contributors
//
// End-to-end retrieval: optional factor analysis of the dispute, chunk search,
// score fusion, top-k selection and citation expansion, plus the JSON shapes
// used by the HTTP service and the CLI.

#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "precedent/error.hpp"
#include "precedent/graph_store.hpp"
#include "precedent/prompts.hpp"
#include "precedent/ranking.hpp"
#include "precedent/reranker.hpp"
#include "precedent/vector_index.hpp"

namespace precedent {

// ---------------------------------------------------------------------------
// Corpus: frozen graph + index + authority scores
// ---------------------------------------------------------------------------

struct ChunkOwner {
    CaseId case_id;
    OpinionId opinion_id;
};

struct CorpusOptions {
    PageRankConfig pagerank;
    int max_chunk_tokens = kDefaultChunkTokens;
};

/// Immutable bundle served to queries. Share it as shared_ptr<const Corpus>.
class Corpus {
public:
    Corpus(KnowledgeGraph graph, VectorIndex index, AuthorityScores scores,
           std::shared_ptr<const Embedder> embedder)
        : graph_(std::move(graph)),
          index_(std::move(index)),
          scores_(std::move(scores)),
          embedder_(std::move(embedder)) {
        if (!embedder_) throw Error(Errc::InvalidConfig, "corpus needs an embedder", "embedder");
        if (index_.dimension() != embedder_->dimension()) {
            throw Error(Errc::DimensionMismatch, "index dimension differs from embedder dimension");
        }
        graph_.freeze();
        index_.freeze();
        owners_.reserve(index_.size());
        for (const auto& c : index_.chunks()) {
            const auto& p = graph_.passage_at(c.passage_id);
            owners_.push_back({graph_.opinion_at(p.opinion_id).case_id, p.opinion_id});
        }
    }

    /// Chunks and embeds every passage and computes authority scores.
    static Corpus build(KnowledgeGraph graph, std::shared_ptr<const Embedder> embedder,
                        const CorpusOptions& options = {}) {
        if (!embedder) throw Error(Errc::InvalidConfig, "corpus needs an embedder", "embedder");
        graph.freeze();
        auto scores = compute_authority(graph, options.pagerank);
        auto built = build_index(graph, *embedder, options.max_chunk_tokens);
        return Corpus(std::move(graph), std::move(built.index), std::move(scores), std::move(embedder));
    }

    [[nodiscard]] const KnowledgeGraph& graph() const noexcept { return graph_; }
    [[nodiscard]] const VectorIndex& index() const noexcept { return index_; }
    [[nodiscard]] const AuthorityScores& scores() const noexcept { return scores_; }
    [[nodiscard]] const Embedder& embedder() const noexcept { return *embedder_; }
    [[nodiscard]] const ChunkOwner& owner(std::size_t slot) const { return owners_.at(slot); }

private:
    KnowledgeGraph graph_;
    VectorIndex index_;
    AuthorityScores scores_;
    std::shared_ptr<const Embedder> embedder_;
    std::vector<ChunkOwner> owners_;
};

// ---------------------------------------------------------------------------
// Factor analysis
// ---------------------------------------------------------------------------

struct FactorAnalysis {
    std::map<Factor, std::string> sub_queries;  // Purpose, Nature, Amount, Market
    std::string rationale;

    bool operator==(const FactorAnalysis&) const = default;
};

class CompletionClient {
public:
    virtual ~CompletionClient() = default;
    [[nodiscard]] virtual std::string complete(const std::string& prompt) const = 0;
    [[nodiscard]] virtual std::string endpoint() const = 0;
};

class FactorAnalyzer {
public:
    virtual ~FactorAnalyzer() = default;
    [[nodiscard]] virtual FactorAnalysis analyze(std::string_view text) const = 0;
};

/// Keyword template appended to the dispute text for each factor sub-query.
inline std::string_view factor_query_template(Factor f) noexcept {
    switch (f) {
    case Factor::Purpose:
        return "purpose and character of the use commercial nonprofit transformative parody "
               "criticism commentary news reporting teaching research";
    case Factor::Nature:
        return "nature of the copyrighted work creative expressive factual published unpublished";
    case Factor::Amount:
        return "amount and substantiality of the portion used heart of the work verbatim "
               "copying entire work excerpt";
    case Factor::Market:
        return "effect of the use upon the potential market value licensing market substitute "
               "market harm";
    default:
        return "";
    }
}

/// Deterministic analyzer: each sub-query is the dispute text followed by the
/// factor's keyword template.
class TemplateFactorAnalyzer final : public FactorAnalyzer {
public:
    [[nodiscard]] FactorAnalysis analyze(std::string_view text) const override {
        FactorAnalysis a;
        for (Factor f : kStatutoryFactors) {
            a.sub_queries[f] = std::string(text) + " " + std::string(factor_query_template(f));
        }
        a.rationale = "keyword templates per statutory factor";
        return a;
    }
};

/// Delegates to a completion model and parses its JSON answer.
class CompletionFactorAnalyzer final : public FactorAnalyzer {
public:
    explicit CompletionFactorAnalyzer(std::shared_ptr<const CompletionClient> client)
        : client_(std::move(client)) {}

    [[nodiscard]] FactorAnalysis analyze(std::string_view text) const override {
        if (!client_ || client_->endpoint().empty()) {
            throw Error(Errc::AnalyzerUnavailable, "no completion endpoint configured", "completion");
        }
        const auto reply = client_->complete(build_factor_analysis_prompt(text));
        nlohmann::json j;
        try {
            const auto open = reply.find('{');
            const auto close = reply.rfind('}');
            if (open == std::string::npos || close == std::string::npos || close < open) {
                throw Error(Errc::Upstream, "completion reply holds no JSON object");
            }
            j = nlohmann::json::parse(reply.substr(open, close - open + 1));
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::Upstream, std::string("completion reply is not JSON: ") + e.what());
        }
        FactorAnalysis a;
        for (Factor f : kStatutoryFactors) {
            auto it = j.find(std::string(to_string(f)));
            if (it == j.end() || !it->is_string() || it->get<std::string>().empty()) {
                throw Error(Errc::Upstream,
                            "completion reply lacks a sub-query for " + std::string(to_string(f)));
            }
            a.sub_queries[f] = it->get<std::string>();
        }
        a.rationale = j.value("rationale", std::string{});
        return a;
    }

private:
    std::shared_ptr<const CompletionClient> client_;
};

inline FactorAnalysis analyze_factors(std::string_view text, const FactorAnalyzer& analyzer) {
    if (text.empty()) throw Error(Errc::EmptyInput, "dispute text is empty", "text");
    auto a = analyzer.analyze(text);
    for (Factor f : kStatutoryFactors) {
        auto it = a.sub_queries.find(f);
        if (it == a.sub_queries.end() || it->second.empty()) {
            throw Error(Errc::Upstream, "factor analysis lacks " + std::string(to_string(f)));
        }
    }
    return a;
}

// ---------------------------------------------------------------------------
// Requests and responses
// ---------------------------------------------------------------------------

enum class FactorMode { whole_query, per_factor };

constexpr std::string_view to_string(FactorMode m) noexcept {
    return m == FactorMode::whole_query ? "whole_query" : "per_factor";
}

inline FactorMode parse_factor_mode(std::string_view s) {
    if (s == "whole_query") return FactorMode::whole_query;
    if (s == "per_factor") return FactorMode::per_factor;
    throw Error(Errc::InvalidArgument, "factor_mode must be whole_query or per_factor", "factor_mode");
}

inline constexpr std::size_t kDefaultCandidatePool = 200;

struct QueryRequest {
    std::string text;
    Weights weights = Weights::uniform();
    int k = 5;
    int n = 3;
    FactorMode factor_mode = FactorMode::whole_query;
    std::optional<Factor> factor_filter;
    std::size_t candidate_pool = kDefaultCandidatePool;  // top-M chunk hits per search
    bool include_prompts = false;

    void validate() const {
        if (text.empty()) throw Error(Errc::InvalidArgument, "text must be non-empty", "text");
        weights.validate();
        if (k < 1) throw Error(Errc::InvalidArgument, "k must be >= 1", "k");
        if (n < 0) throw Error(Errc::InvalidArgument, "n must be >= 0", "n");
        if (candidate_pool < 1) {
            throw Error(Errc::InvalidArgument, "candidate_pool must be >= 1", "candidate_pool");
        }
    }
};

struct ResultEntry {
    CandidateScore score;
    double raw_cosine = 0.0;
    std::string case_name;
    int year = 0;
    CourtId court_id;
    std::map<Factor, std::vector<std::string>> passages;  // of the witnessing opinion
};

struct ExpansionEntry {
    Expansion expansion;
    std::string case_name;
    double citation = 0.0;
    double court = 0.0;
};

struct QueryResponse {
    Weights weights;
    std::size_t k = 0;
    std::size_t n = 0;
    FactorMode factor_mode = FactorMode::whole_query;
    std::size_t candidate_count = 0;
    std::vector<ResultEntry> results;
    std::vector<ExpansionEntry> expansions;
    std::optional<FactorAnalysis> analysis;
    std::vector<std::string> prompts;
    std::map<std::string, double> timing_ms;

    [[nodiscard]] RetrievalSelection selection() const {
        RetrievalSelection s{{}, {}, k, n};
        for (const auto& r : results) s.top_k.push_back(r.score);
        for (const auto& e : expansions) s.expansions.push_back(e.expansion);
        return s;
    }
};

namespace detail {

class StageTimer {
public:
    explicit StageTimer(std::map<std::string, double>& sink) : sink_(sink) {}
    void lap(const std::string& stage) {
        const auto now = std::chrono::steady_clock::now();
        sink_[stage] = std::chrono::duration<double, std::milli>(now - last_).count();
        last_ = now;
    }

private:
    std::map<std::string, double>& sink_;
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

inline std::map<Factor, std::vector<std::string>> passages_by_factor(const KnowledgeGraph& g,
                                                                     const OpinionId& opinion) {
    std::map<Factor, std::vector<std::string>> out;
    for (const auto& pid : g.passages_of(opinion)) {
        const auto& p = g.passage_at(pid);
        out[p.factor].push_back(p.text);
    }
    return out;
}

}  // namespace detail

/// Runs one query against a frozen corpus.
///
/// whole_query embeds the dispute once and searches (optionally restricted to
/// factor_filter). per_factor searches each factor sub-query against chunks of
/// that factor only (or just the filtered factor, when one is given) and keeps
/// each case's best similarity across sub-queries. The candidate pool is every
/// case owning a chunk among the top-M hits of any search; its text similarity
/// is min-max scaled over the pool before fusion.
inline QueryResponse retrieve(const QueryRequest& request, const Corpus& corpus,
                              const FactorAnalyzer& analyzer) {
    request.validate();
    if (corpus.index().empty() || corpus.graph().cases().empty()) {
        throw Error(Errc::EmptyCorpus, "corpus has no indexed passages");
    }
    QueryResponse resp;
    resp.weights = request.weights;
    resp.k = static_cast<std::size_t>(request.k);
    resp.n = static_cast<std::size_t>(request.n);
    resp.factor_mode = request.factor_mode;
    detail::StageTimer timer(resp.timing_ms);

    std::vector<std::pair<std::string, std::optional<Factor>>> searches;
    if (request.factor_mode == FactorMode::whole_query) {
        searches.emplace_back(request.text, request.factor_filter);
    } else {
        resp.analysis = analyze_factors(request.text, analyzer);
        for (const auto& [f, q] : resp.analysis->sub_queries) {
            if (request.factor_filter && *request.factor_filter != f) continue;
            searches.emplace_back(q, f);
        }
        timer.lap("analyze");
    }

    std::vector<ChunkMatch> matches;
    for (const auto& [query, filter] : searches) {
        const auto qv = corpus.embedder().embed(query);
        for (const auto& hit : corpus.index().search(qv, request.candidate_pool, filter)) {
            const auto& owner = corpus.owner(hit.slot);
            matches.push_back({hit.chunk_id, owner.case_id, owner.opinion_id, hit.similarity});
        }
    }
    timer.lap("search");

    const auto pool = aggregate_text_sim(matches);
    resp.candidate_count = pool.size();
    std::vector<CandidateScore> candidates;
    if (!pool.empty()) {
        ScoreMap raw;
        for (const auto& [id, m] : pool) raw.emplace(id, m.score);
        const auto scaled = min_max_scale(raw);
        const auto& g = corpus.graph();
        const auto& scores = corpus.scores();
        for (const auto& [id, m] : pool) {
            candidates.push_back({id, m.opinion_id, scaled.at(id), scores.citation_of(id),
                                  scores.court_of(g.case_at(id).court_id), 0.0, m.witness});
        }
    }
    auto top = select_top_k(fuse(std::move(candidates), request.weights), resp.k);
    timer.lap("fuse");

    const auto& g = corpus.graph();
    for (const auto& c : top) {
        const auto& node = g.case_at(c.case_id);
        resp.results.push_back({c, pool.at(c.case_id).score, node.name, node.year, node.court_id,
                                detail::passages_by_factor(g, c.opinion_id)});
    }
    for (auto& e : expand_citations(top, g, corpus.scores(), request.weights, resp.n)) {
        const auto& node = g.case_at(e.cited_case);
        const double cit = corpus.scores().citation_of(e.cited_case);
        const double court = corpus.scores().court_of(node.court_id);
        resp.expansions.push_back({std::move(e), node.name, cit, court});
    }
    timer.lap("expand");

    if (request.include_prompts) {
        for (const auto& r : resp.results) {
            CasePassages cp{r.score.case_id, r.case_name, r.year, g.court_at(r.court_id).name,
                            r.passages};
            resp.prompts.push_back(build_case_analysis_prompt(request.text, cp));
        }
        timer.lap("prompts");
    }
    return resp;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const Weights& w) {
    return {{"w_text", w.w_text}, {"w_cit", w.w_cit}, {"w_court", w.w_court}};
}

inline nlohmann::json to_json(const std::map<Factor, std::vector<std::string>>& passages) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [f, texts] : passages) j[std::string(to_string(f))] = texts;
    return j;
}

inline nlohmann::json to_json(const QueryResponse& r) {
    using nlohmann::json;
    json results = json::array();
    for (std::size_t i = 0; i < r.results.size(); ++i) {
        const auto& e = r.results[i];
        results.push_back({{"rank", i + 1},
                           {"case_id", e.score.case_id},
                           {"opinion_id", e.score.opinion_id},
                           {"case_name", e.case_name},
                           {"year", e.year},
                           {"court_id", e.court_id},
                           {"best_chunk", e.score.best_chunk},
                           {"raw_cosine", e.raw_cosine},
                           {"breakdown",
                            {{"text_sim", e.score.text_sim},
                             {"citation", e.score.citation},
                             {"court", e.score.court},
                             {"fused", e.score.fused}}},
                           {"passages", to_json(e.passages)}});
    }
    json expansions = json::array();
    for (const auto& e : r.expansions) {
        expansions.push_back({{"rank", e.expansion.rank},
                              {"source_case", e.expansion.source_case},
                              {"cited_case", e.expansion.cited_case},
                              {"case_name", e.case_name},
                              {"score", e.expansion.score},
                              {"citation", e.citation},
                              {"court", e.court}});
    }
    json j{{"weights", to_json(r.weights)},
           {"k", r.k},
           {"n", r.n},
           {"factor_mode", std::string(to_string(r.factor_mode))},
           {"candidate_count", r.candidate_count},
           {"results", std::move(results)},
           {"expansions", std::move(expansions)},
           {"timing_ms", r.timing_ms}};
    if (r.analysis) {
        json sub = json::object();
        for (const auto& [f, q] : r.analysis->sub_queries) sub[std::string(to_string(f))] = q;
        j["analysis"] = {{"sub_queries", std::move(sub)}, {"rationale", r.analysis->rationale}};
    }
    if (!r.prompts.empty()) j["prompts"] = r.prompts;
    return j;
}

/// Builds a request from a JSON body. Missing fields take `defaults`.
/// Errors carry the offending field name.
inline QueryRequest parse_query_request(const nlohmann::json& j, const QueryRequest& defaults = {}) {
    if (!j.is_object()) throw Error(Errc::InvalidArgument, "request body must be a JSON object");
    QueryRequest r = defaults;
    auto typed = [&j](const char* name, auto check) -> const nlohmann::json* {
        auto it = j.find(name);
        if (it == j.end() || it->is_null()) return nullptr;
        if (!check(*it)) throw Error(Errc::InvalidArgument, std::string(name) + " has the wrong type", name);
        return &*it;
    };
    auto is_string = [](const nlohmann::json& v) { return v.is_string(); };
    auto is_int = [](const nlohmann::json& v) { return v.is_number_integer(); };
    auto is_bool = [](const nlohmann::json& v) { return v.is_boolean(); };
    auto is_object = [](const nlohmann::json& v) { return v.is_object(); };

    if (auto v = typed("text", is_string)) r.text = v->get<std::string>();
    if (auto v = typed("weights", is_object)) {
        for (auto [name, slot] : {std::pair{"w_text", &r.weights.w_text}, std::pair{"w_cit", &r.weights.w_cit},
                                  std::pair{"w_court", &r.weights.w_court}}) {
            auto it = v->find(name);
            if (it == v->end()) throw Error(Errc::InvalidWeights, std::string("missing ") + name, name);
            if (!it->is_number()) throw Error(Errc::InvalidWeights, std::string(name) + " must be a number", name);
            *slot = it->get<double>();
        }
    }
    if (auto v = typed("k", is_int)) r.k = v->get<int>();
    if (auto v = typed("n", is_int)) r.n = v->get<int>();
    if (auto v = typed("factor_mode", is_string)) r.factor_mode = parse_factor_mode(v->get<std::string>());
    if (auto it = j.find("factor_filter"); it != j.end()) {
        if (it->is_null()) {
            r.factor_filter.reset();
        } else if (it->is_string()) {
            r.factor_filter = parse_factor(it->get<std::string>());
        } else {
            throw Error(Errc::InvalidArgument, "factor_filter must be a factor name", "factor_filter");
        }
    }
    if (auto v = typed("candidate_pool", is_int)) {
        const auto m = v->get<long long>();
        if (m < 1) throw Error(Errc::InvalidArgument, "candidate_pool must be >= 1", "candidate_pool");
        r.candidate_pool = static_cast<std::size_t>(m);
    }
    if (auto v = typed("include_prompts", is_bool)) r.include_prompts = v->get<bool>();
    r.validate();
    return r;
}

inline nlohmann::json to_json(const QueryRequest& r) {
    nlohmann::json j{{"text", r.text},
                     {"weights", to_json(r.weights)},
                     {"k", r.k},
                     {"n", r.n},
                     {"factor_mode", std::string(to_string(r.factor_mode))},
                     {"factor_filter", nullptr},
                     {"candidate_pool", r.candidate_pool},
                     {"include_prompts", r.include_prompts}};
    if (r.factor_filter) j["factor_filter"] = std::string(to_string(*r.factor_filter));
    return j;
}

}  // namespace precedent
