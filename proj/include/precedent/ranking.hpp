// SPDX-License-Identifier: Apache-2.0
// Copyright 2025 Precedent Contributors

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "precedent/error.hpp"
#include "precedent/graph_store.hpp"

namespace precedent {

enum class DanglingPolicy { uniform_redistribute };

struct PageRankConfig {
    double damping = 0.85;
    double tolerance = 1e-9;  // L-infinity distance between successive iterates
    int max_iterations = 200;
    DanglingPolicy dangling_policy = DanglingPolicy::uniform_redistribute;

    void validate() const {
        if (!(damping > 0.0 && damping < 1.0)) {
            throw Error(Errc::InvalidConfig, "damping must lie in (0, 1)", "damping");
        }
        if (!(tolerance > 0.0)) throw Error(Errc::InvalidConfig, "tolerance must be > 0", "tolerance");
        if (max_iterations < 1) {
            throw Error(Errc::InvalidConfig, "max_iterations must be >= 1", "max_iterations");
        }
    }
};

/// Directed edge between dense node indices. Repeated edges count with
/// multiplicity; self-loops are allowed.
using IndexEdge = std::pair<std::size_t, std::size_t>;

struct PageRankResult {
    std::vector<double> scores;
    int iterations = 0;
    bool converged = false;
    double last_delta = 0.0;  // L-infinity distance between the last two iterates
};

struct NoIterationObserver {
    void operator()(int /*iteration*/, std::span<const double> /*scores*/) const noexcept {}
};

/// Power iteration for the damped random walk with uniform teleportation:
///
///   x' = (1 - d)/n + d * (sum_{u->v} x_u / out(u) + dangling_mass / n)
///
/// Dangling nodes spread their mass uniformly, so every iterate is a
/// probability vector. `observer(iteration, scores)` sees each iterate.
/// When max_iterations is reached first the last iterate is returned with
/// converged = false.
template <typename Observer = NoIterationObserver>
PageRankResult pagerank(std::size_t node_count, std::span<const IndexEdge> edges,
                        const PageRankConfig& config = {}, Observer&& observer = {}) {
    config.validate();
    if (node_count == 0) throw Error(Errc::EmptyGraph, "pagerank needs at least one node");

    const double n = static_cast<double>(node_count);
    std::vector<double> out_weight(node_count, 0.0);
    // Incoming adjacency in CSR form.
    std::vector<std::size_t> offsets(node_count + 1, 0);
    for (const auto& [u, v] : edges) {
        if (u >= node_count || v >= node_count) {
            throw Error(Errc::DanglingReference, "edge references a node outside the graph");
        }
        out_weight[u] += 1.0;
        ++offsets[v + 1];
    }
    for (std::size_t i = 0; i < node_count; ++i) offsets[i + 1] += offsets[i];
    std::vector<std::size_t> sources(edges.size());
    {
        auto fill = offsets;
        for (const auto& [u, v] : edges) sources[fill[v]++] = u;
    }

    PageRankResult r;
    std::vector<double> x(node_count, 1.0 / n);
    std::vector<double> next(node_count);
    std::vector<double> share(node_count);
    const double teleport = (1.0 - config.damping) / n;

    for (int it = 1; it <= config.max_iterations; ++it) {
        double dangling = 0.0;
        for (std::size_t u = 0; u < node_count; ++u) {
            if (out_weight[u] == 0.0) {
                dangling += x[u];
                share[u] = 0.0;
            } else {
                share[u] = x[u] / out_weight[u];
            }
        }
        const double base = teleport + config.damping * dangling / n;
        double delta = 0.0;
        for (std::size_t v = 0; v < node_count; ++v) {
            double in = 0.0;
            for (std::size_t k = offsets[v]; k < offsets[v + 1]; ++k) in += share[sources[k]];
            next[v] = base + config.damping * in;
            delta = std::max(delta, std::abs(next[v] - x[v]));
        }
        x.swap(next);
        observer(it, std::span<const double>(x));
        r.iterations = it;
        r.last_delta = delta;
        if (delta <= config.tolerance) {
            r.converged = true;
            break;
        }
    }
    r.scores = std::move(x);
    return r;
}

using ScoreMap = std::map<std::string, double>;

struct RankRun {
    ScoreMap scores;
    int iterations = 0;
    bool converged = false;
    double last_delta = 0.0;
};

/// PageRank keyed by string ids. Edges must reference ids in `nodes`.
inline RankRun pagerank(const std::vector<std::string>& nodes,
                        const std::vector<std::pair<std::string, std::string>>& edges,
                        const PageRankConfig& config = {}) {
    if (nodes.empty()) throw Error(Errc::EmptyGraph, "pagerank needs at least one node");
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!index.emplace(nodes[i], i).second) {
            throw Error(Errc::DuplicateId, "node '" + nodes[i] + "' listed twice");
        }
    }
    std::vector<IndexEdge> dense;
    dense.reserve(edges.size());
    for (const auto& [u, v] : edges) {
        auto a = index.find(u);
        auto b = index.find(v);
        if (a == index.end() || b == index.end()) {
            throw Error(Errc::DanglingReference, "edge " + u + " -> " + v + " references unknown node");
        }
        dense.emplace_back(a->second, b->second);
    }
    auto raw = pagerank(nodes.size(), std::span<const IndexEdge>(dense), config);
    RankRun run{{}, raw.iterations, raw.converged, raw.last_delta};
    for (std::size_t i = 0; i < nodes.size(); ++i) run.scores.emplace(nodes[i], raw.scores[i]);
    return run;
}

/// Citation authority: PageRank over CITED edges oriented citing -> cited,
/// so authority accumulates at frequently cited cases.
inline RankRun citation_authority(const KnowledgeGraph& g, const PageRankConfig& config = {}) {
    std::vector<std::string> nodes;
    for (const auto& [id, _] : g.cases()) nodes.push_back(id);
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& e : g.citations()) edges.emplace_back(e.from_case, e.to_case);
    return pagerank(nodes, edges, config);
}

/// Court rank: PageRank over APPEALS_TO edges oriented lower -> higher, so
/// rank accumulates at apex courts.
inline RankRun court_hierarchy_rank(const KnowledgeGraph& g, const PageRankConfig& config = {}) {
    std::vector<std::string> nodes;
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& [id, court] : g.courts()) {
        nodes.push_back(id);
        if (court.appeals_to) edges.emplace_back(id, *court.appeals_to);
    }
    return pagerank(nodes, edges, config);
}

/// Affine map of min -> 0 and max -> 1. A constant map becomes all 0.5 so the
/// component stays neutral in a weighted sum.
inline ScoreMap min_max_scale(const ScoreMap& scores) {
    if (scores.empty()) throw Error(Errc::EmptyInput, "min_max_scale needs at least one score");
    auto [lo_it, hi_it] = std::minmax_element(
        scores.begin(), scores.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
    const double lo = lo_it->second;
    const double hi = hi_it->second;
    ScoreMap out;
    for (const auto& [id, v] : scores) {
        out.emplace_hint(out.end(), id, hi == lo ? 0.5 : (v - lo) / (hi - lo));
    }
    return out;
}

struct AuthorityScores {
    ScoreMap citation_rank;    // raw PageRank per case
    ScoreMap court_rank;       // raw PageRank per court
    ScoreMap citation_scaled;  // corpus-wide min-max of citation_rank
    ScoreMap court_scaled;     // corpus-wide min-max of court_rank
    int citation_iterations = 0;
    int court_iterations = 0;
    bool citation_converged = false;
    bool court_converged = false;

    [[nodiscard]] int iterations_used() const noexcept {
        return std::max(citation_iterations, court_iterations);
    }
    [[nodiscard]] bool converged() const noexcept { return citation_converged && court_converged; }

    [[nodiscard]] double citation_of(const CaseId& id) const { return lookup(citation_scaled, id); }
    [[nodiscard]] double court_of(const CourtId& id) const { return lookup(court_scaled, id); }

private:
    static double lookup(const ScoreMap& m, const std::string& id) {
        auto it = m.find(id);
        if (it == m.end()) throw Error(Errc::UnknownCase, "no authority score for '" + id + "'");
        return it->second;
    }
};

/// Citation and court PageRank for a graph, raw and scaled over the corpus.
/// Throws EmptyGraph when the graph has no cases or no courts.
inline AuthorityScores compute_authority(const KnowledgeGraph& g, const PageRankConfig& config = {}) {
    if (g.cases().empty()) throw Error(Errc::EmptyGraph, "graph has no cases");
    AuthorityScores s;
    auto cit = citation_authority(g, config);
    auto court = court_hierarchy_rank(g, config);
    s.citation_scaled = min_max_scale(cit.scores);
    s.court_scaled = min_max_scale(court.scores);
    s.citation_rank = std::move(cit.scores);
    s.court_rank = std::move(court.scores);
    s.citation_iterations = cit.iterations;
    s.court_iterations = court.iterations;
    s.citation_converged = cit.converged;
    s.court_converged = court.converged;
    return s;
}

struct HistogramBin {
    int tier = 0;         // APPEALS_TO hops from the court to its apex; 0 = apex
    double bucket = 0.0;  // lower edge of the log10(raw score) bucket
    std::size_t count = 0;

    bool operator==(const HistogramBin&) const = default;
};

/// Counts cases per (court tier, log10 score bucket). Buckets have width
/// `bucket_width` in log10 units; output is sorted by tier then bucket.
inline std::vector<HistogramBin> influence_distribution(const KnowledgeGraph& g,
                                                        const ScoreMap& case_scores,
                                                        double bucket_width = 0.25) {
    if (!(bucket_width > 0.0)) {
        throw Error(Errc::InvalidArgument, "bucket_width must be > 0", "bucket_width");
    }
    std::map<std::pair<int, long long>, std::size_t> counts;
    for (const auto& [id, score] : case_scores) {
        if (!(score > 0.0)) continue;
        const int tier = g.appeal_depth(g.case_at(id).court_id);
        const auto bucket = static_cast<long long>(std::floor(std::log10(score) / bucket_width));
        ++counts[{tier, bucket}];
    }
    std::vector<HistogramBin> out;
    out.reserve(counts.size());
    for (const auto& [key, n] : counts) {
        out.push_back({key.first, static_cast<double>(key.second) * bucket_width, n});
    }
    return out;
}

/// One record per id: {"id", "raw", "scaled"} plus a "kind" tag.
inline void write_scores(std::ostream& out, const ScoreMap& raw, const ScoreMap& scaled,
                         const std::string& kind) {
    for (const auto& [id, r] : raw) {
        nlohmann::json j{{"kind", kind}, {"id", id}, {"raw", r}, {"scaled", scaled.at(id)}};
        out << j.dump() << '\n';
    }
}

inline void write_histogram(std::ostream& out, const std::vector<HistogramBin>& bins) {
    for (const auto& b : bins) {
        nlohmann::json j{{"tier", b.tier}, {"bucket", b.bucket}, {"count", b.count}};
        out << j.dump() << '\n';
    }
}

}  // namespace precedent
