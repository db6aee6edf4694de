// SPDX-License-Identifier: Apache-2.0
// Copyright 2025 Precedent Contributors
//
// Score fusion for retrieved cases:
//
//   fused = w_text * text_sim + w_cit * citation + w_court * court
//
// with each weight in [0, 1] summing to 1 and every component min-max scaled
// to [0, 1], followed by top-k selection and expansion with cited cases.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "precedent/error.hpp"
#include "precedent/graph_store.hpp"
#include "precedent/ranking.hpp"
#include "precedent/types.hpp"

namespace precedent {

inline constexpr double kWeightSumTolerance = 1e-9;

struct Weights {
    double w_text = 1.0 / 3.0;
    double w_cit = 1.0 / 3.0;
    double w_court = 1.0 / 3.0;

    static constexpr Weights text_only() noexcept { return {1.0, 0.0, 0.0}; }
    static constexpr Weights uniform() noexcept { return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}; }

    /// Throws InvalidWeights naming the offending field.
    void validate() const {
        auto check = [](double w, const char* name) {
            if (!(w >= 0.0 && w <= 1.0)) {
                throw Error(Errc::InvalidWeights,
                            std::string(name) + " = " + std::to_string(w) + " is outside [0, 1]",
                            name);
            }
        };
        check(w_text, "w_text");
        check(w_cit, "w_cit");
        check(w_court, "w_court");
        const double sum = w_text + w_cit + w_court;
        if (std::abs(sum - 1.0) > kWeightSumTolerance) {
            throw Error(Errc::InvalidWeights,
                        "w_text + w_cit + w_court = " + std::to_string(sum) + ", must equal 1",
                        "weights");
        }
    }

    bool operator==(const Weights&) const = default;
};

/// The one place the fused score is evaluated.
constexpr double fused_score(const Weights& w, double text_sim, double citation, double court) noexcept {
    return w.w_text * text_sim + w.w_cit * citation + w.w_court * court;
}

struct CandidateScore {
    CaseId case_id;
    OpinionId opinion_id;
    double text_sim = 0.0;  // scaled over the candidate pool
    double citation = 0.0;  // scaled over the corpus
    double court = 0.0;     // scaled over the corpus
    double fused = 0.0;
    ChunkId best_chunk;

    bool operator==(const CandidateScore&) const = default;
};

/// Descending fused score, then higher citation, then ascending case id.
inline bool fused_before(const CandidateScore& a, const CandidateScore& b) noexcept {
    if (a.fused != b.fused) return a.fused > b.fused;
    if (a.citation != b.citation) return a.citation > b.citation;
    return a.case_id < b.case_id;
}

/// A chunk-level similarity attributed to its owning case and opinion.
struct ChunkMatch {
    ChunkId chunk_id;
    CaseId case_id;
    OpinionId opinion_id;
    double similarity = 0.0;
};

struct TextMatch {
    double score = 0.0;
    ChunkId witness;
    OpinionId opinion_id;

    bool operator==(const TextMatch&) const = default;
};

/// Per case: the maximum chunk similarity and the chunk attaining it (lowest
/// chunk id among equal maxima).
inline std::map<CaseId, TextMatch> aggregate_text_sim(std::span<const ChunkMatch> hits) {
    std::map<CaseId, TextMatch> out;
    for (const auto& h : hits) {
        auto [it, inserted] = out.try_emplace(h.case_id, TextMatch{h.similarity, h.chunk_id, h.opinion_id});
        if (inserted) continue;
        auto& cur = it->second;
        if (h.similarity > cur.score || (h.similarity == cur.score && h.chunk_id < cur.witness)) {
            cur = {h.similarity, h.chunk_id, h.opinion_id};
        }
    }
    return out;
}

/// Computes `fused` for every candidate and sorts by fused_before.
inline std::vector<CandidateScore> fuse(std::vector<CandidateScore> candidates, const Weights& weights) {
    weights.validate();
    for (auto& c : candidates) {
        for (double v : {c.text_sim, c.citation, c.court}) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw Error(Errc::InvalidArgument,
                            "candidate '" + c.case_id + "' has a component outside [0, 1]");
            }
        }
        c.fused = fused_score(weights, c.text_sim, c.citation, c.court);
    }
    std::sort(candidates.begin(), candidates.end(), fused_before);
    return candidates;
}

inline std::vector<CandidateScore> select_top_k(std::vector<CandidateScore> scored, std::size_t k) {
    if (k < 1) throw Error(Errc::InvalidArgument, "k must be >= 1", "k");
    std::sort(scored.begin(), scored.end(), fused_before);
    if (scored.size() > k) scored.resize(k);
    return scored;
}

struct Expansion {
    CaseId source_case;
    CaseId cited_case;
    int rank = 0;  // 1-based
    double score = 0.0;

    bool operator==(const Expansion&) const = default;
};

struct RetrievalSelection {
    std::vector<CandidateScore> top_k;
    std::vector<Expansion> expansions;
    std::size_t k = 0;
    std::size_t n = 0;
};

/// Cases cited by members of `top_k` that are not themselves in `top_k`,
/// ranked by the citation and court components with (w_cit, w_court)
/// renormalised to sum to 1 (equal halves when both are zero), truncated to
/// `n`. The source of an expansion is the highest-ranked top-k case citing it.
inline std::vector<Expansion> expand_citations(const std::vector<CandidateScore>& top_k,
                                               const KnowledgeGraph& g, const AuthorityScores& scores,
                                               const Weights& weights, std::size_t n) {
    std::vector<Expansion> out;
    if (n == 0) return out;
    const double total = weights.w_cit + weights.w_court;
    const double a = total > 0.0 ? weights.w_cit / total : 0.5;
    const double b = total > 0.0 ? weights.w_court / total : 0.5;

    std::set<CaseId> selected;
    for (const auto& c : top_k) selected.insert(c.case_id);

    struct Pending {
        Expansion e;
        double citation;
    };
    std::map<CaseId, Pending> pool;
    for (const auto& c : top_k) {
        for (const auto& cited : g.cited_cases(c.case_id)) {
            if (selected.contains(cited) || pool.contains(cited)) continue;
            const double cit = scores.citation_of(cited);
            const double court = scores.court_of(g.case_at(cited).court_id);
            pool.emplace(cited, Pending{{c.case_id, cited, 0, a * cit + b * court}, cit});
        }
    }
    std::vector<Pending> ranked;
    ranked.reserve(pool.size());
    for (auto& [_, p] : pool) ranked.push_back(std::move(p));
    std::sort(ranked.begin(), ranked.end(), [](const Pending& x, const Pending& y) {
        if (x.e.score != y.e.score) return x.e.score > y.e.score;
        if (x.citation != y.citation) return x.citation > y.citation;
        return x.e.cited_case < y.e.cited_case;
    });
    if (ranked.size() > n) ranked.resize(n);
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        ranked[i].e.rank = static_cast<int>(i + 1);
        out.push_back(std::move(ranked[i].e));
    }
    return out;
}

}  // namespace precedent
