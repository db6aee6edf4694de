// SPDX-License-Identifier: Apache-2.0
// Copyright 2025 Precedent Contributors
//
// Shared test fixtures and independent oracles. The oracles deliberately
// avoid the library's own algorithms: PageRank is solved as a dense linear
// system, search is a full scan, fusion is recomputed field by field.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "precedent/precedent.hpp"

namespace fixtures {

using namespace precedent;

// ---------------------------------------------------------------------------
// Dense PageRank oracle
// ---------------------------------------------------------------------------

/// Solves (I - d(M + D/n)) x = (1 - d)/n * 1 by Gaussian elimination with
/// partial pivoting. M is column-stochastic over out-edges (with
/// multiplicity); D spreads each dangling node uniformly.
inline std::vector<double> pagerank_oracle(std::size_t n, const std::vector<IndexEdge>& edges,
                                           double d = 0.85) {
    std::vector<double> out(n, 0.0);
    for (const auto& [u, v] : edges) out[u] += 1.0;
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        a[i][i] = 1.0;
        a[i][n] = (1.0 - d) / static_cast<double>(n);
    }
    for (const auto& [u, v] : edges) a[v][u] -= d / out[u];
    for (std::size_t u = 0; u < n; ++u) {
        if (out[u] == 0.0) {
            for (std::size_t i = 0; i < n; ++i) a[i][u] -= d / static_cast<double>(n);
        }
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        }
        std::swap(a[col], a[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n] / a[i][i];
    return x;
}

/// Random directed graph without self-loops. Roughly a fifth of the nodes
/// are forced dangling and a few are left isolated.
inline std::vector<IndexEdge> random_digraph(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double p = 0.1 + 0.3 * unit(rng);
    std::vector<bool> dangling(n), isolated(n);
    for (std::size_t i = 0; i < n; ++i) {
        dangling[i] = unit(rng) < 0.2;
        isolated[i] = unit(rng) < 0.1;
    }
    std::vector<IndexEdge> edges;
    for (std::size_t u = 0; u < n; ++u) {
        if (dangling[u] || isolated[u]) continue;
        for (std::size_t v = 0; v < n; ++v) {
            if (u != v && !isolated[v] && unit(rng) < p) edges.emplace_back(u, v);
        }
    }
    return edges;
}

/// Random DAG on nodes 0..n-1 with edges only from lower to higher index.
inline std::vector<std::pair<std::size_t, std::size_t>> random_dag(std::size_t n, double p,
                                                                   std::mt19937_64& rng) {
    std::bernoulli_distribution coin(p);
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            if (coin(rng)) edges.emplace_back(u, v);
        }
    }
    return edges;
}

inline std::string id(const char* prefix, std::size_t i, int width = 3) {
    std::string digits = std::to_string(i);
    while (static_cast<int>(digits.size()) < width) digits.insert(digits.begin(), '0');
    return prefix + digits;
}

// ---------------------------------------------------------------------------
// Ten-case fixture
// ---------------------------------------------------------------------------

struct TenCaseCounts {
    static constexpr std::size_t cases = 10;
    static constexpr std::size_t opinions = 13;
    static constexpr std::size_t courts = 4;
    static constexpr std::size_t passages = 30;
    static constexpr std::size_t citations = 14;
    static constexpr int year_min = 1984;
    static constexpr int year_max = 2023;
};

struct CaseSpec {
    const char* id;
    const char* name;
    int year;
    const char* court;
    const char* cite;
};

inline const std::vector<CaseSpec>& ten_case_specs() {
    static const std::vector<CaseSpec> specs{
        {"sony", "Sony Corp. of America v. Universal City Studios, Inc.", 1984, "scotus", "464 U.S. 417"},
        {"harper", "Harper & Row, Publishers, Inc. v. Nation Enterprises", 1985, "scotus", "471 U.S. 539"},
        {"campbell", "Campbell v. Acuff-Rose Music, Inc.", 1994, "scotus", "510 U.S. 569"},
        {"seuss", "Dr. Seuss Enterprises, L.P. v. Penguin Books USA, Inc.", 1997, "ca9", "109 F.3d 1394"},
        {"kelly", "Kelly v. Arriba Soft Corp.", 2003, "ca9", "336 F.3d 811"},
        {"perfect10", "Perfect 10, Inc. v. Amazon.com, Inc.", 2007, "ca9", "508 F.3d 1146"},
        {"lenz_d", "Lenz v. Universal Music Corp.", 2008, "ndcal", "572 F. Supp. 2d 1150"},
        {"lenz", "Lenz v. Universal Music Corp.", 2015, "ca9", "801 F.3d 1126"},
        {"oracle", "Google LLC v. Oracle America, Inc.", 2021, "scotus", "593 U.S. 1"},
        {"warhol", "Andy Warhol Foundation for the Visual Arts, Inc. v. Goldsmith", 2023, "scotus",
         "598 U.S. 508"},
    };
    return specs;
}

inline const std::vector<std::pair<std::string, std::string>>& ten_case_citations() {
    static const std::vector<std::pair<std::string, std::string>> edges{
        {"harper", "sony"},     {"campbell", "sony"},   {"campbell", "harper"}, {"seuss", "campbell"},
        {"kelly", "campbell"},  {"kelly", "sony"},      {"perfect10", "kelly"}, {"perfect10", "campbell"},
        {"lenz_d", "campbell"}, {"lenz", "campbell"},   {"lenz", "lenz_d"},     {"oracle", "campbell"},
        {"warhol", "campbell"}, {"warhol", "oracle"},
    };
    return edges;
}

/// Fair-use flavoured passage text for case `c` and factor `f`.
inline std::string passage_text(const CaseSpec& c, Factor f) {
    const std::string who = c.name;
    switch (f) {
    case Factor::Facts:
        return "The dispute in " + who + " concerned the copying of a protected work. "
               "The defendant reproduced portions of the work in a new medium.";
    case Factor::Purpose:
        return "The purpose and character of the use in " + who +
               " turned on whether the use was transformative and commercial. "
               "Parody and commentary weigh toward fair use.";
    case Factor::Nature:
        return "The nature of the copyrighted work was creative expression in " + who + ".";
    case Factor::Amount:
        return "The amount and substantiality of the portion used was examined in " + who +
               ". Copying the heart of the work weighs against fair use.";
    case Factor::Market:
        return "The effect of the use upon the potential market for the work was considered in " + who +
               ". Market substitution harms the licensing market.";
    case Factor::Conclusion:
        return "The court in " + who + " reached a conclusion on fair use.";
    }
    return {};
}

/// 4 courts, 10 cases, 13 opinions (three cases carry a second opinion),
/// 30 passages, 14 citation edges.
inline KnowledgeGraph ten_case_graph(bool freeze = true) {
    KnowledgeGraph g;
    g.add_court({"scotus", "Supreme Court of the United States", std::nullopt});
    g.add_court({"ca9", "United States Court of Appeals for the Ninth Circuit", "scotus"});
    g.add_court({"ca2", "United States Court of Appeals for the Second Circuit", "scotus"});
    g.add_court({"ndcal", "United States District Court for the Northern District of California", "ca9"});
    for (const auto& c : ten_case_specs()) {
        g.add_case({c.id, c.name, c.year, c.court, {c.cite}});
        const std::string op = std::string(c.id) + "-maj";
        g.add_opinion({op, c.id, OpinionKind::majority,
                       "Opinion of the court in " + std::string(c.name) + ", " + c.cite + "."});
        // Every majority opinion has Purpose and Market; the first four also
        // have Amount; cases with a second opinion get Conclusion there.
        g.add_passage({op + "-purpose", op, Factor::Purpose, passage_text(c, Factor::Purpose)});
        g.add_passage({op + "-market", op, Factor::Market, passage_text(c, Factor::Market)});
    }
    int extra = 0;
    for (const auto& c : ten_case_specs()) {
        if (extra < 4) {
            const std::string op = std::string(c.id) + "-maj";
            g.add_passage({op + "-amount", op, Factor::Amount, passage_text(c, Factor::Amount)});
        }
        ++extra;
    }
    for (const char* cid : {"sony", "campbell", "warhol"}) {
        const auto& c = *std::find_if(ten_case_specs().begin(), ten_case_specs().end(),
                                      [cid](const CaseSpec& s) { return std::string(s.id) == cid; });
        const std::string op = std::string(cid) + "-dis";
        g.add_opinion({op, cid, std::string(cid) == "campbell" ? OpinionKind::concurrence : OpinionKind::dissent,
                       "Separate opinion in " + std::string(c.name) + "."});
        g.add_passage({op + "-conclusion", op, Factor::Conclusion, passage_text(c, Factor::Conclusion)});
        g.add_passage({op + "-nature", op, Factor::Nature, passage_text(c, Factor::Nature)});
    }
    for (const auto& [a, b] : ten_case_citations()) g.add_citation(a, b);
    if (freeze) g.freeze();
    return g;
}

// ---------------------------------------------------------------------------
// Landmark fixture: 50 cases, two of them heavily cited
// ---------------------------------------------------------------------------

struct Landmarks {
    static constexpr const char* first = "case-007";
    static constexpr const char* second = "case-031";
};

/// Cases "case-000".."case-049" in one court. Every case other than the
/// landmarks cites both landmarks; a sparse random extra edge set sits on
/// top. Passage text makes landmarks weak text matches for "parody video"
/// queries, and the non-landmarks strong ones.
inline KnowledgeGraph landmark_graph(unsigned seed = 7) {
    KnowledgeGraph g;
    g.add_court({"scotus", "Supreme Court", std::nullopt});
    g.add_court({"circuit", "Court of Appeals", "scotus"});
    g.add_court({"district", "District Court", "circuit"});
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, 49);
    const char* courts[] = {"district", "circuit", "scotus"};
    for (std::size_t i = 0; i < 50; ++i) {
        const auto cid = id("case-", i);
        const bool landmark = cid == Landmarks::first || cid == Landmarks::second;
        g.add_case({cid, "Case " + std::to_string(i) + " v. Defendant", 1980 + static_cast<int>(i % 40),
                    landmark ? "scotus" : courts[i % 2], {}});
        const auto op = cid + "-op";
        g.add_opinion({op, cid, OpinionKind::majority, "Opinion " + std::to_string(i)});
        std::string text = landmark
            ? "The statute of limitations barred the contract claim under general principles."
            : "A parody video of a song was posted online. The parody video commented on the original song "
              "in a transformative way, case " + std::to_string(i) + ".";
        g.add_passage({op + "-p", op, Factor::Purpose, text});
    }
    for (std::size_t i = 0; i < 50; ++i) {
        const auto cid = id("case-", i);
        if (cid == Landmarks::first || cid == Landmarks::second) continue;
        g.add_citation(cid, Landmarks::first);
        g.add_citation(cid, Landmarks::second);
    }
    for (int e = 0; e < 20; ++e) {
        const auto a = id("case-", static_cast<std::size_t>(pick(rng)));
        const auto b = id("case-", static_cast<std::size_t>(pick(rng)));
        if (a == b || a == Landmarks::first || a == Landmarks::second) continue;
        g.add_citation(a, b);
    }
    g.freeze();
    return g;
}

// ---------------------------------------------------------------------------
// Anti-correlated corpus: authority rises with the case index, planted
// query-term overlap falls with it.
// ---------------------------------------------------------------------------

inline std::vector<std::string> topic_terms() {
    std::vector<std::string> t;
    for (const char* w : {"parody", "video", "remix", "song", "lyrics", "takedown", "notice", "upload",
                          "platform", "commentary", "criticism", "satire", "clip", "broadcast", "stream",
                          "mashup", "sample", "melody", "chorus", "dance", "meme", "channel", "creator",
                          "audience", "thumbnail", "excerpt", "quotation", "review", "tribute", "cover"}) {
        t.emplace_back(w);
    }
    return t;
}

struct AntiCorrelatedCorpus {
    KnowledgeGraph graph;
    std::vector<std::string> queries;
};

/// 60 cases; case j cites every case in (j, j + 10], so PageRank grows with
/// j. Case j's passage holds 30 - j/2 topic terms and j filler terms, so its
/// overlap with any topic query shrinks with j. 20 queries of 8 topic terms.
inline AntiCorrelatedCorpus anti_correlated_corpus(unsigned seed = 2024) {
    constexpr std::size_t kCases = 60;
    AntiCorrelatedCorpus out;
    auto& g = out.graph;
    g.add_court({"apex", "Apex Court", std::nullopt});
    g.add_court({"mid", "Intermediate Court", "apex"});
    std::mt19937_64 rng(seed);
    const auto terms = topic_terms();
    for (std::size_t j = 0; j < kCases; ++j) {
        const auto cid = id("ac-", j);
        g.add_case({cid, "Anti " + std::to_string(j) + " v. Corr", 1990 + static_cast<int>(j % 30),
                    j % 2 == 0 ? "mid" : "apex", {}});
        const auto op = cid + "-op";
        g.add_opinion({op, cid, OpinionKind::majority, "Opinion " + std::to_string(j)});
        auto shuffled = terms;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        const std::size_t topical = 30 - j / 2;
        std::string text = "Holding";
        for (std::size_t t = 0; t < topical; ++t) text += " " + shuffled[t];
        for (std::size_t f = 0; f < j; ++f) text += " zz" + std::to_string(j) + "q" + std::to_string(f);
        text += ".";
        g.add_passage({op + "-p", op, Factor::Purpose, text});
    }
    for (std::size_t j = 0; j < kCases; ++j) {
        for (std::size_t t = j + 1; t <= j + 10 && t < kCases; ++t) g.add_citation(id("ac-", j), id("ac-", t));
    }
    g.freeze();
    for (int q = 0; q < 20; ++q) {
        auto shuffled = terms;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        std::string text;
        for (std::size_t t = 0; t < 8; ++t) text += (t ? " " : "") + shuffled[t];
        out.queries.push_back(text);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Planted citations
// ---------------------------------------------------------------------------

struct PlantedCitation {
    int volume;
    std::string reporter;  // canonical
    int page;
    std::optional<int> year;
};

struct PlantedString {
    std::string text;
    std::vector<PlantedCitation> expected;
};

/// Fifty sentences with 0-3 planted citations each, drawn from reporter
/// spellings (canonical and variant), optional pin cites and optional
/// parentheticals, mixed with distractor numbers that must not match.
inline std::vector<PlantedString> planted_citations(unsigned seed = 50) {
    struct Spelling {
        const char* text;
        const char* canonical;
    };
    static const Spelling spellings[] = {
        {"U.S.", "U.S."},         {"S. Ct.", "S. Ct."},           {"S.Ct.", "S. Ct."},
        {"F.2d", "F.2d"},         {"F. 2d", "F.2d"},              {"F.3d", "F.3d"},
        {"F. 3d", "F.3d"},        {"F.4th", "F.4th"},             {"F. Supp. 2d", "F. Supp. 2d"},
        {"F.Supp.2d", "F. Supp. 2d"}, {"F. Supp. 3d", "F. Supp. 3d"}, {"L. Ed. 2d", "L. Ed. 2d"},
        {"F. App'x", "F. App'x"}, {"Fed. Appx.", "F. App'x"},     {"U.S.P.Q.2d", "U.S.P.Q.2d"},
        {"F.", "F."},
    };
    static const char* parties[] = {"Alpha Records", "Beta Media Corp.", "Gamma", "Delta Studios, Inc.",
                                    "Epsilon Broadcasting", "Zeta", "Eta Publishing Co."};
    static const char* courts[] = {"9th Cir.", "2d Cir.", "S.D.N.Y.", "N.D. Cal.", "", "Fed. Cir."};
    static const char* filler[] = {"The court noted that 17 copies were made in 2019.",
                                   "Damages of 250 dollars were awarded on count 3.",
                                   "See generally the record at 45.",
                                   "The work ran 12 minutes.",
                                   "Section 107 lists four factors."};

    std::mt19937_64 rng(seed);
    auto pick = [&rng](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    std::vector<PlantedString> out;
    for (int s = 0; s < 50; ++s) {
        PlantedString ps;
        const std::size_t count = s % 4;  // 0..3 citations
        ps.text = filler[pick(std::size(filler))];
        for (std::size_t c = 0; c < count; ++c) {
            const auto& sp = spellings[pick(std::size(spellings))];
            const int volume = 1 + static_cast<int>(pick(999));
            const int page = 1 + static_cast<int>(pick(2999));
            PlantedCitation pc{volume, sp.canonical, page, std::nullopt};
            std::string cite = std::string(parties[pick(std::size(parties))]) + " v. " +
                               parties[pick(std::size(parties))] + ", " + std::to_string(volume) + " " +
                               sp.text + " " + std::to_string(page);
            if (pick(2) == 0) cite += ", " + std::to_string(page + 1 + static_cast<int>(pick(20)));
            if (pick(3) != 0) {
                const int year = 1950 + static_cast<int>(pick(74));
                const std::string court = courts[pick(std::size(courts))];
                cite += " (" + (court.empty() ? "" : court + " ") + std::to_string(year) + ")";
                pc.year = year;
            }
            ps.text += (pick(2) == 0 ? " See " : " The court relied on ") + cite + ".";
            if (pick(2) == 0) ps.text += std::string(" ") + filler[pick(std::size(filler))];
            ps.expected.push_back(pc);
        }
        out.push_back(std::move(ps));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Brute-force oracles for search and fusion
// ---------------------------------------------------------------------------

/// Full scan: similarity of every (filtered) chunk, sorted by similarity desc
/// then chunk id asc, truncated to m. Dot products are computed directly.
inline std::vector<std::pair<std::string, double>> brute_force_search(const VectorIndex& index,
                                                                      const EmbeddingVector& q,
                                                                      std::size_t m,
                                                                      std::optional<Factor> filter = {}) {
    std::vector<std::pair<std::string, double>> all;
    for (std::size_t i = 0; i < index.size(); ++i) {
        const auto& c = index.chunks()[i];
        if (filter && c.factor != *filter) continue;
        const auto& a = index.vectors()[i].values();
        double dot = 0.0, na = 0.0, nq = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            dot += a[k] * q.values()[k];
            na += a[k] * a[k];
            nq += q.values()[k] * q.values()[k];
        }
        all.emplace_back(c.chunk_id, std::clamp(dot / (std::sqrt(na) * std::sqrt(nq)), -1.0, 1.0));
    }
    std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
        if (x.second != y.second) return x.second > y.second;
        return x.first < y.first;
    });
    if (all.size() > m) all.resize(m);
    return all;
}

/// Fused value computed independently, left to right.
inline double brute_fused(double wt, double wc, double wk, double t, double c, double k) {
    double s = wt * t;
    s += wc * c;
    s += wk * k;
    return s;
}

/// Pure-cosine top-k computed from a full scan of chunk similarities.
inline std::vector<CaseId> cosine_top_k(const Corpus& c, const std::string& text, std::size_t k) {
    const auto q = c.embedder().embed(text);
    std::map<CaseId, std::pair<double, ChunkId>> best;
    for (std::size_t i = 0; i < c.index().size(); ++i) {
        const double s = cosine(q, c.index().vectors()[i]);
        const auto& owner = c.owner(i).case_id;
        auto it = best.find(owner);
        if (it == best.end() || s > it->second.first) best[owner] = {s, c.index().chunks()[i].chunk_id};
    }
    std::vector<std::pair<double, CaseId>> ranked;
    for (const auto& [id, b] : best) ranked.emplace_back(b.first, id);
    std::sort(ranked.begin(), ranked.end(), [&c](const auto& x, const auto& y) {
        if (x.first != y.first) return x.first > y.first;
        const double cx = c.scores().citation_of(x.second), cy = c.scores().citation_of(y.second);
        if (cx != cy) return cx > cy;
        return x.second < y.second;
    });
    std::vector<CaseId> out;
    for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) out.push_back(ranked[i].second);
    return out;
}

inline Weights random_weights(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
    case 0:
        return Weights::text_only();
    case 1:
        return Weights::uniform();
    case 2:
        return {0.0, 0.0, 1.0};
    default: {
        const double a = unit(rng), b = unit(rng);
        const double lo = std::min(a, b), hi = std::max(a, b);
        return {lo, hi - lo, 1.0 - hi};
    }
    }
}

}  // namespace fixtures
