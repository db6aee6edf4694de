// SPDX-License-Identifier: Apache-2.0
// Copyright 2025 Precedent Contributors

#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"

using namespace precedent;

namespace {

CandidateScore cand(const std::string& id, double t, double c, double k) {
    return {id, id + "-op", t, c, k, 0.0, id + "#0000"};
}

}  // namespace

TEST(Weights, Validation) {
    EXPECT_NO_THROW(Weights::uniform().validate());
    EXPECT_NO_THROW(Weights::text_only().validate());
    try {
        Weights{0.5, 0.5, 0.2}.validate();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::InvalidWeights);
        EXPECT_EQ(e.field(), "weights");
    }
    try {
        Weights{1.2, -0.2, 0.0}.validate();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.field(), "w_text");
    }
}

TEST(AggregateTextSim, MaxWithWitness) {
    const std::vector<ChunkMatch> hits{{"x#0000", "X", "X-op", 0.2}, {"x#0001", "X", "X-op", 0.9},
                                       {"y#0000", "Y", "Y-op", 0.4}};
    const auto m = aggregate_text_sim(hits);
    EXPECT_EQ(m.at("X"), (TextMatch{0.9, "x#0001", "X-op"}));
    EXPECT_EQ(m.at("Y").score, 0.4);
}

TEST(AggregateTextSim, TiesGoToLowerChunkId) {
    const std::vector<ChunkMatch> hits{{"b", "X", "o", 0.5}, {"a", "X", "o", 0.5}};
    EXPECT_EQ(aggregate_text_sim(hits).at("X").witness, "a");
}

TEST(AggregateTextSim, FiftyCasesMatchGroupByMax) {
    std::mt19937_64 rng(50);
    std::uniform_real_distribution<double> u(-1, 1);
    std::uniform_int_distribution<std::size_t> pick(0, 49);
    std::vector<ChunkMatch> hits;
    for (int i = 0; i < 400; ++i) {
        const auto c = fixtures::id("case", pick(rng));
        hits.push_back({fixtures::id("chunk", static_cast<std::size_t>(i), 4), c, c + "-op",
                        std::round(u(rng) * 20) / 20});  // coarse values force ties
    }
    const auto m = aggregate_text_sim(hits);
    std::map<std::string, std::pair<double, std::string>> oracle;
    for (const auto& h : hits) {
        auto it = oracle.find(h.case_id);
        if (it == oracle.end()) {
            oracle[h.case_id] = {h.similarity, h.chunk_id};
            continue;
        }
        auto& [best, witness] = it->second;
        if (h.similarity > best || (h.similarity == best && h.chunk_id < witness)) {
            best = h.similarity;
            witness = h.chunk_id;
        }
    }
    ASSERT_EQ(m.size(), oracle.size());
    for (const auto& [id, bw] : oracle) {
        EXPECT_EQ(m.at(id).score, bw.first);
        EXPECT_EQ(m.at(id).witness, bw.second);
    }
}

TEST(Fuse, TextOnlyFollowsTextOrdering) {
    const auto out = fuse({cand("a", 0.2, 1, 1), cand("b", 0.9, 0, 0), cand("c", 0.5, 0.5, 0.5)},
                          Weights::text_only());
    EXPECT_EQ(out[0].case_id, "b");
    EXPECT_EQ(out[1].case_id, "c");
    EXPECT_EQ(out[2].case_id, "a");
}

TEST(Fuse, UniformWorkedExample) {
    const auto out = fuse({cand("X", 0.9, 0.1, 0.2), cand("Y", 0.5, 0.8, 0.9)}, Weights::uniform());
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[0].case_id, "Y");
    EXPECT_NEAR(out[0].fused, 2.2 / 3.0, 1e-12);
    EXPECT_NEAR(out[1].fused, 0.4, 1e-12);
}

TEST(Fuse, TieRuleCitationThenId) {
    const auto out = fuse({cand("b", 0.5, 0.5, 0.5), cand("a", 0.5, 0.5, 0.5), cand("c", 0.6, 0.4, 0.5)},
                          Weights::uniform());
    // All three fuse to 0.5: c has the lowest citation; a precedes b by id.
    EXPECT_EQ(out[0].case_id, "a");
    EXPECT_EQ(out[1].case_id, "b");
    EXPECT_EQ(out[2].case_id, "c");
}

TEST(Fuse, RejectsBadInputs) {
    EXPECT_THROW((void)fuse({cand("a", 0.5, 0.5, 0.5)}, {0.5, 0.5, 0.5}), Error);
    EXPECT_THROW((void)fuse({cand("a", 1.5, 0.5, 0.5)}, Weights::uniform()), Error);
}

TEST(Fuse, RandomInstancesMatchBruteForce) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0, 1);
    for (int t = 0; t < 200; ++t) {
        const auto w = fixtures::random_weights(rng);
        std::vector<CandidateScore> cs;
        for (int i = 0; i < 20; ++i) {
            cs.push_back(cand(fixtures::id("k", static_cast<std::size_t>(i)), u(rng), u(rng), u(rng)));
        }
        const auto out = fuse(cs, w);
        for (const auto& c : out) {
            EXPECT_EQ(c.fused, fixtures::brute_fused(w.w_text, w.w_cit, w.w_court, c.text_sim, c.citation, c.court));
        }
    }
}

TEST(SelectTopK, Examples) {
    const auto scored = fuse({cand("a", 0.1, 0.1, 0.1), cand("b", 0.9, 0.9, 0.9), cand("c", 0.5, 0.5, 0.5)},
                             Weights::uniform());
    EXPECT_EQ(select_top_k(scored, 10).size(), 3u);
    const auto one = select_top_k(scored, 1);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].case_id, "b");
    auto permuted = scored;
    std::reverse(permuted.begin(), permuted.end());
    EXPECT_EQ(select_top_k(permuted, 2), select_top_k(scored, 2));
    EXPECT_THROW((void)select_top_k(scored, 0), Error);
}

namespace {

struct StarFixture {
    KnowledgeGraph graph;
    AuthorityScores scores;
};

/// Top case "T" cites L, M and N; L is also cited by nine other cases.
StarFixture star() {
    KnowledgeGraph g;
    g.add_court({"c", "C", std::nullopt});
    for (const char* id : {"T", "L", "M", "N"}) {
        g.add_case({id, id, 2000, "c", {}});
        g.add_opinion({std::string(id) + "o", id, OpinionKind::majority, "x"});
    }
    for (int i = 0; i < 9; ++i) {
        const auto id = fixtures::id("s", static_cast<std::size_t>(i));
        g.add_case({id, id, 2000, "c", {}});
        g.add_opinion({id + "o", id, OpinionKind::majority, "x"});
        g.add_citation(id, "L");
    }
    for (const char* to : {"L", "M", "N"}) g.add_citation("T", to);
    g.add_citation("M", "N");
    g.freeze();
    auto s = compute_authority(g);
    return {std::move(g), std::move(s)};
}

}  // namespace

TEST(ExpandCitations, ZeroNIsEmpty) {
    const auto f = star();
    EXPECT_TRUE(expand_citations({cand("T", 1, 0, 0)}, f.graph, f.scores, Weights::uniform(), 0).empty());
}

TEST(ExpandCitations, SingleCitedCase) {
    KnowledgeGraph g;
    g.add_court({"c", "C", std::nullopt});
    for (const char* id : {"A", "B"}) {
        g.add_case({id, id, 2000, "c", {}});
        g.add_opinion({std::string(id) + "o", id, OpinionKind::majority, "x"});
    }
    g.add_citation("A", "B");
    g.freeze();
    const auto s = compute_authority(g);
    const auto e = expand_citations({cand("A", 1, 0, 0)}, g, s, Weights::uniform(), 3);
    ASSERT_EQ(e.size(), 1u);
    EXPECT_EQ(e[0], (Expansion{"A", "B", 1, e[0].score}));
}

TEST(ExpandCitations, MostAuthoritativeFirstEvenForTextOnlyWeights) {
    const auto f = star();
    for (const auto& w : {Weights::uniform(), Weights::text_only(), Weights{0.5, 0.5, 0.0}}) {
        const auto e = expand_citations({cand("T", 1, 0, 0)}, f.graph, f.scores, w, 3);
        ASSERT_EQ(e.size(), 3u);
        EXPECT_EQ(e[0].cited_case, "L");
        EXPECT_EQ(e[0].source_case, "T");
    }
    const auto two = expand_citations({cand("T", 1, 0, 0)}, f.graph, f.scores, Weights::uniform(), 2);
    EXPECT_EQ(two.size(), 2u);
}

TEST(ExpandCitations, SkipsMembersOfTopK) {
    const auto f = star();
    const auto e =
        expand_citations({cand("T", 1, 0, 0), cand("L", 0.5, 0, 0)}, f.graph, f.scores, Weights::uniform(), 5);
    for (const auto& x : e) EXPECT_NE(x.cited_case, "L");
    EXPECT_EQ(e.size(), 2u);
}
