// SPDX-License-Identifier: Apache-2.0
// Copyright 2025 Precedent Contributors

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fixtures.hpp"

using namespace precedent;

namespace {

KnowledgeGraph abc_graph() {
    KnowledgeGraph g;
    g.add_court({"c", "Court", std::nullopt});
    for (const char* id : {"A", "B", "C"}) g.add_case({id, std::string("Case ") + id, 2000, "c", {}});
    return g;
}

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an Error";
    return Errc::Io;
}

}  // namespace

TEST(GraphStore, AddRootCourtReturnsItsId) {
    KnowledgeGraph g;
    EXPECT_EQ(g.add_node(CourtNode{"SCOTUS", "Supreme Court", std::nullopt}), "SCOTUS");
    EXPECT_FALSE(g.court_at("SCOTUS").appeals_to.has_value());
    EXPECT_EQ(g.appeal_depth("SCOTUS"), 0);
}

TEST(GraphStore, OpinionWithMissingCaseIsDangling) {
    KnowledgeGraph g;
    EXPECT_EQ(code_of([&] { g.add_opinion({"O1", "missing", OpinionKind::majority, "t"}); }),
              Errc::DanglingReference);
}

TEST(GraphStore, PassageReadYourWrite) {
    auto g = abc_graph();
    g.add_opinion({"O1", "A", OpinionKind::majority, "text"});
    g.add_passage({"P1", "O1", Factor::Purpose, "transformative use"});
    const auto ps = g.passages_of("O1");
    ASSERT_EQ(ps.size(), 1u);
    EXPECT_EQ(ps.front(), "P1");
    EXPECT_EQ(g.passage_at("P1").factor, Factor::Purpose);
}

TEST(GraphStore, RejectsDuplicatesAndBadFields) {
    auto g = abc_graph();
    EXPECT_EQ(code_of([&] { g.add_case({"A", "again", 2000, "c", {}}); }), Errc::DuplicateId);
    EXPECT_EQ(code_of([&] { g.add_case({"D", "d", 1975, "c", {}}); }), Errc::InvalidField);
    EXPECT_EQ(code_of([&] { g.add_case({"D", "d", 2101, "c", {}}); }), Errc::InvalidField);
    EXPECT_EQ(code_of([&] { g.add_case({"D", "d", 2000, "nowhere", {}}); }), Errc::DanglingReference);
    g.add_opinion({"O1", "A", OpinionKind::majority, "text"});
    EXPECT_EQ(code_of([&] { g.add_passage({"P", "O1", Factor::Market, ""}); }), Errc::InvalidField);
    EXPECT_EQ(code_of([&] { g.add_passage({"P", "O1", static_cast<Factor>(42), "x"}); }),
              Errc::InvalidFactorKind);
    EXPECT_EQ(code_of([] { (void)parse_factor("Damages"); }), Errc::InvalidFactorKind);
}

TEST(GraphStore, CitationDedupAndDegrees) {
    auto g = abc_graph();
    EXPECT_TRUE(g.add_citation("A", "B"));
    EXPECT_FALSE(g.add_citation("A", "B"));
    EXPECT_EQ(g.out_degree("A"), 1u);
    g.add_citation("C", "B");
    EXPECT_EQ(g.in_degree("B"), 2u);
    EXPECT_EQ(g.citation_count(), 2u);
}

TEST(GraphStore, SelfAndDanglingCitations) {
    auto g = abc_graph();
    EXPECT_EQ(code_of([&] { g.add_citation("A", "A"); }), Errc::SelfCitation);
    EXPECT_EQ(code_of([&] { g.add_citation("A", "Z"); }), Errc::DanglingReference);
}

TEST(GraphStore, CitedAndCitingNeighbours) {
    auto g = abc_graph();
    g.add_citation("A", "B");
    g.add_citation("A", "C");
    EXPECT_EQ(g.cited_cases("A"), (std::vector<CaseId>{"B", "C"}));
    EXPECT_EQ(g.citing_cases("B"), (std::vector<CaseId>{"A"}));
    EXPECT_EQ(code_of([&] { (void)g.cited_cases("Z"); }), Errc::UnknownCase);
    EXPECT_EQ(code_of([&] { (void)g.citing_cases("Z"); }), Errc::UnknownCase);
}

TEST(GraphStore, RandomDagNeighboursMatchGenerator) {
    std::mt19937_64 rng(20);
    const auto edges = fixtures::random_dag(20, 0.2, rng);
    KnowledgeGraph g;
    g.add_court({"c", "Court", std::nullopt});
    for (std::size_t i = 0; i < 20; ++i) g.add_case({fixtures::id("n", i), "N", 2000, "c", {}});
    for (const auto& [u, v] : edges) g.add_citation(fixtures::id("n", u), fixtures::id("n", v));
    for (std::size_t i = 0; i < 20; ++i) {
        std::set<CaseId> out, in;
        for (const auto& [u, v] : edges) {
            if (u == i) out.insert(fixtures::id("n", v));
            if (v == i) in.insert(fixtures::id("n", u));
        }
        const auto cited = g.cited_cases(fixtures::id("n", i));
        const auto citing = g.citing_cases(fixtures::id("n", i));
        EXPECT_EQ(std::set<CaseId>(cited.begin(), cited.end()), out);
        EXPECT_EQ(std::set<CaseId>(citing.begin(), citing.end()), in);
    }
}

TEST(GraphStore, DepthTwoReachesTransitiveCitations) {
    auto g = abc_graph();
    g.add_citation("A", "B");
    g.add_citation("B", "C");
    EXPECT_EQ(g.cited_cases("A", 1), (std::vector<CaseId>{"B"}));
    EXPECT_EQ(g.cited_cases("A", 2), (std::vector<CaseId>{"B", "C"}));
}

TEST(GraphStore, EmptyStatsAreZero) {
    const KnowledgeGraph g;
    const auto s = g.stats();
    EXPECT_EQ(s, CorpusStats{});
    EXPECT_FALSE(s.year_min.has_value());
}

TEST(GraphStore, TenCaseFixtureStats) {
    using C = fixtures::TenCaseCounts;
    const auto s = fixtures::ten_case_graph().stats();
    EXPECT_EQ(s.case_count, C::cases);
    EXPECT_EQ(s.opinion_count, C::opinions);
    EXPECT_EQ(s.court_count, C::courts);
    EXPECT_EQ(s.passage_count, C::passages);
    EXPECT_EQ(s.citation_count, C::citations);
    EXPECT_EQ(s.year_min, C::year_min);
    EXPECT_EQ(s.year_max, C::year_max);
    EXPECT_GE(s.opinion_count, s.case_count);
}

TEST(GraphStore, AppealChainsStayAcyclic) {
    KnowledgeGraph g;
    g.add_court({"a", "A", std::nullopt});
    g.add_court({"b", "B", "a"});
    g.add_court({"c", "C", "b"});
    EXPECT_EQ(g.appeal_depth("c"), 2);
    EXPECT_EQ(code_of([&] { g.add_appeal("a", "c"); }), Errc::AppealCycle);
    EXPECT_EQ(code_of([&] { g.add_appeal("b", "c"); }), Errc::InvalidField);
    EXPECT_EQ(code_of([&] { g.add_appeal("a", "a"); }), Errc::AppealCycle);
}

TEST(GraphStore, FrozenGraphRejectsWrites) {
    auto g = fixtures::ten_case_graph();
    EXPECT_TRUE(g.frozen());
    EXPECT_EQ(code_of([&] { g.add_court({"x", "X", std::nullopt}); }), Errc::GraphFrozen);
    EXPECT_EQ(code_of([&] { g.add_citation("sony", "warhol"); }), Errc::GraphFrozen);
}

TEST(GraphStore, FixtureHasNoSchemaViolations) {
    EXPECT_TRUE(fixtures::ten_case_graph().schema_violations().empty());
}

TEST(GraphStore, CaseWithoutOpinionIsAViolation) {
    auto g = abc_graph();
    const auto v = g.schema_violations();
    EXPECT_EQ(v.size(), 3u);
    EXPECT_NE(v.front().find("no HAS_OPINION"), std::string::npos) << v.front();
}
