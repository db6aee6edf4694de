// SPDX-License-Identifier: Apache-2.0
// Copyright 2025 Precedent Contributors
//
// Embedded typed property graph for a case-law corpus.
//
// Node kinds: Court, Case, Opinion, FactorPassage.
// Edge kinds:
//   Case    -DECIDED_IN->  Court     (CaseNode::court_id)
//   Case    -HAS_OPINION-> Opinion   (OpinionNode::case_id)
//   Passage -OF->          Opinion   (FactorPassage::opinion_id)
//   Court   -APPEALS_TO->  Court     (CourtNode::appeals_to, acyclic)
//   Case    -CITED->       Case      (simple digraph: no loops, no parallel edges)
//
// The graph accepts writes until freeze(); afterwards it is immutable and may be
// shared across threads by const reference.

#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "precedent/error.hpp"
#include "precedent/types.hpp"

namespace precedent {

inline constexpr int kMinCaseYear = 1976;
inline constexpr int kMaxCaseYear = 2100;

struct CourtNode {
    CourtId court_id;
    std::string name;
    std::optional<CourtId> appeals_to;

    bool operator==(const CourtNode&) const = default;
};

struct CaseNode {
    CaseId case_id;
    std::string name;
    int year = kMinCaseYear;
    CourtId court_id;
    // Reporter citations under which this case is published, e.g. "510 U.S. 569".
    std::vector<std::string> cites;

    bool operator==(const CaseNode&) const = default;
};

struct OpinionNode {
    OpinionId opinion_id;
    CaseId case_id;
    OpinionKind opinion_kind = OpinionKind::majority;
    std::string full_text;

    bool operator==(const OpinionNode&) const = default;
};

struct FactorPassage {
    PassageId passage_id;
    OpinionId opinion_id;
    Factor factor = Factor::Facts;
    std::string text;

    bool operator==(const FactorPassage&) const = default;
};

struct CitationEdge {
    CaseId from_case;
    CaseId to_case;

    auto operator<=>(const CitationEdge&) const = default;
    bool operator==(const CitationEdge&) const = default;
};

using AnyNode = std::variant<CourtNode, CaseNode, OpinionNode, FactorPassage>;

struct CorpusStats {
    std::size_t case_count = 0;
    std::size_t opinion_count = 0;
    std::size_t court_count = 0;
    std::size_t passage_count = 0;
    std::size_t citation_count = 0;
    std::optional<int> year_min;
    std::optional<int> year_max;

    bool operator==(const CorpusStats&) const = default;
};

class KnowledgeGraph {
public:
    // ---- writes -----------------------------------------------------------

    const CourtId& add_court(CourtNode court) {
        check_writable();
        require_id(court.court_id, "court_id");
        if (courts_.contains(court.court_id)) {
            throw Error(Errc::DuplicateId, "court '" + court.court_id + "' already exists",
                        "court_id");
        }
        if (court.appeals_to && !courts_.contains(*court.appeals_to)) {
            throw Error(Errc::DanglingReference,
                        "court '" + court.court_id + "' appeals to unknown court '" +
                            *court.appeals_to + "'",
                        "appeals_to");
        }
        auto id = court.court_id;
        return courts_.emplace(id, std::move(court)).first->first;
    }

    const CaseId& add_case(CaseNode c) {
        check_writable();
        require_id(c.case_id, "case_id");
        if (cases_.contains(c.case_id)) {
            throw Error(Errc::DuplicateId, "case '" + c.case_id + "' already exists", "case_id");
        }
        if (c.year < kMinCaseYear || c.year > kMaxCaseYear) {
            throw Error(Errc::InvalidField,
                        "case '" + c.case_id + "' has year " + std::to_string(c.year) +
                            " outside " + std::to_string(kMinCaseYear) + "-" +
                            std::to_string(kMaxCaseYear),
                        "year");
        }
        if (!courts_.contains(c.court_id)) {
            throw Error(Errc::DanglingReference,
                        "case '" + c.case_id + "' decided in unknown court '" + c.court_id + "'",
                        "court_id");
        }
        auto id = c.case_id;
        cited_[id];
        citing_[id];
        opinions_by_case_[id];
        return cases_.emplace(id, std::move(c)).first->first;
    }

    const OpinionId& add_opinion(OpinionNode o) {
        check_writable();
        require_id(o.opinion_id, "opinion_id");
        if (opinions_.contains(o.opinion_id)) {
            throw Error(Errc::DuplicateId, "opinion '" + o.opinion_id + "' already exists",
                        "opinion_id");
        }
        if (!cases_.contains(o.case_id)) {
            throw Error(Errc::DanglingReference,
                        "opinion '" + o.opinion_id + "' belongs to unknown case '" + o.case_id +
                            "'",
                        "case_id");
        }
        auto id = o.opinion_id;
        opinions_by_case_[o.case_id].push_back(id);
        passages_by_opinion_[id];
        return opinions_.emplace(id, std::move(o)).first->first;
    }

    const PassageId& add_passage(FactorPassage p) {
        check_writable();
        require_id(p.passage_id, "passage_id");
        if (!is_valid(p.factor)) {
            throw Error(Errc::InvalidFactorKind,
                        "passage '" + p.passage_id + "' has an invalid factor kind", "factor");
        }
        if (passages_.contains(p.passage_id)) {
            throw Error(Errc::DuplicateId, "passage '" + p.passage_id + "' already exists",
                        "passage_id");
        }
        if (!opinions_.contains(p.opinion_id)) {
            throw Error(Errc::DanglingReference,
                        "passage '" + p.passage_id + "' belongs to unknown opinion '" +
                            p.opinion_id + "'",
                        "opinion_id");
        }
        if (p.text.empty()) {
            throw Error(Errc::InvalidField, "passage '" + p.passage_id + "' has empty text",
                        "text");
        }
        auto id = p.passage_id;
        passages_by_opinion_[p.opinion_id].push_back(id);
        return passages_.emplace(id, std::move(p)).first->first;
    }

    /// Dispatches on the node kind; returns the id of the inserted node.
    std::string add_node(AnyNode node) {
        return std::visit(
            [this](auto&& n) -> std::string {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, CourtNode>) return add_court(std::move(n));
                else if constexpr (std::is_same_v<T, CaseNode>) return add_case(std::move(n));
                else if constexpr (std::is_same_v<T, OpinionNode>) return add_opinion(std::move(n));
                else return add_passage(std::move(n));
            },
            std::move(node));
    }

    /// Sets the APPEALS_TO target of `lower`. A court has at most one target and
    /// the relation must stay acyclic.
    void add_appeal(const CourtId& lower, const CourtId& higher) {
        check_writable();
        auto it = courts_.find(lower);
        if (it == courts_.end()) {
            throw Error(Errc::DanglingReference, "unknown court '" + lower + "'", "from_court");
        }
        if (!courts_.contains(higher)) {
            throw Error(Errc::DanglingReference, "unknown court '" + higher + "'", "to_court");
        }
        if (it->second.appeals_to) {
            if (*it->second.appeals_to == higher) return;
            throw Error(Errc::InvalidField,
                        "court '" + lower + "' already appeals to '" + *it->second.appeals_to +
                            "'",
                        "appeals_to");
        }
        for (std::optional<CourtId> cur = higher; cur; cur = courts_.at(*cur).appeals_to) {
            if (*cur == lower) {
                throw Error(Errc::AppealCycle,
                            "appeal " + lower + " -> " + higher + " would close a cycle",
                            "appeals_to");
            }
        }
        it->second.appeals_to = higher;
    }

    /// Inserts the CITED edge once; returns false when it was already present.
    bool add_citation(const CaseId& from, const CaseId& to) {
        check_writable();
        if (!cases_.contains(from)) {
            throw Error(Errc::DanglingReference, "unknown citing case '" + from + "'",
                        "from_case");
        }
        if (!cases_.contains(to)) {
            throw Error(Errc::DanglingReference, "unknown cited case '" + to + "'", "to_case");
        }
        if (from == to) {
            throw Error(Errc::SelfCitation, "case '" + from + "' cannot cite itself", "to_case");
        }
        const bool inserted = cited_[from].insert(to).second;
        if (inserted) {
            citing_[to].insert(from);
            ++citation_count_;
        }
        return inserted;
    }

    void freeze() noexcept { frozen_ = true; }
    [[nodiscard]] bool frozen() const noexcept { return frozen_; }

    // ---- reads ------------------------------------------------------------

    [[nodiscard]] const std::map<CourtId, CourtNode>& courts() const noexcept { return courts_; }
    [[nodiscard]] const std::map<CaseId, CaseNode>& cases() const noexcept { return cases_; }
    [[nodiscard]] const std::map<OpinionId, OpinionNode>& opinions() const noexcept {
        return opinions_;
    }
    [[nodiscard]] const std::map<PassageId, FactorPassage>& passages() const noexcept {
        return passages_;
    }

    [[nodiscard]] bool has_case(const CaseId& id) const { return cases_.contains(id); }
    [[nodiscard]] bool has_court(const CourtId& id) const { return courts_.contains(id); }
    [[nodiscard]] bool has_opinion(const OpinionId& id) const { return opinions_.contains(id); }

    [[nodiscard]] const CaseNode& case_at(const CaseId& id) const {
        auto it = cases_.find(id);
        if (it == cases_.end()) throw Error(Errc::UnknownCase, "unknown case '" + id + "'", "case_id");
        return it->second;
    }
    [[nodiscard]] const CourtNode& court_at(const CourtId& id) const {
        auto it = courts_.find(id);
        if (it == courts_.end()) {
            throw Error(Errc::UnknownCourt, "unknown court '" + id + "'", "court_id");
        }
        return it->second;
    }
    [[nodiscard]] const OpinionNode& opinion_at(const OpinionId& id) const {
        auto it = opinions_.find(id);
        if (it == opinions_.end()) {
            throw Error(Errc::DanglingReference, "unknown opinion '" + id + "'", "opinion_id");
        }
        return it->second;
    }
    [[nodiscard]] const FactorPassage& passage_at(const PassageId& id) const {
        auto it = passages_.find(id);
        if (it == passages_.end()) {
            throw Error(Errc::DanglingReference, "unknown passage '" + id + "'", "passage_id");
        }
        return it->second;
    }

    /// Opinions of a case in insertion order.
    [[nodiscard]] const std::vector<OpinionId>& opinions_of(const CaseId& id) const {
        auto it = opinions_by_case_.find(id);
        if (it == opinions_by_case_.end()) {
            throw Error(Errc::UnknownCase, "unknown case '" + id + "'", "case_id");
        }
        return it->second;
    }

    /// Passages of an opinion in insertion order.
    [[nodiscard]] const std::vector<PassageId>& passages_of(const OpinionId& id) const {
        auto it = passages_by_opinion_.find(id);
        if (it == passages_by_opinion_.end()) {
            throw Error(Errc::DanglingReference, "unknown opinion '" + id + "'", "opinion_id");
        }
        return it->second;
    }

    /// Cases reachable by following CITED edges 1..depth times, sorted by id.
    [[nodiscard]] std::vector<CaseId> cited_cases(const CaseId& id, int depth = 1) const {
        return neighborhood(cited_, id, depth);
    }

    /// Cases with a CITED edge into `id`, sorted by id.
    [[nodiscard]] std::vector<CaseId> citing_cases(const CaseId& id, int depth = 1) const {
        return neighborhood(citing_, id, depth);
    }

    [[nodiscard]] std::size_t out_degree(const CaseId& id) const { return adjacency(cited_, id).size(); }
    [[nodiscard]] std::size_t in_degree(const CaseId& id) const { return adjacency(citing_, id).size(); }

    /// All CITED edges, ordered by (from, to).
    [[nodiscard]] std::vector<CitationEdge> citations() const {
        std::vector<CitationEdge> out;
        out.reserve(citation_count_);
        for (const auto& [from, targets] : cited_) {
            for (const auto& to : targets) out.push_back({from, to});
        }
        return out;
    }

    [[nodiscard]] std::size_t citation_count() const noexcept { return citation_count_; }

    /// Number of APPEALS_TO hops from `court` to the apex of its chain.
    [[nodiscard]] int appeal_depth(const CourtId& court) const {
        int depth = 0;
        for (auto cur = court_at(court).appeals_to; cur; cur = court_at(*cur).appeals_to) {
            ++depth;
            if (depth > static_cast<int>(courts_.size())) {
                throw Error(Errc::AppealCycle, "appeal chain from '" + court + "' does not end");
            }
        }
        return depth;
    }

    [[nodiscard]] CorpusStats stats() const {
        CorpusStats s;
        s.case_count = cases_.size();
        s.opinion_count = opinions_.size();
        s.court_count = courts_.size();
        s.passage_count = passages_.size();
        s.citation_count = citation_count_;
        for (const auto& [_, c] : cases_) {
            s.year_min = s.year_min ? std::min(*s.year_min, c.year) : c.year;
            s.year_max = s.year_max ? std::max(*s.year_max, c.year) : c.year;
        }
        return s;
    }

    /// Full scan of the schema invariants that cannot be enforced per insert.
    /// Returns one human-readable line per violation.
    [[nodiscard]] std::vector<std::string> schema_violations() const {
        std::vector<std::string> out;
        for (const auto& [id, c] : cases_) {
            if (!courts_.contains(c.court_id)) {
                out.push_back("case '" + id + "': DECIDED_IN unknown court '" + c.court_id + "'");
            }
            if (opinions_by_case_.at(id).empty()) {
                out.push_back("case '" + id + "': no HAS_OPINION edge");
            }
        }
        for (const auto& [id, o] : opinions_) {
            if (!cases_.contains(o.case_id)) {
                out.push_back("opinion '" + id + "': owning case '" + o.case_id + "' missing");
            }
        }
        for (const auto& [id, p] : passages_) {
            if (!opinions_.contains(p.opinion_id)) {
                out.push_back("passage '" + id + "': owning opinion '" + p.opinion_id + "' missing");
            }
        }
        for (const auto& [id, _] : courts_) {
            try {
                (void)appeal_depth(id);
            } catch (const Error&) {
                out.push_back("court '" + id + "': APPEALS_TO cycle");
            }
        }
        return out;
    }

    bool operator==(const KnowledgeGraph& other) const {
        return courts_ == other.courts_ && cases_ == other.cases_ &&
               opinions_ == other.opinions_ && passages_ == other.passages_ &&
               cited_ == other.cited_;
    }

private:
    using Adjacency = std::map<CaseId, std::set<CaseId>>;

    void check_writable() const {
        if (frozen_) throw Error(Errc::GraphFrozen, "graph is frozen; no further mutation");
    }

    static void require_id(const std::string& id, const char* field) {
        if (id.empty()) throw Error(Errc::InvalidField, "empty identifier", field);
    }

    const std::set<CaseId>& adjacency(const Adjacency& adj, const CaseId& id) const {
        auto it = adj.find(id);
        if (it == adj.end()) throw Error(Errc::UnknownCase, "unknown case '" + id + "'", "case_id");
        return it->second;
    }

    std::vector<CaseId> neighborhood(const Adjacency& adj, const CaseId& id, int depth) const {
        if (depth < 1) throw Error(Errc::InvalidArgument, "depth must be >= 1", "depth");
        std::set<CaseId> seen;
        std::vector<CaseId> frontier{id};
        (void)adjacency(adj, id);
        for (int d = 0; d < depth && !frontier.empty(); ++d) {
            std::vector<CaseId> next;
            for (const auto& u : frontier) {
                for (const auto& v : adjacency(adj, u)) {
                    if (v != id && seen.insert(v).second) next.push_back(v);
                }
            }
            frontier = std::move(next);
        }
        return {seen.begin(), seen.end()};
    }

    std::map<CourtId, CourtNode> courts_;
    std::map<CaseId, CaseNode> cases_;
    std::map<OpinionId, OpinionNode> opinions_;
    std::map<PassageId, FactorPassage> passages_;
    std::map<CaseId, std::vector<OpinionId>> opinions_by_case_;
    std::map<OpinionId, std::vector<PassageId>> passages_by_opinion_;
    Adjacency cited_;
    Adjacency citing_;
    std::size_t citation_count_ = 0;
    bool frozen_ = false;
};

}  // namespace precedent
