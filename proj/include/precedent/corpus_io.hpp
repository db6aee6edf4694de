// SPDX-License-Identifier: Apache-2.0
// Copyright 2025 Precedent Contributors
//
// Line-delimited corpus records: one JSON object per LF-terminated line.
//
//   {"kind":"court",   "court_id", "name", "appeals_to": id|null}
//   {"kind":"case",    "case_id", "name", "year", "court_id", "cites": [..]}
//   {"kind":"opinion", "opinion_id", "case_id", "opinion_kind", "full_text"}
//   {"kind":"passage", "passage_id", "opinion_id", "factor", "text"}
//   {"kind":"citation","from_case", "to_case"}
//   {"kind":"appeal",  "from_court", "to_court"}
//
// "cites" is optional on input. Export writes keys in sorted order, records
// grouped by kind and sorted by id, so equal graphs export to equal bytes.

#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "precedent/error.hpp"
#include "precedent/graph_store.hpp"

namespace precedent {

struct AppealRecord {
    CourtId from_court;
    CourtId to_court;
    bool operator==(const AppealRecord&) const = default;
};

using CorpusRecord =
    std::variant<CourtNode, CaseNode, OpinionNode, FactorPassage, CitationEdge, AppealRecord>;

struct LocatedRecord {
    CorpusRecord record;
    std::string source;  // "file:line" or "line N"
};

namespace detail {

inline std::string located(const std::string& where, const std::string& msg) {
    return where.empty() ? msg : where + ": " + msg;
}

inline const nlohmann::json& field(const nlohmann::json& j, const char* name,
                                   const std::string& where) {
    auto it = j.find(name);
    if (it == j.end()) {
        throw Error(Errc::MalformedInput, located(where, std::string("missing field '") + name + "'"),
                    name);
    }
    return *it;
}

inline std::string string_field(const nlohmann::json& j, const char* name,
                                const std::string& where) {
    const auto& v = field(j, name, where);
    if (!v.is_string()) {
        throw Error(Errc::MalformedInput,
                    located(where, std::string("field '") + name + "' must be a string"), name);
    }
    return v.get<std::string>();
}

}  // namespace detail

/// Parses one record object. Throws MalformedInput (structure) or
/// InvalidFactorKind / InvalidField (bad enumerated values).
inline CorpusRecord parse_record(const nlohmann::json& j, const std::string& where = {}) {
    using detail::field;
    using detail::string_field;
    if (!j.is_object()) throw Error(Errc::MalformedInput, detail::located(where, "record is not an object"));
    const std::string kind = string_field(j, "kind", where);
    try {
        if (kind == "court") {
            CourtNode c{string_field(j, "court_id", where), string_field(j, "name", where), {}};
            if (auto it = j.find("appeals_to"); it != j.end() && !it->is_null()) {
                c.appeals_to = string_field(j, "appeals_to", where);
            }
            return c;
        }
        if (kind == "case") {
            CaseNode c;
            c.case_id = string_field(j, "case_id", where);
            c.name = string_field(j, "name", where);
            const auto& year = field(j, "year", where);
            if (!year.is_number_integer()) {
                throw Error(Errc::MalformedInput, detail::located(where, "field 'year' must be an integer"),
                            "year");
            }
            c.year = year.get<int>();
            c.court_id = string_field(j, "court_id", where);
            if (auto it = j.find("cites"); it != j.end()) {
                if (!it->is_array()) {
                    throw Error(Errc::MalformedInput, detail::located(where, "field 'cites' must be an array"),
                                "cites");
                }
                for (const auto& s : *it) {
                    if (!s.is_string()) {
                        throw Error(Errc::MalformedInput,
                                    detail::located(where, "field 'cites' must hold strings"), "cites");
                    }
                    c.cites.push_back(s.get<std::string>());
                }
            }
            return c;
        }
        if (kind == "opinion") {
            return OpinionNode{string_field(j, "opinion_id", where), string_field(j, "case_id", where),
                               parse_opinion_kind(string_field(j, "opinion_kind", where)),
                               string_field(j, "full_text", where)};
        }
        if (kind == "passage") {
            return FactorPassage{string_field(j, "passage_id", where),
                                 string_field(j, "opinion_id", where),
                                 parse_factor(string_field(j, "factor", where)),
                                 string_field(j, "text", where)};
        }
        if (kind == "citation") {
            return CitationEdge{string_field(j, "from_case", where), string_field(j, "to_case", where)};
        }
        if (kind == "appeal") {
            return AppealRecord{string_field(j, "from_court", where), string_field(j, "to_court", where)};
        }
    } catch (const Error& e) {
        if (e.code() == Errc::MalformedInput) throw;
        throw Error(e.code(), detail::located(where, e.detail()), e.field());
    }
    throw Error(Errc::MalformedInput, detail::located(where, "unknown record kind '" + kind + "'"),
                "kind");
}

inline nlohmann::json to_json(const CorpusRecord& rec) {
    using nlohmann::json;
    return std::visit(
        [](const auto& r) -> json {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, CourtNode>) {
                return {{"kind", "court"}, {"court_id", r.court_id}, {"name", r.name},
                        {"appeals_to", r.appeals_to ? json(*r.appeals_to) : json(nullptr)}};
            } else if constexpr (std::is_same_v<T, CaseNode>) {
                return {{"kind", "case"}, {"case_id", r.case_id}, {"name", r.name},
                        {"year", r.year}, {"court_id", r.court_id}, {"cites", r.cites}};
            } else if constexpr (std::is_same_v<T, OpinionNode>) {
                return {{"kind", "opinion"}, {"opinion_id", r.opinion_id}, {"case_id", r.case_id},
                        {"opinion_kind", std::string(to_string(r.opinion_kind))},
                        {"full_text", r.full_text}};
            } else if constexpr (std::is_same_v<T, FactorPassage>) {
                return {{"kind", "passage"}, {"passage_id", r.passage_id},
                        {"opinion_id", r.opinion_id}, {"factor", std::string(to_string(r.factor))},
                        {"text", r.text}};
            } else if constexpr (std::is_same_v<T, CitationEdge>) {
                return {{"kind", "citation"}, {"from_case", r.from_case}, {"to_case", r.to_case}};
            } else {
                return {{"kind", "appeal"}, {"from_court", r.from_court}, {"to_court", r.to_court}};
            }
        },
        rec);
}

/// Reads records from a stream. Blank lines are skipped; every other line
/// must be a complete JSON object. `source_name` prefixes error locations.
inline std::vector<LocatedRecord> read_records(std::istream& in, const std::string& source_name = {}) {
    std::vector<LocatedRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const std::string where =
            (source_name.empty() ? std::string("line ") : source_name + ":") + std::to_string(line_no);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::MalformedInput, where + ": " + e.what());
        }
        out.push_back({parse_record(j, where), where});
    }
    return out;
}

namespace detail {

inline int kind_order(const CorpusRecord& r) {
    // courts, appeals, cases, opinions, passages, citations
    static constexpr int order[] = {0, 2, 3, 4, 5, 1};
    return order[r.index()];
}

}  // namespace detail

/// Strict application of records to a graph: parents are inserted before
/// children regardless of file order, and any schema error propagates with
/// the record's location.
inline void apply_records(KnowledgeGraph& g, std::vector<LocatedRecord> records) {
    std::stable_sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
        return detail::kind_order(a.record) < detail::kind_order(b.record);
    });
    // Court records may name their appeals_to target; those edges are applied
    // together with appeal records once every court exists.
    std::vector<LocatedRecord> appeals;
    std::vector<LocatedRecord> rest;
    for (auto& rec : records) {
        if (auto* court = std::get_if<CourtNode>(&rec.record); court && court->appeals_to) {
            appeals.push_back({AppealRecord{court->court_id, *court->appeals_to}, rec.source});
            court->appeals_to.reset();
        }
        if (std::holds_alternative<AppealRecord>(rec.record)) {
            appeals.push_back(std::move(rec));
        } else {
            rest.push_back(std::move(rec));
        }
    }
    auto apply = [&g](LocatedRecord& rec) {
        try {
            std::visit(
                [&g](auto&& r) {
                    using T = std::decay_t<decltype(r)>;
                    if constexpr (std::is_same_v<T, CitationEdge>) {
                        g.add_citation(r.from_case, r.to_case);
                    } else if constexpr (std::is_same_v<T, AppealRecord>) {
                        g.add_appeal(r.from_court, r.to_court);
                    } else {
                        g.add_node(std::move(r));
                    }
                },
                std::move(rec.record));
        } catch (const Error& e) {
            throw Error(e.code(), detail::located(rec.source, e.detail()), e.field());
        }
    };
    bool appeals_done = false;
    auto flush_appeals = [&] {
        if (appeals_done) return;
        for (auto& a : appeals) apply(a);
        appeals_done = true;
    };
    for (auto& rec : rest) {
        if (!std::holds_alternative<CourtNode>(rec.record)) flush_appeals();
        apply(rec);
    }
    flush_appeals();
}

/// Reconstructs a frozen graph from serialized records. Whole-graph
/// invariants (every case has an opinion) are checked after the last record.
inline KnowledgeGraph import_graph(std::istream& in, const std::string& source_name = {}) {
    KnowledgeGraph g;
    apply_records(g, read_records(in, source_name));
    if (auto v = g.schema_violations(); !v.empty()) {
        const std::string where = source_name.empty() ? std::string("input") : source_name;
        throw Error(Errc::MalformedInput, where + ": " + v.front());
    }
    g.freeze();
    return g;
}

/// All records describing `g`, in canonical export order.
inline std::vector<CorpusRecord> graph_records(const KnowledgeGraph& g) {
    std::vector<CorpusRecord> out;
    for (const auto& [_, c] : g.courts()) out.emplace_back(c);
    for (const auto& [_, c] : g.cases()) out.emplace_back(c);
    for (const auto& [_, o] : g.opinions()) out.emplace_back(o);
    for (const auto& [_, p] : g.passages()) out.emplace_back(p);
    for (auto& e : g.citations()) out.emplace_back(std::move(e));
    return out;
}

inline void export_graph(const KnowledgeGraph& g, std::ostream& out) {
    for (const auto& rec : graph_records(g)) out << to_json(rec).dump() << '\n';
}

}  // namespace precedent
