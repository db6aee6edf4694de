// SPDX-License-Identifier: Apache-2.0
// Copyright 2025 Precedent Contributors

#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "precedent/citation_parser.hpp"
#include "precedent/corpus_io.hpp"
#include "precedent/graph_store.hpp"

namespace precedent {

struct ValidationReport {
    std::size_t records = 0;
    std::vector<std::string> schema_violations;
    std::vector<CourtId> auto_created_courts;
    std::vector<std::string> unresolved_citations;  // "opinion: 12 F.3d 34"
    std::vector<std::string> ambiguous_keys;
    std::vector<std::string> unparseable_cites;
    std::vector<std::string> near_misses;
    std::size_t citations_found = 0;
    std::size_t self_citations = 0;
    std::size_t explicit_edges = 0;
    std::size_t extracted_edges = 0;
    CorpusStats stats;

    [[nodiscard]] bool ok() const noexcept { return schema_violations.empty(); }

    [[nodiscard]] nlohmann::json to_json() const {
        return {{"ok", ok()},
                {"records", records},
                {"schema_violations", schema_violations},
                {"auto_created_courts", auto_created_courts},
                {"unresolved_citations", unresolved_citations},
                {"ambiguous_keys", ambiguous_keys},
                {"unparseable_cites", unparseable_cites},
                {"near_misses", near_misses},
                {"citations_found", citations_found},
                {"self_citations", self_citations},
                {"explicit_edges", explicit_edges},
                {"extracted_edges", extracted_edges},
                {"stats",
                 {{"case_count", stats.case_count},
                  {"opinion_count", stats.opinion_count},
                  {"court_count", stats.court_count},
                  {"passage_count", stats.passage_count},
                  {"citation_count", stats.citation_count},
                  {"year_min", stats.year_min ? nlohmann::json(*stats.year_min) : nlohmann::json()},
                  {"year_max", stats.year_max ? nlohmann::json(*stats.year_max) : nlohmann::json()}}}};
    }
};

struct IngestOptions {
    ReporterRegistry registry = ReporterRegistry::defaults();
    bool extract_citations = true;
};

struct IngestResult {
    KnowledgeGraph graph;
    ValidationReport report;
};

/// Reads every line it can; malformed lines become violations instead of
/// aborting the read.
inline std::vector<LocatedRecord> read_records_lenient(std::istream& in, const std::string& source_name,
                                                       std::vector<std::string>& violations) {
    std::vector<LocatedRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const std::string where = source_name + ":" + std::to_string(line_no);
        try {
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception& e) {
                throw Error(Errc::MalformedInput, where + ": " + e.what());
            }
            out.push_back({parse_record(j, where), where});
        } catch (const Error& e) {
            violations.push_back(e.what());
        }
    }
    return out;
}

/// Lenient build: each failing record is reported and skipped, cases naming
/// an unknown court get an auto-created court, and citations found in opinion
/// texts are added as CITED edges. The returned graph is frozen.
inline IngestResult ingest_records(std::vector<LocatedRecord> records, const IngestOptions& options,
                                   std::vector<std::string> read_violations = {}) {
    IngestResult out;
    auto& g = out.graph;
    auto& rep = out.report;
    rep.records = records.size();
    rep.schema_violations = std::move(read_violations);
    if (records.empty() && rep.schema_violations.empty()) rep.schema_violations.push_back("no records");

    std::stable_sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
        return detail::kind_order(a.record) < detail::kind_order(b.record);
    });
    std::vector<LocatedRecord> appeals;
    for (auto& rec : records) {
        if (auto* court = std::get_if<CourtNode>(&rec.record); court && court->appeals_to) {
            appeals.push_back({AppealRecord{court->court_id, *court->appeals_to}, rec.source});
            court->appeals_to.reset();
        }
    }
    bool appeals_done = false;
    auto apply = [&](LocatedRecord& rec) {
        try {
            std::visit(
                [&](auto& r) {
                    using T = std::decay_t<decltype(r)>;
                    if constexpr (std::is_same_v<T, CitationEdge>) {
                        if (g.add_citation(r.from_case, r.to_case)) ++rep.explicit_edges;
                    } else if constexpr (std::is_same_v<T, AppealRecord>) {
                        g.add_appeal(r.from_court, r.to_court);
                    } else if constexpr (std::is_same_v<T, CaseNode>) {
                        if (!r.court_id.empty() && !g.has_court(r.court_id)) {
                            g.add_court({r.court_id, r.court_id, std::nullopt});
                            rep.auto_created_courts.push_back(r.court_id);
                        }
                        g.add_case(r);
                    } else {
                        g.add_node(r);
                    }
                },
                rec.record);
        } catch (const Error& e) {
            rep.schema_violations.push_back(detail::located(rec.source, e.what()));
        }
    };
    for (auto& rec : records) {
        if (std::holds_alternative<AppealRecord>(rec.record)) {
            appeals.push_back(rec);
            continue;
        }
        if (!appeals_done && !std::holds_alternative<CourtNode>(rec.record)) {
            for (auto& a : appeals) apply(a);
            appeals_done = true;
        }
        apply(rec);
    }
    if (!appeals_done) {
        for (auto& a : appeals) apply(a);
    }

    for (auto& v : g.schema_violations()) rep.schema_violations.push_back(std::move(v));

    if (options.extract_citations) {
        CitationIndex::BuildDiagnostics idx_diag;
        const auto index = CitationIndex::build(g, options.registry, &idx_diag);
        for (const auto& a : idx_diag.ambiguous) {
            std::string owners;
            for (const auto& c : a.cases) owners += (owners.empty() ? "" : ", ") + c;
            rep.ambiguous_keys.push_back(a.key.str() + " claimed by " + owners);
        }
        for (const auto& [cid, cite] : idx_diag.unparseable) {
            rep.unparseable_cites.push_back(cid + ": '" + cite + "'");
        }
        auto built = build_citation_edges(g, index, options.registry);
        rep.citations_found = built.diagnostics.citations_found;
        rep.self_citations = built.diagnostics.self_citations;
        for (const auto& [oid, c] : built.diagnostics.unresolved_citations) {
            rep.unresolved_citations.push_back(oid + ": " + key_of(c).str());
        }
        for (const auto& [oid, m] : built.diagnostics.near_misses) {
            rep.near_misses.push_back(oid + ": " + m.text + " (" + m.reason + ")");
        }
        for (const auto& e : built.edges) {
            if (g.add_citation(e.from_case, e.to_case)) ++rep.extracted_edges;
        }
    }
    g.freeze();
    rep.stats = g.stats();
    return out;
}

/// Ingests every *.jsonl file of a directory, in file-name order.
inline IngestResult ingest_directory(const std::filesystem::path& dir, const IngestOptions& options = {}) {
    if (!std::filesystem::is_directory(dir)) {
        throw Error(Errc::Io, "corpus directory '" + dir.string() + "' does not exist");
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<LocatedRecord> records;
    std::vector<std::string> violations;
    for (const auto& f : files) {
        std::ifstream in(f);
        if (!in) throw Error(Errc::Io, "cannot read '" + f.string() + "'");
        auto part = read_records_lenient(in, f.filename().string(), violations);
        std::move(part.begin(), part.end(), std::back_inserter(records));
    }
    return ingest_records(std::move(records), options, std::move(violations));
}

}  // namespace precedent
