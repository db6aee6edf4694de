// SPDX-License-Identifier: Apache-2.0
// Copyright 2025 Precedent Contributors
//
// Reporter-citation extraction ("801 F.3d 1126 (9th Cir. 2015)") and
// resolution of extracted citations to corpus cases.
//
// Grammar recognised, with W = whitespace containing at most one newline:
//
//   [Name v. Name, ] VOLUME W REPORTER W PAGE [, PIN]* [W "(" [COURT] YEAR ")"]
//
// A blank line (two newlines) never occurs inside a citation or its case-name
// lookback, so text blocks separated by a blank line are parsed independently.

#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "precedent/error.hpp"
#include "precedent/graph_store.hpp"

namespace precedent {

struct ReporterEntry {
    std::string canonical;
    std::vector<std::string> variants;
};

/// Set of known reporters. Matching ignores whitespace inside the abbreviation,
/// so "F. 3d", "F.3d" and "F.  3d" all normalise to the same canonical key.
class ReporterRegistry {
public:
    ReporterRegistry() = default;

    static ReporterRegistry defaults() {
        ReporterRegistry r;
        for (auto& e : std::vector<ReporterEntry>{
                 {"U.S.", {"US"}},
                 {"S. Ct.", {"S.Ct."}},
                 {"L. Ed.", {"L.Ed."}},
                 {"L. Ed. 2d", {"L.Ed.2d"}},
                 {"F.", {}},
                 {"F.2d", {"F. 2d"}},
                 {"F.3d", {"F. 3d"}},
                 {"F.4th", {"F. 4th"}},
                 {"F. Supp.", {"F.Supp."}},
                 {"F. Supp. 2d", {"F.Supp.2d"}},
                 {"F. Supp. 3d", {"F.Supp.3d"}},
                 {"F. App'x", {"F.App'x", "Fed. Appx.", "Fed. App'x"}},
                 {"U.S.P.Q.", {"USPQ"}},
                 {"U.S.P.Q.2d", {"USPQ2d"}},
                 {"N.Y.S.2d", {}},
                 {"Cal. Rptr.", {}},
             }) {
            r.add(std::move(e));
        }
        return r;
    }

    /// Registry file: one JSON object per line {"canonical": ..., "variants": [...]}.
    static ReporterRegistry load(std::istream& in) {
        ReporterRegistry r;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            const std::string where = "line " + std::to_string(line_no);
            try {
                auto j = nlohmann::json::parse(line);
                ReporterEntry e{j.at("canonical").get<std::string>(), {}};
                if (auto it = j.find("variants"); it != j.end()) {
                    e.variants = it->get<std::vector<std::string>>();
                }
                r.add(std::move(e));
            } catch (const nlohmann::json::exception& e) {
                throw Error(Errc::MalformedInput, where + ": " + e.what());
            } catch (const Error& e) {
                throw Error(e.code(), where + ": " + e.detail(), e.field());
            }
        }
        return r;
    }

    void add(ReporterEntry e) {
        if (compact(e.canonical).empty()) {
            throw Error(Errc::InvalidField, "empty reporter abbreviation", "canonical");
        }
        canonical_.insert(e.canonical);
        insert_form(e.canonical, e.canonical);
        for (const auto& v : e.variants) insert_form(v, e.canonical);
        std::stable_sort(forms_.begin(), forms_.end(),
                         [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
    }

    [[nodiscard]] bool contains(std::string_view canonical) const {
        return canonical_.contains(std::string(canonical));
    }

    /// Canonical key for any spelling of a known reporter.
    [[nodiscard]] std::optional<std::string> canonicalize(std::string_view spelling) const {
        const auto key = compact(spelling);
        for (const auto& [form, canon] : forms_) {
            if (form == key) return canon;
        }
        return std::nullopt;
    }

    [[nodiscard]] const std::set<std::string>& canonical_names() const noexcept { return canonical_; }

    struct Match {
        std::string canonical;
        std::size_t end;  // one past the last matched character
    };

    /// All registry forms that match `text` starting at `pos`, longest first.
    [[nodiscard]] std::vector<Match> matches_at(std::string_view text, std::size_t pos) const {
        std::vector<Match> out;
        for (const auto& [form, canon] : forms_) {
            std::size_t i = pos;
            std::size_t k = 0;
            while (k < form.size() && i < text.size()) {
                if (text[i] == form[k]) {
                    ++i;
                    ++k;
                } else if ((text[i] == ' ' || text[i] == '\t') && k > 0) {
                    ++i;
                } else {
                    break;
                }
            }
            if (k == form.size()) out.push_back({canon, i});
        }
        return out;
    }

    static std::string compact(std::string_view s) {
        std::string out;
        for (char c : s) {
            if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
        }
        return out;
    }

private:
    void insert_form(const std::string& spelling, const std::string& canonical) {
        auto key = compact(spelling);
        for (const auto& [form, canon] : forms_) {
            if (form == key) {
                if (canon != canonical) {
                    throw Error(Errc::InvalidField,
                                "reporter spelling '" + spelling + "' maps to both '" + canon +
                                    "' and '" + canonical + "'",
                                "variants");
                }
                return;
            }
        }
        forms_.emplace_back(std::move(key), canonical);
    }

    std::set<std::string> canonical_;
    std::vector<std::pair<std::string, std::string>> forms_;  // compact form -> canonical
};

struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;
    auto operator<=>(const Span&) const = default;
};

struct Citation {
    int volume = 0;
    std::string reporter;
    int page = 0;
    std::optional<int> year;
    std::optional<std::string> court_hint;
    std::optional<std::string> case_name_hint;
    Span span;

    bool operator==(const Citation&) const = default;
};

struct CitationKey {
    int volume = 0;
    std::string reporter;
    int page = 0;

    auto operator<=>(const CitationKey&) const = default;
    bool operator==(const CitationKey&) const = default;

    [[nodiscard]] std::string str() const {
        return std::to_string(volume) + " " + reporter + " " + std::to_string(page);
    }
};

inline CitationKey key_of(const Citation& c) { return {c.volume, c.reporter, c.page}; }

/// Something that looked like a citation but was rejected.
struct NearMiss {
    Span span;
    std::string text;
    std::string reason;
};

struct ExtractionResult {
    std::vector<Citation> citations;
    std::vector<NearMiss> diagnostics;
};

namespace detail {

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
inline bool is_hspace(char c) { return c == ' ' || c == '\t' || c == '\r'; }

/// Skips whitespace holding at most one newline. Returns npos when the run
/// contains a blank line.
inline std::size_t skip_gap(std::string_view t, std::size_t i) {
    int newlines = 0;
    while (i < t.size() && (is_hspace(t[i]) || t[i] == '\n')) {
        if (t[i] == '\n' && ++newlines > 1) return std::string_view::npos;
        ++i;
    }
    return i;
}

/// Parses 1..max_digits digits at i; fails if more digits follow.
inline std::optional<std::pair<int, std::size_t>> read_number(std::string_view t, std::size_t i,
                                                              std::size_t max_digits) {
    std::size_t j = i;
    while (j < t.size() && is_digit(t[j])) ++j;
    if (j == i || j - i > max_digits) return std::nullopt;
    int v = 0;
    for (std::size_t k = i; k < j; ++k) v = v * 10 + (t[k] - '0');
    return std::pair{v, j};
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

struct Core {
    int volume;
    std::string reporter;
    int page;
    std::size_t end;
};

/// VOLUME W REPORTER W PAGE at `pos`.
inline std::optional<Core> parse_core(std::string_view t, std::size_t pos,
                                      const ReporterRegistry& registry) {
    auto vol = read_number(t, pos, 4);
    if (!vol || vol->first < 1) return std::nullopt;
    std::size_t i = vol->second;
    if (i >= t.size() || !(is_hspace(t[i]) || t[i] == '\n')) return std::nullopt;
    i = skip_gap(t, i);
    if (i == std::string_view::npos) return std::nullopt;
    for (const auto& m : registry.matches_at(t, i)) {
        std::size_t j = m.end;
        if (j >= t.size() || !(is_hspace(t[j]) || t[j] == '\n')) continue;
        j = skip_gap(t, j);
        if (j == std::string_view::npos) continue;
        auto page = read_number(t, j, 5);
        if (!page || page->first < 1) continue;
        if (page->second < t.size() && is_alnum(t[page->second])) continue;
        return Core{vol->first, m.canonical, page->first, page->second};
    }
    return std::nullopt;
}

/// ", 579" or ", 579-80" pin cites; stops before a parallel citation.
inline std::size_t skip_pins(std::string_view t, std::size_t i, const ReporterRegistry& registry) {
    while (i < t.size() && t[i] == ',') {
        std::size_t j = skip_gap(t, i + 1);
        if (j == std::string_view::npos) break;
        auto pin = read_number(t, j, 5);
        if (!pin) break;
        if (parse_core(t, j, registry)) break;
        std::size_t k = pin->second;
        if (k < t.size() && (t[k] == '-')) {
            auto tail = read_number(t, k + 1, 5);
            if (tail) k = tail->second;
        }
        if (k < t.size() && is_alnum(t[k])) break;
        i = k;
    }
    return i;
}

struct Parenthetical {
    std::optional<std::string> court;
    int year;
    std::size_t end;
};

inline std::optional<Parenthetical> parse_parenthetical(std::string_view t, std::size_t i) {
    std::size_t j = skip_gap(t, i);
    if (j == std::string_view::npos || j >= t.size() || t[j] != '(') return std::nullopt;
    std::size_t close = j + 1;
    int newlines = 0;
    while (close < t.size() && t[close] != ')') {
        if (t[close] == '(' || close - j > 80) return std::nullopt;
        if (t[close] == '\n' && ++newlines > 1) return std::nullopt;
        ++close;
    }
    if (close >= t.size()) return std::nullopt;
    auto inner = trim(t.substr(j + 1, close - j - 1));
    if (inner.size() < 4) return std::nullopt;
    auto year_text = inner.substr(inner.size() - 4);
    if (!std::all_of(year_text.begin(), year_text.end(), is_digit)) return std::nullopt;
    if (inner.size() > 4 && !std::isspace(static_cast<unsigned char>(inner[inner.size() - 5]))) {
        return std::nullopt;
    }
    const int year = std::stoi(std::string(year_text));
    if (year < 1600 || year > 2100) return std::nullopt;
    Parenthetical p{std::nullopt, year, close + 1};
    auto court = trim(inner.substr(0, inner.size() - 4));
    if (!court.empty()) p.court = std::string(court);
    return p;
}

inline bool is_signal_word(std::string_view w) {
    static constexpr std::string_view kSignals[] = {
        "In", "See", "See,", "Cf.", "Accord", "Accord,", "But", "Also", "E.g.,", "Compare",
        "And", "Under", "Following", "citing", "quoting"};
    return std::find(std::begin(kSignals), std::end(kSignals), w) != std::end(kSignals);
}

inline bool is_name_connector(std::string_view w) {
    static constexpr std::string_view kConnectors[] = {"of", "the", "and", "for", "de", "ex",
                                                       "rel.", "in", "on", "&", "a", "an"};
    return std::find(std::begin(kConnectors), std::end(kConnectors), w) != std::end(kConnectors);
}

/// Looks back from `comma` (the ',' before the volume) for "Party v. Party".
inline std::optional<std::string> case_name_before(std::string_view t, std::size_t comma,
                                                   std::size_t floor) {
    std::size_t lo = comma > 200 ? comma - 200 : 0;
    lo = std::max(lo, floor);
    if (auto blank = t.substr(lo, comma - lo).rfind("\n\n"); blank != std::string_view::npos) {
        lo += blank + 2;
    }
    const auto seg = t.substr(lo, comma - lo);
    const auto vpos = seg.rfind(" v. ");
    if (vpos == std::string_view::npos) return std::nullopt;
    auto defendant = trim(seg.substr(vpos + 4));
    if (defendant.empty() || defendant.size() > 120) return std::nullopt;
    if (defendant.find('\n') != std::string_view::npos &&
        defendant.find("\n\n") != std::string_view::npos) {
        return std::nullopt;
    }

    // Walk tokens leftwards from the "v." while they look like part of a name.
    std::vector<std::string_view> tokens;
    std::size_t end = vpos;
    while (end > 0) {
        std::size_t b = end;
        while (b > 0 && !std::isspace(static_cast<unsigned char>(seg[b - 1]))) --b;
        const auto tok = seg.substr(b, end - b);
        if (tok.empty()) break;
        const bool capital = std::isupper(static_cast<unsigned char>(tok.front())) ||
                             is_digit(tok.front());
        if (!(capital || is_name_connector(tok))) break;
        if (tok.back() == ',' || tok.back() == ';' || tok.back() == ':') break;
        tokens.push_back(tok);
        if (b == 0) break;
        end = b - 1;
        while (end > 0 && std::isspace(static_cast<unsigned char>(seg[end - 1]))) --end;
        if (end > 0 && (seg[end - 1] == '.' || seg[end - 1] == '?' || seg[end - 1] == '!') &&
            !tokens.empty()) {
            // Probable sentence end before the name, unless the previous
            // token is itself capitalised (e.g. "Sony Corp. of America").
            std::size_t pb = end;
            while (pb > 0 && !std::isspace(static_cast<unsigned char>(seg[pb - 1]))) --pb;
            const auto prev = seg.substr(pb, end - pb);
            if (prev.empty() || !std::isupper(static_cast<unsigned char>(prev.front()))) break;
        }
    }
    std::reverse(tokens.begin(), tokens.end());
    while (!tokens.empty() && (is_signal_word(tokens.front()) || is_name_connector(tokens.front()))) {
        tokens.erase(tokens.begin());
    }
    if (tokens.empty()) return std::nullopt;
    std::string plaintiff;
    for (const auto& tok : tokens) {
        if (!plaintiff.empty()) plaintiff += ' ';
        plaintiff += tok;
    }
    std::string def;
    for (char c : defendant) def.push_back(c == '\n' ? ' ' : c);
    return plaintiff + " v. " + def;
}

/// Unknown abbreviation between two numbers, e.g. "12 Foo. Rep. 34 (1999)".
inline std::optional<NearMiss> near_miss_at(std::string_view t, std::size_t pos) {
    auto vol = read_number(t, pos, 4);
    if (!vol) return std::nullopt;
    std::size_t i = vol->second;
    if (i >= t.size() || !is_hspace(t[i])) return std::nullopt;
    while (i < t.size() && is_hspace(t[i])) ++i;
    if (i >= t.size() || !std::isupper(static_cast<unsigned char>(t[i]))) return std::nullopt;
    const std::size_t rep_begin = i;
    for (std::size_t j = rep_begin + 1; j < t.size() && j < rep_begin + 24; ++j) {
        const char c = t[j];
        if (c == '\n') return std::nullopt;
        if (is_hspace(c) && j + 1 < t.size() && is_digit(t[j + 1])) {
            const auto rep = trim(t.substr(rep_begin, j - rep_begin));
            if (rep.find('.') == std::string_view::npos) return std::nullopt;
            auto page = read_number(t, j + 1, 5);
            if (!page || (page->second < t.size() && is_alnum(t[page->second]))) return std::nullopt;
            return NearMiss{{pos, page->second},
                            std::string(t.substr(pos, page->second - pos)),
                            "unknown reporter '" + std::string(rep) + "'"};
        }
        if (!(is_alnum(c) || c == '.' || c == '\'' || is_hspace(c))) return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace detail

/// Extracts reporter citations in source order, with non-overlapping spans.
/// Total over arbitrary input: never throws on text content.
inline ExtractionResult extract_citations_with_diagnostics(std::string_view text,
                                                           const ReporterRegistry& registry) {
    ExtractionResult out;
    std::size_t floor = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!detail::is_digit(text[i]) || (i > 0 && detail::is_alnum(text[i - 1]))) {
            ++i;
            continue;
        }
        if (auto core = detail::parse_core(text, i, registry)) {
            Citation c;
            c.volume = core->volume;
            c.reporter = core->reporter;
            c.page = core->page;
            std::size_t end = detail::skip_pins(text, core->end, registry);
            if (auto paren = detail::parse_parenthetical(text, end)) {
                c.year = paren->year;
                c.court_hint = paren->court;
                end = paren->end;
            }
            c.span = {i, end};
            std::size_t back = i;
            while (back > floor && detail::is_hspace(text[back - 1])) --back;
            if (back > floor && back < i && text[back - 1] == ',') {
                c.case_name_hint = detail::case_name_before(text, back - 1, floor);
            }
            out.citations.push_back(std::move(c));
            floor = end;
            i = end;
            continue;
        }
        if (auto miss = detail::near_miss_at(text, i)) {
            i = miss->span.end;
            out.diagnostics.push_back(std::move(*miss));
            continue;
        }
        while (i < text.size() && detail::is_digit(text[i])) ++i;
    }
    return out;
}

inline std::vector<Citation> extract_citations(std::string_view text,
                                               const ReporterRegistry& registry) {
    return extract_citations_with_diagnostics(text, registry).citations;
}

/// Parses a bare "VOLUME REPORTER PAGE" string such as a case's own cite.
inline std::optional<CitationKey> parse_citation_key(std::string_view s,
                                                     const ReporterRegistry& registry) {
    auto cites = extract_citations(s, registry);
    if (cites.size() != 1) return std::nullopt;
    return key_of(cites.front());
}

struct ResolveResult {
    std::optional<CaseId> case_id;
    Citation citation;
    bool ambiguous = false;

    [[nodiscard]] bool resolved() const noexcept { return case_id.has_value(); }
};

struct AmbiguousKey {
    CitationKey key;
    std::vector<CaseId> cases;
};

/// Exact (volume, reporter, page) lookup built from each case's own cites.
/// A key claimed by more than one case is recorded as ambiguous and never
/// resolves.
class CitationIndex {
public:
    struct BuildDiagnostics {
        std::vector<AmbiguousKey> ambiguous;
        std::vector<std::pair<CaseId, std::string>> unparseable;
    };

    void add(const CitationKey& key, const CaseId& case_id) {
        auto& owners = owners_[key];
        if (std::find(owners.begin(), owners.end(), case_id) == owners.end()) {
            owners.push_back(case_id);
        }
    }

    static CitationIndex build(const KnowledgeGraph& g, const ReporterRegistry& registry,
                               BuildDiagnostics* diagnostics = nullptr) {
        CitationIndex index;
        for (const auto& [id, c] : g.cases()) {
            for (const auto& cite : c.cites) {
                if (auto key = parse_citation_key(cite, registry)) {
                    index.add(*key, id);
                } else if (diagnostics) {
                    diagnostics->unparseable.emplace_back(id, cite);
                }
            }
        }
        if (diagnostics) diagnostics->ambiguous = index.ambiguous_keys();
        return index;
    }

    [[nodiscard]] ResolveResult resolve(const Citation& c) const {
        ResolveResult r{std::nullopt, c, false};
        auto it = owners_.find(key_of(c));
        if (it == owners_.end()) return r;
        if (it->second.size() > 1) {
            r.ambiguous = true;
            return r;
        }
        r.case_id = it->second.front();
        return r;
    }

    [[nodiscard]] std::vector<AmbiguousKey> ambiguous_keys() const {
        std::vector<AmbiguousKey> out;
        for (const auto& [key, owners] : owners_) {
            if (owners.size() > 1) out.push_back({key, owners});
        }
        return out;
    }

    [[nodiscard]] std::size_t size() const noexcept { return owners_.size(); }

private:
    std::map<CitationKey, std::vector<CaseId>> owners_;
};

inline ResolveResult resolve(const Citation& c, const CitationIndex& index) {
    return index.resolve(c);
}

struct EdgeEvidence {
    OpinionId opinion_id;
    Citation citation;
};

struct EdgeBuildDiagnostics {
    std::size_t citations_found = 0;
    std::size_t self_citations = 0;
    std::size_t unresolved = 0;
    std::size_t ambiguous = 0;
    std::vector<std::pair<OpinionId, Citation>> unresolved_citations;
    std::vector<std::pair<OpinionId, NearMiss>> near_misses;
};

struct EdgeBuildResult {
    std::vector<CitationEdge> edges;  // sorted, unique
    std::map<CitationEdge, std::vector<EdgeEvidence>> evidence;
    EdgeBuildDiagnostics diagnostics;
};

/// Citations found in every opinion of every case (majority, concurrence,
/// dissent and appellate alike) become CITED edges from the owning case.
inline EdgeBuildResult build_citation_edges(const KnowledgeGraph& g, const CitationIndex& index,
                                            const ReporterRegistry& registry) {
    EdgeBuildResult out;
    for (const auto& [oid, opinion] : g.opinions()) {
        auto found = extract_citations_with_diagnostics(opinion.full_text, registry);
        for (auto& miss : found.diagnostics) out.diagnostics.near_misses.emplace_back(oid, std::move(miss));
        for (auto& c : found.citations) {
            ++out.diagnostics.citations_found;
            auto r = index.resolve(c);
            if (!r.resolved()) {
                ++out.diagnostics.unresolved;
                if (r.ambiguous) ++out.diagnostics.ambiguous;
                out.diagnostics.unresolved_citations.emplace_back(oid, std::move(c));
                continue;
            }
            if (*r.case_id == opinion.case_id) {
                ++out.diagnostics.self_citations;
                continue;
            }
            CitationEdge e{opinion.case_id, *r.case_id};
            out.evidence[e].push_back({oid, std::move(c)});
        }
    }
    out.edges.reserve(out.evidence.size());
    for (const auto& [e, _] : out.evidence) out.edges.push_back(e);
    return out;
}

}  // namespace precedent
