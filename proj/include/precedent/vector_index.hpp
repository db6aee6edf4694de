// SPDX-License-Identifier: Apache-2.0
// Copyright 2025 Precedent Contributors

#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "precedent/error.hpp"
#include "precedent/graph_store.hpp"
#include "precedent/types.hpp"

namespace precedent {

// ---------------------------------------------------------------------------
// Embeddings
// ---------------------------------------------------------------------------

class EmbeddingVector {
public:
    EmbeddingVector() = default;
    explicit EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {
        double sq = 0.0;
        for (double v : values_) sq += v * v;
        norm_ = std::sqrt(sq);
    }

    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    [[nodiscard]] double norm() const noexcept { return norm_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return values_.size(); }

    bool operator==(const EmbeddingVector& o) const { return values_ == o.values_; }

private:
    std::vector<double> values_;
    double norm_ = 0.0;
};

/// dot(u, v) / (|u| |v|), clamped to [-1, 1] against rounding.
inline double cosine(const EmbeddingVector& u, const EmbeddingVector& v) {
    if (u.dimension() != v.dimension()) {
        throw Error(Errc::DimensionMismatch, "cosine of vectors with dimensions " +
                                                 std::to_string(u.dimension()) + " and " +
                                                 std::to_string(v.dimension()));
    }
    if (u.norm() == 0.0 || v.norm() == 0.0) throw Error(Errc::ZeroVector, "cosine of a zero vector");
    double dot = 0.0;
    const auto& a = u.values();
    const auto& b = v.values();
    for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    return std::clamp(dot / (u.norm() * v.norm()), -1.0, 1.0);
}

class Embedder {
public:
    virtual ~Embedder() = default;
    [[nodiscard]] virtual std::size_t dimension() const = 0;
    [[nodiscard]] virtual std::string tag() const = 0;
    [[nodiscard]] virtual EmbeddingVector embed(std::string_view text) const = 0;

    [[nodiscard]] virtual std::vector<EmbeddingVector> embed_batch(
        const std::vector<std::string>& texts) const {
        std::vector<EmbeddingVector> out;
        out.reserve(texts.size());
        for (const auto& t : texts) out.push_back(embed(t));
        return out;
    }
};

/// Lower-cased alphanumeric word tokens.
inline std::vector<std::string> word_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (ch == '\'' && !cur.empty()) {
            continue;
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

inline std::uint64_t fnv1a64(std::string_view s) noexcept {
    std::uint64_t h = 14695981039346656037ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

/// Deterministic hashed bag-of-words embedder. Term counts are hashed into
/// coordinates 1..dimension-1 and the vector is L2-normalised; coordinate 0 is
/// reserved for text without any word token.
class ReferenceEmbedder final : public Embedder {
public:
    explicit ReferenceEmbedder(std::size_t dimension = 1024) : dimension_(dimension) {
        if (dimension_ < 2) {
            throw Error(Errc::InvalidConfig, "reference embedder needs dimension >= 2", "dimension");
        }
    }

    [[nodiscard]] std::size_t dimension() const override { return dimension_; }
    [[nodiscard]] std::string tag() const override {
        return "reference-bow-" + std::to_string(dimension_);
    }

    [[nodiscard]] std::size_t bucket_of(std::string_view token) const noexcept {
        return 1 + static_cast<std::size_t>(fnv1a64(token) % (dimension_ - 1));
    }

    [[nodiscard]] EmbeddingVector embed(std::string_view text) const override {
        std::vector<double> v(dimension_, 0.0);
        const auto tokens = word_tokens(text);
        if (tokens.empty()) {
            v[0] = 1.0;
            return EmbeddingVector(std::move(v));
        }
        for (const auto& t : tokens) v[bucket_of(t)] += 1.0;
        double sq = 0.0;
        for (double x : v) sq += x * x;
        const double inv = 1.0 / std::sqrt(sq);
        for (double& x : v) x *= inv;
        return EmbeddingVector(std::move(v));
    }

private:
    std::size_t dimension_;
};

// ---------------------------------------------------------------------------
// Chunking
// ---------------------------------------------------------------------------

struct Chunk {
    ChunkId chunk_id;
    PassageId passage_id;
    Factor factor = Factor::Facts;
    std::string text;
    int token_estimate = 0;

    bool operator==(const Chunk&) const = default;
};

inline constexpr int kMinChunkTokens = 32;
inline constexpr int kDefaultChunkTokens = 256;

/// Whitespace-delimited token count.
inline int estimate_tokens(std::string_view text) {
    int n = 0;
    bool in_word = false;
    for (char c : text) {
        const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
        if (!space && !in_word) ++n;
        in_word = !space;
    }
    return n;
}

namespace detail {

inline bool is_abbreviation(std::string_view word) {
    static const std::set<std::string_view> kAbbrev = {
        "v.",    "vs.",  "Inc.",  "Corp.", "Co.",  "Ltd.", "No.",   "Nos.", "U.S.", "F.",
        "Cir.",  "Dist.", "Supp.", "Ct.",  "S.",   "Mr.",  "Ms.",   "Mrs.", "Dr.",  "Jr.",
        "Sr.",   "e.g.", "i.e.",  "etc.", "cf.",  "Cf.",  "id.",   "Id.",  "L.",   "Ed.",
        "Fed.",  "Cal.", "N.Y.",  "Rptr.", "al.", "App.", "Cong.", "Rep.", "Stat.", "Sec.",
        "Jan.",  "Feb.", "Mar.",  "Apr.", "Jun.", "Jul.", "Aug.",  "Sep.", "Sept.", "Oct.",
        "Nov.",  "Dec.", "Bros.", "Ass'n.", "Int'l.", "Ent.", "St."};
    if (kAbbrev.contains(word)) return true;
    // Single-letter initials such as "J." or "A."
    return word.size() == 2 && std::isupper(static_cast<unsigned char>(word[0])) && word[1] == '.';
}

}  // namespace detail

/// Splits text into sentence spans [begin, end) over the original string.
/// A boundary is a '.', '!' or '?' (plus closing quotes/brackets) followed by
/// whitespace and an upper-case letter, quote or bracket, where the word
/// ending there is not a known abbreviation.
inline std::vector<std::pair<std::size_t, std::size_t>> split_sentences(std::string_view text) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const std::size_t n = text.size();
    std::size_t start = 0;
    auto skip_space = [&](std::size_t i) {
        while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        return i;
    };
    start = skip_space(0);
    for (std::size_t i = start; i < n; ++i) {
        const char c = text[i];
        if (c != '.' && c != '!' && c != '?') continue;
        std::size_t end = i + 1;
        while (end < n && (text[end] == '"' || text[end] == '\'' || text[end] == ')' ||
                           text[end] == ']')) {
            ++end;
        }
        if (end < n && !std::isspace(static_cast<unsigned char>(text[end]))) continue;
        const std::size_t next = skip_space(end);
        if (next < n) {
            const auto nc = static_cast<unsigned char>(text[next]);
            if (!(std::isupper(nc) || nc == '"' || nc == '(' || nc == '[' || nc == '\'')) continue;
        }
        if (c == '.') {
            std::size_t wb = i;
            while (wb > start && !std::isspace(static_cast<unsigned char>(text[wb - 1]))) --wb;
            if (detail::is_abbreviation(text.substr(wb, i + 1 - wb))) continue;
        }
        out.emplace_back(start, end);
        start = next;
        i = next == 0 ? 0 : next - 1;
    }
    std::size_t tail_end = n;
    while (tail_end > start && std::isspace(static_cast<unsigned char>(text[tail_end - 1]))) --tail_end;
    if (tail_end > start) out.emplace_back(start, tail_end);
    return out;
}

struct ChunkingResult {
    std::vector<Chunk> chunks;
    std::vector<std::string> diagnostics;
};

inline std::string chunk_id_for(const PassageId& passage, std::size_t index) {
    std::ostringstream os;
    os << passage << '#' << std::setw(4) << std::setfill('0') << index;
    return os.str();
}

/// Greedy packing of whole sentences into chunks of at most `max_tokens`
/// estimated tokens. A sentence longer than the limit becomes its own
/// oversized chunk and is reported in diagnostics. Each chunk's text is the
/// exact source substring from its first sentence to its last.
inline ChunkingResult chunk_passage(const FactorPassage& passage, int max_tokens = kDefaultChunkTokens) {
    if (max_tokens < kMinChunkTokens) {
        throw Error(Errc::InvalidArgument,
                    "max_tokens must be >= " + std::to_string(kMinChunkTokens), "max_tokens");
    }
    ChunkingResult out;
    const std::string_view text = passage.text;
    const auto sentences = split_sentences(text);

    std::optional<std::pair<std::size_t, std::size_t>> open;
    int open_tokens = 0;
    auto emit = [&] {
        if (!open) return;
        const auto [b, e] = *open;
        out.chunks.push_back({chunk_id_for(passage.passage_id, out.chunks.size()), passage.passage_id,
                              passage.factor, std::string(text.substr(b, e - b)), open_tokens});
        open.reset();
        open_tokens = 0;
    };
    for (const auto& [b, e] : sentences) {
        const int tokens = estimate_tokens(text.substr(b, e - b));
        if (open && open_tokens + tokens > max_tokens) emit();
        if (!open) {
            open = std::pair{b, e};
            open_tokens = tokens;
        } else {
            open->second = e;
            open_tokens += tokens;
        }
        if (tokens > max_tokens) {
            out.diagnostics.push_back("passage '" + passage.passage_id + "': sentence of " +
                                      std::to_string(tokens) + " tokens exceeds max_tokens " +
                                      std::to_string(max_tokens));
            emit();
        }
    }
    emit();
    return out;
}

// ---------------------------------------------------------------------------
// Exact index
// ---------------------------------------------------------------------------

struct SearchHit {
    std::size_t slot = 0;  // position in VectorIndex::chunks()
    ChunkId chunk_id;
    double similarity = 0.0;

    bool operator==(const SearchHit&) const = default;
};

/// Brute-force cosine index over chunk embeddings.
class VectorIndex {
public:
    VectorIndex() = default;
    VectorIndex(std::size_t dimension, std::string embedder_tag)
        : dimension_(dimension), tag_(std::move(embedder_tag)) {}

    void add(Chunk chunk, EmbeddingVector vector) {
        if (frozen_) throw Error(Errc::GraphFrozen, "index is frozen");
        if (vector.dimension() != dimension_) {
            throw Error(Errc::DimensionMismatch, "chunk '" + chunk.chunk_id + "' has dimension " +
                                                     std::to_string(vector.dimension()) +
                                                     ", index has " + std::to_string(dimension_));
        }
        if (!ids_.insert(chunk.chunk_id).second) {
            throw Error(Errc::DuplicateId, "chunk '" + chunk.chunk_id + "' already indexed", "chunk_id");
        }
        chunks_.push_back(std::move(chunk));
        vectors_.push_back(std::move(vector));
    }

    void freeze() noexcept { frozen_ = true; }
    [[nodiscard]] bool frozen() const noexcept { return frozen_; }
    [[nodiscard]] std::size_t size() const noexcept { return chunks_.size(); }
    [[nodiscard]] bool empty() const noexcept { return chunks_.empty(); }
    [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }
    [[nodiscard]] const std::string& embedder_tag() const noexcept { return tag_; }
    [[nodiscard]] const std::vector<Chunk>& chunks() const noexcept { return chunks_; }
    [[nodiscard]] const std::vector<EmbeddingVector>& vectors() const noexcept { return vectors_; }

    /// Exact top-m by cosine similarity, ties broken by ascending chunk_id.
    /// With a filter only chunks of that factor are candidates.
    [[nodiscard]] std::vector<SearchHit> search(const EmbeddingVector& query, std::size_t m,
                                                std::optional<Factor> filter = std::nullopt) const {
        if (chunks_.empty()) throw Error(Errc::EmptyIndex, "search on an empty index");
        if (m < 1) throw Error(Errc::InvalidArgument, "m must be >= 1", "m");
        std::vector<SearchHit> hits;
        hits.reserve(chunks_.size());
        for (std::size_t i = 0; i < chunks_.size(); ++i) {
            if (filter && chunks_[i].factor != *filter) continue;
            hits.push_back({i, chunks_[i].chunk_id, cosine(query, vectors_[i])});
        }
        auto better = [](const SearchHit& a, const SearchHit& b) {
            if (a.similarity != b.similarity) return a.similarity > b.similarity;
            return a.chunk_id < b.chunk_id;
        };
        const std::size_t keep = std::min(m, hits.size());
        std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(keep), hits.end(),
                          better);
        hits.resize(keep);
        return hits;
    }

    /// Header record {dimension, count, embedder_tag}, then one record per
    /// chunk {chunk_id, passage_id, factor, vector, text, token_estimate}.
    void save(std::ostream& out) const {
        out << nlohmann::json{{"dimension", dimension_}, {"count", chunks_.size()}, {"embedder_tag", tag_}}
                   .dump()
            << '\n';
        for (std::size_t i = 0; i < chunks_.size(); ++i) {
            const auto& c = chunks_[i];
            nlohmann::json j{{"chunk_id", c.chunk_id},
                             {"passage_id", c.passage_id},
                             {"factor", std::string(to_string(c.factor))},
                             {"vector", vectors_[i].values()},
                             {"text", c.text},
                             {"token_estimate", c.token_estimate}};
            out << j.dump() << '\n';
        }
    }

    static VectorIndex load(std::istream& in) {
        std::string line;
        std::size_t line_no = 0;
        auto next_json = [&]() -> std::optional<nlohmann::json> {
            while (std::getline(in, line)) {
                ++line_no;
                if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
                try {
                    return nlohmann::json::parse(line);
                } catch (const nlohmann::json::exception& e) {
                    throw Error(Errc::MalformedInput, "index line " + std::to_string(line_no) + ": " + e.what());
                }
            }
            return std::nullopt;
        };
        auto header = next_json();
        if (!header) throw Error(Errc::MalformedInput, "index file has no header record");
        try {
            VectorIndex idx(header->at("dimension").get<std::size_t>(),
                            header->at("embedder_tag").get<std::string>());
            const auto count = header->at("count").get<std::size_t>();
            for (std::size_t k = 0; k < count; ++k) {
                auto j = next_json();
                if (!j) {
                    throw Error(Errc::MalformedInput, "index truncated: expected " + std::to_string(count) +
                                                          " chunks, found " + std::to_string(k));
                }
                Chunk c{j->at("chunk_id").get<std::string>(), j->at("passage_id").get<std::string>(),
                        parse_factor(j->at("factor").get<std::string>()),
                        j->value("text", std::string{}), j->value("token_estimate", 0)};
                idx.add(std::move(c), EmbeddingVector(j->at("vector").get<std::vector<double>>()));
            }
            idx.freeze();
            return idx;
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::MalformedInput, "index line " + std::to_string(line_no) + ": " + e.what());
        }
    }

private:
    std::size_t dimension_ = 0;
    std::string tag_;
    std::vector<Chunk> chunks_;
    std::vector<EmbeddingVector> vectors_;
    std::set<ChunkId> ids_;
    bool frozen_ = false;
};

struct IndexBuild {
    VectorIndex index;
    std::vector<std::string> diagnostics;
};

/// Chunks every passage of the graph (in passage-id order), embeds the chunks
/// and returns a frozen index.
inline IndexBuild build_index(const KnowledgeGraph& g, const Embedder& embedder,
                              int max_tokens = kDefaultChunkTokens) {
    IndexBuild out{VectorIndex(embedder.dimension(), embedder.tag()), {}};
    std::vector<Chunk> chunks;
    for (const auto& [_, p] : g.passages()) {
        auto r = chunk_passage(p, max_tokens);
        for (auto& c : r.chunks) chunks.push_back(std::move(c));
        for (auto& d : r.diagnostics) out.diagnostics.push_back(std::move(d));
    }
    std::vector<std::string> texts;
    texts.reserve(chunks.size());
    for (const auto& c : chunks) texts.push_back(c.text);
    auto vectors = embedder.embed_batch(texts);
    if (vectors.size() != chunks.size()) {
        throw Error(Errc::Upstream, "embedder returned " + std::to_string(vectors.size()) +
                                        " vectors for " + std::to_string(chunks.size()) + " texts");
    }
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        out.index.add(std::move(chunks[i]), std::move(vectors[i]));
    }
    out.index.freeze();
    return out;
}

}  // namespace precedent
