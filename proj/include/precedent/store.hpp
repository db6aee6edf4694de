// SPDX-License-Identifier: Apache-2.0
// Copyright 2025 Precedent Contributors
//
// On-disk store: the corpus records of a frozen graph in one JSONL file, with
// an optional sibling "<store>.index.jsonl" caching chunk embeddings.

#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

#include "precedent/config.hpp"
#include "precedent/corpus_io.hpp"
#include "precedent/http_clients.hpp"
#include "precedent/pipeline.hpp"
#include "precedent/vector_index.hpp"

namespace precedent {

inline std::filesystem::path index_path_for(const std::filesystem::path& store) {
    return std::filesystem::path(store.string() + ".index.jsonl");
}

inline KnowledgeGraph load_store(const std::filesystem::path& store) {
    std::ifstream in(store);
    if (!in) throw Error(Errc::Io, "cannot open store '" + store.string() + "'", "store");
    return import_graph(in, store.filename().string());
}

inline void write_store(const KnowledgeGraph& g, const std::filesystem::path& store) {
    std::ofstream out(store, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::Io, "cannot write store '" + store.string() + "'", "store");
    export_graph(g, out);
    if (!out) throw Error(Errc::Io, "write to '" + store.string() + "' failed", "store");
}

inline std::shared_ptr<const Embedder> make_embedder(const ServiceConfig& config) {
    if (config.embedder_mode == "http") {
        return std::make_shared<HttpEmbedder>(config.embedder_endpoint, config.embedder_dimension);
    }
    return std::make_shared<ReferenceEmbedder>(config.embedder_dimension);
}

/// Loads the store and attaches an index: the cached index file is used when
/// its embedder tag matches, otherwise the index is rebuilt (and cached when
/// `write_cache` is set).
inline std::shared_ptr<const Corpus> open_corpus(const std::filesystem::path& store,
                                                 std::shared_ptr<const Embedder> embedder,
                                                 const CorpusOptions& options = {}, bool write_cache = false) {
    auto graph = load_store(store);
    const auto cache = index_path_for(store);
    if (std::filesystem::exists(cache)) {
        std::ifstream in(cache);
        auto index = VectorIndex::load(in);
        if (index.embedder_tag() == embedder->tag()) {
            auto scores = compute_authority(graph, options.pagerank);
            return std::make_shared<const Corpus>(std::move(graph), std::move(index), std::move(scores),
                                                  std::move(embedder));
        }
    }
    auto corpus = std::make_shared<const Corpus>(Corpus::build(std::move(graph), std::move(embedder), options));
    if (write_cache) {
        std::ofstream out(cache, std::ios::binary | std::ios::trunc);
        if (out) corpus->index().save(out);
    }
    return corpus;
}

}  // namespace precedent
