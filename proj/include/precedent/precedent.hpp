// SPDX-License-Identifier: Apache-2.0
// Copyright 2025 Precedent Contributors

#pragma once

#include "precedent/error.hpp"
#include "precedent/types.hpp"
#include "precedent/graph_store.hpp"
#include "precedent/corpus_io.hpp"
#include "precedent/citation_parser.hpp"
#include "precedent/ranking.hpp"
#include "precedent/vector_index.hpp"
#include "precedent/reranker.hpp"
#include "precedent/prompts.hpp"
#include "precedent/pipeline.hpp"
#include "precedent/ingest.hpp"
#include "precedent/config.hpp"
#include "precedent/store.hpp"
#include "precedent/service.hpp"
