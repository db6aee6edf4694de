// SPDX-License-Identifier: Apache-2.0
// Copyright 2025 Precedent Contributors

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "precedent/error.hpp"

namespace precedent {

using CaseId = std::string;
using CourtId = std::string;
using OpinionId = std::string;
using PassageId = std::string;
using ChunkId = std::string;

/// Section of an opinion that a passage was extracted for: the facts, the
/// four statutory fair use factors, and the conclusion.
enum class Factor { Facts, Purpose, Nature, Amount, Market, Conclusion };

inline constexpr std::array<Factor, 6> kAllFactors = {
    Factor::Facts, Factor::Purpose, Factor::Nature,
    Factor::Amount, Factor::Market, Factor::Conclusion};

/// The four statutory factors only.
inline constexpr std::array<Factor, 4> kStatutoryFactors = {
    Factor::Purpose, Factor::Nature, Factor::Amount, Factor::Market};

constexpr std::string_view to_string(Factor f) noexcept {
    switch (f) {
    case Factor::Facts: return "Facts";
    case Factor::Purpose: return "Purpose";
    case Factor::Nature: return "Nature";
    case Factor::Amount: return "Amount";
    case Factor::Market: return "Market";
    case Factor::Conclusion: return "Conclusion";
    }
    return "?";
}

constexpr bool is_valid(Factor f) noexcept {
    const auto v = static_cast<int>(f);
    return v >= static_cast<int>(Factor::Facts) && v <= static_cast<int>(Factor::Conclusion);
}

inline std::optional<Factor> try_parse_factor(std::string_view s) noexcept {
    for (Factor f : kAllFactors) {
        if (to_string(f) == s) return f;
    }
    return std::nullopt;
}

inline Factor parse_factor(std::string_view s) {
    if (auto f = try_parse_factor(s)) return *f;
    throw Error(Errc::InvalidFactorKind, "unknown factor '" + std::string(s) + "'", "factor");
}

enum class OpinionKind { majority, concurrence, dissent, appellate };

constexpr std::string_view to_string(OpinionKind k) noexcept {
    switch (k) {
    case OpinionKind::majority: return "majority";
    case OpinionKind::concurrence: return "concurrence";
    case OpinionKind::dissent: return "dissent";
    case OpinionKind::appellate: return "appellate";
    }
    return "?";
}

inline OpinionKind parse_opinion_kind(std::string_view s) {
    for (auto k : {OpinionKind::majority, OpinionKind::concurrence, OpinionKind::dissent,
                   OpinionKind::appellate}) {
        if (to_string(k) == s) return k;
    }
    throw Error(Errc::InvalidField, "unknown opinion kind '" + std::string(s) + "'",
                "opinion_kind");
}

}  // namespace precedent
