// SPDX-License-Identifier: Apache-2.0
// Copyright 2025 Precedent Contributors

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace precedent {

enum class Errc {
    DuplicateId,
    DanglingReference,
    InvalidFactorKind,
    InvalidField,
    SelfCitation,
    UnknownCase,
    UnknownCourt,
    AppealCycle,
    GraphFrozen,
    MalformedInput,
    EmptyGraph,
    EmptyInput,
    InvalidConfig,
    DimensionMismatch,
    ZeroVector,
    EmptyIndex,
    InvalidWeights,
    InvalidArgument,
    AnalyzerUnavailable,
    EmptyCorpus,
    Io,
    Upstream,
};

constexpr std::string_view to_string(Errc code) noexcept {
    switch (code) {
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::DanglingReference: return "DanglingReference";
    case Errc::InvalidFactorKind: return "InvalidFactorKind";
    case Errc::InvalidField: return "InvalidField";
    case Errc::SelfCitation: return "SelfCitation";
    case Errc::UnknownCase: return "UnknownCase";
    case Errc::UnknownCourt: return "UnknownCourt";
    case Errc::AppealCycle: return "AppealCycle";
    case Errc::GraphFrozen: return "GraphFrozen";
    case Errc::MalformedInput: return "MalformedInput";
    case Errc::EmptyGraph: return "EmptyGraph";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::EmptyIndex: return "EmptyIndex";
    case Errc::InvalidWeights: return "InvalidWeights";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::AnalyzerUnavailable: return "AnalyzerUnavailable";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::Io: return "Io";
    case Errc::Upstream: return "Upstream";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code and,
/// where one applies, the offending field name.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message, std::string field = {})
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code),
          field_(std::move(field)),
          detail_(message) {}

    [[nodiscard]] Errc code() const noexcept { return code_; }
    [[nodiscard]] const std::string& field() const noexcept { return field_; }
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

private:
    Errc code_;
    std::string field_;
    std::string detail_;
};

}  // namespace precedent
