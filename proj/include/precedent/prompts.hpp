// SPDX-License-Identifier: Apache-2.0
// Copyright 2025 Precedent Contributors
//
// Deterministic prompt templates. Nothing here calls a model; the strings are
// handed to a CompletionClient when one is configured.

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "precedent/error.hpp"
#include "precedent/graph_store.hpp"
#include "precedent/types.hpp"

namespace precedent {

inline std::string_view factor_heading(Factor f) noexcept {
    switch (f) {
    case Factor::Facts: return "Facts of the case";
    case Factor::Purpose: return "Purpose and character of the use";
    case Factor::Nature: return "Nature of the copyrighted work";
    case Factor::Amount: return "Amount and substantiality of the portion used";
    case Factor::Market: return "Effect of the use upon the potential market for the work";
    case Factor::Conclusion: return "Conclusion of the court";
    }
    return "";
}

inline constexpr std::string_view kNotExtracted = "not extracted";

/// Asks for verbatim quotations from one opinion, keyed by the six sections.
inline std::string build_factor_extraction_prompt(const OpinionNode& opinion) {
    std::string p;
    p += "You are reviewing a United States copyright opinion that applies the fair use doctrine.\n";
    p += "Identify the paragraphs of the opinion that address each section listed below.\n\n";
    for (Factor f : kAllFactors) {
        p += "- ";
        p += to_string(f);
        p += ": ";
        p += factor_heading(f);
        p += '\n';
    }
    p += "\nCopy each paragraph exactly as it appears in the opinion text. Return direct "
         "quotations only; do not paraphrase, summarize or add commentary. If the opinion "
         "does not discuss a section, return an empty list for it.\n";
    p += "Answer with a single JSON object whose keys are Facts, Purpose, Nature, Amount, "
         "Market and Conclusion and whose values are lists of quoted paragraphs.\n\n";
    p += "Opinion id: " + opinion.opinion_id + "\n";
    p += "Opinion type: " + std::string(to_string(opinion.opinion_kind)) + "\n";
    p += "<opinion>\n" + opinion.full_text + "\n</opinion>\n";
    return p;
}

/// The precedent passages handed to the per-case analysis prompt.
struct CasePassages {
    CaseId case_id;
    std::string case_name;
    int year = 0;
    std::string court_name;
    std::map<Factor, std::vector<std::string>> passages;
};

/// Step-by-step comparison of a dispute with one precedent, one factor at a time.
inline std::string build_case_analysis_prompt(std::string_view dispute, const CasePassages& c) {
    if (dispute.empty()) throw Error(Errc::EmptyInput, "dispute text is empty", "text");
    auto block = [&c](Factor f) {
        std::string s;
        auto it = c.passages.find(f);
        if (it == c.passages.end() || it->second.empty()) {
            s += "  (" + std::string(kNotExtracted) + ")\n";
            return s;
        }
        for (const auto& text : it->second) s += "  \"" + text + "\"\n";
        return s;
    };

    std::string p;
    p += "You are assisting with a fair use analysis under United States copyright law.\n";
    p += "Compare the dispute with the precedent below, reasoning step by step through each "
         "statutory factor before stating how the precedent bears on the dispute.\n\n";
    p += "Dispute:\n" + std::string(dispute) + "\n\n";
    p += "Precedent: " + c.case_name + " (" + c.court_name + ", " + std::to_string(c.year) +
         "), id " + c.case_id + "\n\n";
    p += "[Facts] " + std::string(factor_heading(Factor::Facts)) + ":\n" + block(Factor::Facts) + "\n";
    int step = 1;
    for (Factor f : kStatutoryFactors) {
        p += "Step " + std::to_string(step++) + " [" + std::string(to_string(f)) + "] " +
             std::string(factor_heading(f)) + "\n";
        p += "Precedent passages:\n" + block(f);
        p += "Relate these passages to the dispute's facts for this factor.\n\n";
    }
    p += "[Conclusion] " + std::string(factor_heading(Factor::Conclusion)) + ":\n" +
         block(Factor::Conclusion) + "\n";
    p += "Quote the precedent where you rely on it. Finish with one paragraph per factor "
         "stating whether it favors or disfavors fair use in the dispute.\n";
    return p;
}

struct CaseAnalysis {
    CaseId case_id;
    std::string case_name;
    std::string analysis;
};

/// Combines per-case analyses (in rank order) into a request for a
/// structured four-factor evaluation.
inline std::string build_synthesis_prompt(const std::vector<CaseAnalysis>& analyses) {
    if (analyses.empty()) throw Error(Errc::EmptyInput, "no case analyses to synthesize", "analyses");
    std::string p;
    p += "Below are analyses of " + std::to_string(analyses.size()) +
         " precedents, ordered by retrieval rank, each comparing the precedent with the "
         "same dispute.\n\n";
    for (std::size_t i = 0; i < analyses.size(); ++i) {
        const auto& a = analyses[i];
        p += "=== Case " + std::to_string(i + 1) + ": " + a.case_name + " (" + a.case_id + ") ===\n";
        p += a.analysis + "\n\n";
    }
    p += "Using only these analyses, produce a structured fair use evaluation of the dispute "
         "with the following sections:\n";
    for (Factor f : kStatutoryFactors) {
        p += "- " + std::string(to_string(f)) + ": " + std::string(factor_heading(f)) +
             " (which precedents support your assessment and why)\n";
    }
    p += "- Overall: whether the use is likely fair, weighing the four factors together.\n";
    return p;
}

/// Prompt for a model-backed factor analysis of a dispute.
inline std::string build_factor_analysis_prompt(std::string_view dispute) {
    std::string p;
    p += "Analyze how the following dispute relates to each of the four statutory fair use "
         "factors. For each factor, write a short search query describing the facts of the "
         "dispute that matter for that factor.\n\n";
    for (Factor f : kStatutoryFactors) {
        p += "- " + std::string(to_string(f)) + ": " + std::string(factor_heading(f)) + "\n";
    }
    p += "\nAnswer with a single JSON object with keys Purpose, Nature, Amount, Market and "
         "rationale.\n\nDispute:\n" + std::string(dispute) + "\n";
    return p;
}

}  // namespace precedent
