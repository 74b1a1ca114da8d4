#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "glimmer/corpus.hpp"

namespace glimmer {

struct RougeScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;

    bool operator==(const RougeScore&) const = default;
};

/// Scoring tokens: corpus tokenizer, lowercased. No stemming.
std::vector<std::string> rouge_tokens(std::string_view text);

/// Clipped n-gram overlap, maximum f1 over the references.
RougeScore rouge_n(const std::vector<std::string>& candidate, const std::vector<std::vector<std::string>>& references,
                   int n);
/// LCS-based score, maximum f1 over the references.
RougeScore rouge_l(const std::vector<std::string>& candidate, const std::vector<std::vector<std::string>>& references);

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// First n sentences of each document, concatenated in document order.
std::string first_n_baseline(const DocumentSet& ds, int n);

struct SampleScores {
    double r1 = 0.0;
    double r2 = 0.0;
    double rl = 0.0;
};

struct CorpusReport {
    std::vector<SampleScores> per_sample;
    SampleScores mean;
};

CorpusReport evaluate_corpus(const std::vector<std::string>& system_outputs,
                             const std::vector<std::vector<std::string>>& references);

nlohmann::json to_json(const CorpusReport& report);

}  // namespace glimmer
