#include "glimmer/rouge.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace glimmer {

namespace {

RougeScore make_score(double overlap, double cand_total, double ref_total) {
    RougeScore s;
    if (cand_total > 0) s.precision = overlap / cand_total;
    if (ref_total > 0) s.recall = overlap / ref_total;
    if (s.precision + s.recall > 0) s.f1 = 2 * s.precision * s.recall / (s.precision + s.recall);
    return s;
}

std::map<std::vector<std::string>, int> ngram_counts(const std::vector<std::string>& tokens, int n) {
    std::map<std::vector<std::string>, int> counts;
    const auto len = static_cast<std::ptrdiff_t>(tokens.size());
    for (std::ptrdiff_t i = 0; i + n <= len; ++i) ++counts[{tokens.begin() + i, tokens.begin() + i + n}];
    return counts;
}

RougeScore best_of(const std::vector<RougeScore>& scores) {
    RougeScore best;
    for (const auto& s : scores) {
        if (s.f1 > best.f1) best = s;
    }
    return best;
}

}  // namespace

std::vector<std::string> rouge_tokens(std::string_view text) {
    std::vector<std::string> out;
    for (const auto& t : tokenize(text)) out.push_back(to_lower(t.text));
    return out;
}

RougeScore rouge_n(const std::vector<std::string>& candidate, const std::vector<std::vector<std::string>>& references,
                   int n) {
    if (n < 1) throw std::invalid_argument("rouge_n: n must be >= 1");
    if (candidate.empty()) return {};
    const auto cand = ngram_counts(candidate, n);
    int cand_total = 0;
    for (const auto& [g, c] : cand) cand_total += c;
    std::vector<RougeScore> scores;
    for (const auto& ref : references) {
        const auto rc = ngram_counts(ref, n);
        int ref_total = 0;
        int overlap = 0;
        for (const auto& [g, c] : rc) {
            ref_total += c;
            if (auto it = cand.find(g); it != cand.end()) overlap += std::min(c, it->second);
        }
        scores.push_back(make_score(overlap, cand_total, ref_total));
    }
    return best_of(scores);
}

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::size_t> row(b.size() + 1, 0);
    for (const auto& x : a) {
        std::size_t diag = 0;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = x == b[j - 1] ? diag + 1 : std::max(row[j], row[j - 1]);
            diag = up;
        }
    }
    return row.back();
}

RougeScore rouge_l(const std::vector<std::string>& candidate, const std::vector<std::vector<std::string>>& references) {
    if (candidate.empty()) return {};
    std::vector<RougeScore> scores;
    for (const auto& ref : references) {
        scores.push_back(make_score(static_cast<double>(lcs_length(candidate, ref)),
                                    static_cast<double>(candidate.size()), static_cast<double>(ref.size())));
    }
    return best_of(scores);
}

std::string first_n_baseline(const DocumentSet& ds, int n) {
    std::vector<std::string> parts;
    for (const auto& s : ds.sentences) {
        if (s.sent_index_in_doc < static_cast<std::size_t>(std::max(n, 0))) parts.push_back(sentence_text(s));
    }
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += ' ';
        out += p;
    }
    return out;
}

CorpusReport evaluate_corpus(const std::vector<std::string>& system_outputs,
                             const std::vector<std::vector<std::string>>& references) {
    if (system_outputs.size() != references.size()) {
        throw DataError("evaluate_corpus: " + std::to_string(system_outputs.size()) + " system outputs but " +
                        std::to_string(references.size()) + " reference sets");
    }
    CorpusReport report;
    for (std::size_t i = 0; i < system_outputs.size(); ++i) {
        const auto cand = rouge_tokens(system_outputs[i]);
        std::vector<std::vector<std::string>> refs;
        for (const auto& r : references[i]) refs.push_back(rouge_tokens(r));
        SampleScores s{rouge_n(cand, refs, 1).f1, rouge_n(cand, refs, 2).f1, rouge_l(cand, refs).f1};
        report.mean.r1 += s.r1;
        report.mean.r2 += s.r2;
        report.mean.rl += s.rl;
        report.per_sample.push_back(s);
    }
    if (!report.per_sample.empty()) {
        const auto n = static_cast<double>(report.per_sample.size());
        report.mean.r1 /= n;
        report.mean.r2 /= n;
        report.mean.rl /= n;
    }
    return report;
}

nlohmann::json to_json(const CorpusReport& report) {
    auto row = [](const SampleScores& s) { return nlohmann::json{{"r1", s.r1}, {"r2", s.r2}, {"rl", s.rl}}; };
    nlohmann::json per = nlohmann::json::array();
    for (const auto& s : report.per_sample) per.push_back(row(s));
    return {{"per_sample", std::move(per)}, {"mean", row(report.mean)}};
}

}  // namespace glimmer
