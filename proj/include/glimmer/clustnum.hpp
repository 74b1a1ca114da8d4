#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include "glimmer/corpus.hpp"
#include "glimmer/sentgraph.hpp"
#include "glimmer/spectral.hpp"

namespace glimmer {

/// Whether ratios inside [1-sigma, 1+sigma) count as neutral (three) or high (two).
enum class TtrBand { Three, Two };

struct TtrConfig {
    double sigma = 0.05;
    double beta = 4.0;
    int sample_min = 35;
    int sample_max = 50;
    int reps = 100;
    int d_rounds = 3;
    double d_lower = 1.0;
    double d_upper = 500.0;
    double d_tolerance = 1e-3;
    double d_fallback = 50.0;
    TtrBand band = TtrBand::Three;

    void validate() const;
};

struct LexicalDiversityModel {
    double d_value = 0.0;
    /// Set when the input was too short to sample and d_value is the fallback.
    bool fallback = false;
};

enum class CountMethod { Ttr, Distance, Eigengap, Fixed };

std::string_view to_string(CountMethod m);

struct TtrDiagnostics {
    double ttr_input = 0.0;
    double d_value = 0.0;
    bool d_fallback = false;
    int n_low = 0;
    int n_high = 0;
    int n_neutral = 0;
    double raw = 0.0;  // [n_sent - beta (n_low - n_high)] * TTR_input before flooring
};

struct DistanceScore {
    int k = 0;
    double inter = 0.0;
    double intra = 0.0;
    double score = 0.0;
};

struct ClusterCountResult {
    int k = 1;
    CountMethod method = CountMethod::Fixed;
    int n_sent = 0;
    std::optional<TtrDiagnostics> ttr;
    std::vector<DistanceScore> distance;
    std::vector<double> eigenvalues;
    std::vector<std::string> warnings;
};

nlohmann::json to_json(const ClusterCountResult& r);

// ---------------------------------------------------------------------------
// TTR-based counting

/// Unique tokens over total tokens, compared case-insensitively. Throws on empty input.
double ttr(const std::vector<std::string>& tokens);

/// Expected TTR of an N-token sample under diversity D: (D/N)[(1 + 2N/D)^(1/2) - 1].
double ttr_mckee(double n, const LexicalDiversityModel& model);

/// Lowercased non-punctuation tokens of every sentence, in order.
std::vector<std::string> word_stream(const DocumentSet& ds);
std::vector<std::string> sentence_words(const AnnotatedSentence& s);

/// Least-squares fit of D to a TTR-vs-sample-size curve by golden-section search.
double fit_d(const std::vector<int>& sizes, const std::vector<double>& curve, const TtrConfig& cfg);

/// Random-sampling estimate of D (mean over cfg.d_rounds fits).
LexicalDiversityModel estimate_d(const std::vector<std::string>& words, const TtrConfig& cfg, std::uint64_t seed);
LexicalDiversityModel estimate_d(const DocumentSet& ds, const TtrConfig& cfg, std::uint64_t seed);

enum class TtrClass { Low, High, Neutral };

TtrClass classify_ratio(double ratio, const TtrConfig& cfg);
TtrClass classify_sentence(const AnnotatedSentence& s, const LexicalDiversityModel& model, const TtrConfig& cfg);

/// floor([n_sent - beta (n_low - n_high)] * ttr_input), clamped to [1, n_sent].
int ttr_cluster_formula(int n_sent, int n_low, int n_high, double beta, double ttr_input);

ClusterCountResult cluster_count_ttr(const DocumentSet& ds, const TtrConfig& cfg, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Graph-based counting

/// All-pairs hop distances; unreachable pairs get `unreachable` (default: n).
Eigen::MatrixXi floyd_warshall(const SentenceGraph& g, std::optional<int> unreachable = std::nullopt);

struct KRange {
    int lo = 2;
    int hi = 2;
};

/// [2, min(15, ceil(n/2))], never above n.
KRange default_k_range(Eigen::Index n);

/// Mean inter-cluster distance minus mean intra-cluster distance for one partition.
DistanceScore score_partition(const Eigen::MatrixXi& dist, const std::vector<int>& labels);

ClusterCountResult cluster_count_distance(const SentenceGraph& g, std::optional<KRange> k_range, std::uint64_t seed,
                                          const SpectralOptions& spectral = {},
                                          std::optional<int> unreachable = std::nullopt);

/// argmax_i (lambda_{i+1} - lambda_i) over i in [1, min(k_max, n-1)], smallest i on ties.
int eigengap_k(const std::vector<double>& ascending_eigenvalues, int k_max);

ClusterCountResult cluster_count_eigengap(const SentenceGraph& g, int k_max);

}  // namespace glimmer
