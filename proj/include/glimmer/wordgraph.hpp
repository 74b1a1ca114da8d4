#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "glimmer/corpus.hpp"

namespace glimmer {

/// A token occurrence. Positions count the START sentinel as 0, so the
/// first word sits at 1 and END at length + 1.
struct Occurrence {
    std::size_t sentence = 0;
    std::size_t position = 0;
};

struct WordNode {
    std::string lower;
    Pos pos = Pos::Other;
    bool sentinel = false;
    std::vector<Occurrence> occurrences;      // at most one per sentence
    std::vector<std::pair<std::string, int>> surfaces;  // casing variants, first-seen order

    int freq() const { return static_cast<int>(occurrences.size()); }
    /// Most frequent original casing; earliest seen on ties.
    const std::string& surface() const;
};

struct WordGraphOptions {
    /// Count only adjacent co-occurrences in the edge-weight denominator.
    bool adjacent_only_distance = false;
};

class WordGraph {
public:
    static constexpr std::size_t kStart = 0;
    static constexpr std::size_t kEnd = 1;

    std::size_t node_count() const { return nodes_.size(); }
    const WordNode& node(std::size_t id) const { return nodes_[id]; }
    const std::vector<WordNode>& nodes() const { return nodes_; }

    /// Outgoing (target, weight) pairs in ascending target order.
    const std::vector<std::pair<std::size_t, double>>& out_edges(std::size_t id) const { return out_[id]; }
    std::optional<double> weight(std::size_t from, std::size_t to) const;
    std::size_t edge_count() const;

    /// Node sequence (START ... END) of every input sentence.
    const std::vector<std::vector<std::size_t>>& sentence_paths() const { return sentence_paths_; }
    std::size_t sentence_count() const { return sentence_paths_.size(); }

private:
    friend WordGraph build_word_graph(const std::vector<AnnotatedSentence>&, const WordGraphOptions&);

    std::vector<WordNode> nodes_;
    std::vector<std::vector<std::pair<std::size_t, double>>> out_;
    std::vector<std::vector<std::size_t>> sentence_paths_;
};

WordGraph build_word_graph(const std::vector<AnnotatedSentence>& cluster, const WordGraphOptions& options = {});

/// [(f(i) + f(j)) / sum_s D_s(i,j)^-1] / (f(i) f(j)), recomputed from the
/// nodes' occurrence lists. Sentinels have frequency = sentence count.
double edge_weight(const WordGraph& g, std::size_t from, std::size_t to, const WordGraphOptions& options = {});

struct PathCandidate {
    std::vector<std::size_t> nodes;  // START ... END
    double weight_sum = 0.0;
    double fluency_sum = 0.0;
    double score = 0.0;  // weight_sum / fluency_sum

    bool operator==(const PathCandidate&) const = default;
};

struct PathFilter {
    int min_tokens = 6;  // non-punctuation words
    bool require_verb = true;
};

bool path_is_valid(const WordGraph& g, const std::vector<std::size_t>& nodes, const PathFilter& filter);
/// Edge weights summed in path order.
double path_weight(const WordGraph& g, const std::vector<std::size_t>& nodes);

/// Up to k valid loopless START->END paths in nondecreasing weight order
/// (Yen's deviation algorithm). At most `max_enumerated` paths are examined;
/// when none pass the filter the unfiltered shortest path is returned alone.
std::vector<PathCandidate> k_shortest_paths(const WordGraph& g, int k, const PathFilter& filter = {},
                                            int max_enumerated = 2000);

/// Trigram model with add-one smoothing over the training vocabulary.
class NgramModel {
public:
    static constexpr const char* kBos = "<s>";
    static constexpr const char* kEos = "</s>";

    NgramModel() = default;
    explicit NgramModel(const std::vector<std::vector<std::string>>& sentences);
    static NgramModel from_docset(const DocumentSet& ds);

    /// (c(w1 w2 w3) + 1) / (c(w1 w2 *) + V)
    double probability(const std::string& w1, const std::string& w2, const std::string& w3) const;
    std::size_t vocabulary_size() const { return vocabulary_; }

private:
    static std::string key(const std::string& a, const std::string& b) { return a + '\x1f' + b; }
    std::unordered_map<std::string, int> trigrams_;
    std::unordered_map<std::string, int> contexts_;
    std::size_t vocabulary_ = 0;
};

/// Sum of padded-trigram probabilities of a lowercased word sequence.
double trigram_fluency(const std::vector<std::string>& words, const NgramModel& model);
double trigram_fluency(const WordGraph& g, const PathCandidate& path, const NgramModel& model);

struct CompressionConfig {
    int k_paths = 50;
    int max_enumerated = 2000;
    PathFilter filter;
    bool fluency = true;
    WordGraphOptions graph;
};

/// Realizes a path with each node's most frequent casing; punctuation re-attached.
std::string realize(const WordGraph& g, const std::vector<std::size_t>& nodes);

/// Selected compression path plus its realization.
struct ClusterSummary {
    std::string text;
    PathCandidate path;
    std::size_t candidates = 0;
};

ClusterSummary compress_cluster(const std::vector<AnnotatedSentence>& cluster, const CompressionConfig& cfg,
                                const NgramModel& model);
std::string summarize_cluster(const std::vector<AnnotatedSentence>& cluster, const CompressionConfig& cfg,
                              const NgramModel& model);

nlohmann::json word_graph_to_json(const WordGraph& g);

}  // namespace glimmer
