#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include "glimmer/corpus.hpp"
#include "glimmer/lexsem.hpp"

namespace glimmer {

/// Bit flags recording which indicator(s) connected a sentence pair.
enum IndicatorBits : std::uint8_t {
    kDeverbal = 1u << 0,
    kConjunction = 1u << 1,
    kEntity = 1u << 2,
    kSimilarity = 1u << 3,
};

/// The 39 default sentence-initial connectives.
const std::vector<std::string>& default_conjunctions();
/// be/have/do forms, modals, seem, become, get.
const std::set<std::string>& default_non_notional_verbs();

struct IndicatorConfig {
    std::vector<std::string> conjunctions = default_conjunctions();
    double sim_sentence_threshold = 0.98;
    double sim_word_threshold = 0.65;
    int neighbor_m = 5;
    std::set<std::string> non_notional_verbs = default_non_notional_verbs();

    /// Throws std::invalid_argument when a threshold is outside (0, 1].
    void validate() const;
};

struct EdgeTrace {
    std::size_t i = 0;
    std::size_t j = 0;  // i < j
    std::uint8_t indicators = 0;
};

/// Binary, symmetric, zero-diagonal sentence graph.
struct SentenceGraph {
    Eigen::MatrixXi adjacency;
    std::vector<EdgeTrace> trace;

    Eigen::Index size() const { return adjacency.rows(); }
    bool has_edge(Eigen::Index i, Eigen::Index j) const { return adjacency(i, j) != 0; }

    /// Graph from an explicit undirected edge list (tests, tools).
    static SentenceGraph from_edges(Eigen::Index n, const std::vector<std::pair<Eigen::Index, Eigen::Index>>& edges);
};

bool deverbal_match(const AnnotatedSentence& prev, const AnnotatedSentence& next, const DerivationalLexicon& lex,
                    const EmbeddingStore& store, const IndicatorConfig& cfg);
bool conjunction_match(const AnnotatedSentence& prev, const AnnotatedSentence& next, const IndicatorConfig& cfg);
bool entity_match(const AnnotatedSentence& a, const AnnotatedSentence& b);
bool similarity_match(const AnnotatedSentence& a, const AnnotatedSentence& b, const EmbeddingStore& store,
                      const IndicatorConfig& cfg);

/// (lowercased span text, entity type) pairs of a sentence.
std::set<std::pair<std::string, std::string>> entity_spans(const AnnotatedSentence& s);

SentenceGraph build_graph(const DocumentSet& ds, const DerivationalLexicon& lex, const EmbeddingStore& store,
                          const IndicatorConfig& cfg);

/// {"n", "adjacency", "edges":[{"i","j","indicators":[...]}]}
nlohmann::json graph_to_json(const SentenceGraph& g);

}  // namespace glimmer
