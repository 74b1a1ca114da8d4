#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "glimmer/corpus.hpp"

namespace glimmer {

/// Cosine similarity of two dense vectors. A zero vector on either side yields 0.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cosine(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    using Scalar = typename DerivedA::Scalar;
    if (a.size() != b.size()) throw std::invalid_argument("cosine: dimension mismatch");
    const Scalar na = a.norm();
    const Scalar nb = b.norm();
    if (na == Scalar(0) || nb == Scalar(0)) return Scalar(0);
    const Scalar c = a.dot(b) / (na * nb);
    return std::clamp(c, Scalar(-1), Scalar(1));
}

/// Word -> vector table loaded from the plain-text "word v1 ... vd" layout.
/// Lookups are case-folded.
class EmbeddingStore {
public:
    EmbeddingStore() = default;
    explicit EmbeddingStore(int dimension) : dimension_(dimension) {}

    /// Returns false (and stores nothing) when the word is already present.
    bool add(std::string_view word, const Eigen::Ref<const Eigen::VectorXd>& vec);

    int dimension() const { return dimension_; }
    std::size_t size() const { return words_.size(); }
    bool empty() const { return words_.empty(); }

    std::optional<std::size_t> index_of(std::string_view word) const;
    const std::string& word(std::size_t index) const { return words_[index]; }
    Eigen::Map<const Eigen::VectorXd> vector(std::size_t index) const;
    /// Row-wise unit-normalized table (zero rows stay zero).
    const Eigen::MatrixXd& normalized() const;

private:
    int dimension_ = 0;
    std::vector<std::string> words_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<double> data_;  // size() x dimension(), row-major
    mutable Eigen::MatrixXd normalized_;
    mutable bool normalized_valid_ = false;
};

EmbeddingStore load_embeddings(const std::string& path);
EmbeddingStore parse_embeddings(std::string_view text);

/// Mean of the vectors of in-vocabulary, non-punctuation tokens; zero vector
/// when none are in vocabulary.
Eigen::VectorXd sentence_vector(const AnnotatedSentence& s, const EmbeddingStore& store);

struct Neighbor {
    std::string word;
    double similarity = 0.0;

    bool operator==(const Neighbor&) const = default;
};

/// Top-m words by cosine (query excluded) with similarity >= min_sim, ordered
/// by descending similarity, ties lexicographic. OOV query -> empty.
std::vector<Neighbor> nearest_neighbors(std::string_view word, const EmbeddingStore& store, int m, double min_sim);

/// verb lemma -> nominalization lemmas.
class DerivationalLexicon {
public:
    void add(std::string_view verb, std::string_view noun);
    const std::set<std::string>* find(std::string_view verb) const;
    bool contains(std::string_view verb) const { return find(verb) != nullptr; }
    std::size_t size() const { return entries_.size(); }

private:
    std::unordered_map<std::string, std::set<std::string>> entries_;
};

/// "verb<TAB>noun1,noun2,..." lines; blank lines and '#' comments skipped.
DerivationalLexicon load_lexicon(const std::string& path);
DerivationalLexicon parse_lexicon(std::string_view text);

/// Lexicon nominalizations of the verb, each expanded by its nearest
/// neighbours: the list of nouns a following sentence is matched against.
std::set<std::string> nominalizations(std::string_view verb_lemma, const DerivationalLexicon& lex,
                                      const EmbeddingStore& store, int m, double min_sim);

}  // namespace glimmer
