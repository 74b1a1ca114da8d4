#include "glimmer/sentgraph.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace glimmer {

namespace {

std::vector<std::string> split_words(const std::string& phrase) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : phrase) {
        if (c == ' ') {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

bool skippable_lead(const Token& t) {
    static const std::set<std::string> marks{"\"", "'", "“", "”", "‘", "’", "`", "``", "''", "-", "--", "—", "–", "(", "["};
    return marks.contains(t.surface);
}

std::set<std::string> noun_lemmas(const AnnotatedSentence& s) {
    std::set<std::string> out;
    for (const auto& t : s.tokens) {
        if (t.pos == Pos::Noun) out.insert(t.lemma);
    }
    return out;
}

bool intersects(const std::set<std::string>& a, const std::set<std::string>& b) {
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            return true;
        }
    }
    return false;
}

class NominalizationCache {
public:
    NominalizationCache(const DerivationalLexicon& lex, const EmbeddingStore& store, const IndicatorConfig& cfg)
        : lex_(lex), store_(store), cfg_(cfg) {}

    /// Union of match lists over the notional verbs of a sentence.
    std::set<std::string> for_sentence(const AnnotatedSentence& s) {
        std::set<std::string> out;
        for (const auto& t : s.tokens) {
            if (t.pos != Pos::Verb || cfg_.non_notional_verbs.contains(t.lemma) ||
                cfg_.non_notional_verbs.contains(t.lower)) {
                continue;
            }
            auto it = cache_.find(t.lemma);
            if (it == cache_.end()) {
                it = cache_.emplace(t.lemma, nominalizations(t.lemma, lex_, store_, cfg_.neighbor_m,
                                                             cfg_.sim_word_threshold)).first;
            }
            out.insert(it->second.begin(), it->second.end());
        }
        return out;
    }

private:
    const DerivationalLexicon& lex_;
    const EmbeddingStore& store_;
    const IndicatorConfig& cfg_;
    std::map<std::string, std::set<std::string>> cache_;
};

}  // namespace

const std::vector<std::string>& default_conjunctions() {
    static const std::vector<std::string> list{
        "however",   "but",         "moreover",     "furthermore", "therefore",    "thus",
        "meanwhile", "additionally", "in addition",  "nevertheless", "nonetheless", "consequently",
        "besides",   "also",        "still",        "yet",         "instead",      "otherwise",
        "likewise",  "similarly",   "conversely",   "hence",       "accordingly",  "then",
        "so",        "although",    "though",       "whereas",     "while",        "afterward",
        "afterwards", "next",       "finally",      "first",       "second",       "third",
        "in contrast", "on the other hand", "as a result"};
    return list;
}

const std::set<std::string>& default_non_notional_verbs() {
    static const std::set<std::string> set{
        "be",    "is",     "am",    "are",   "was",    "were",   "been",   "being", "have",
        "has",   "had",    "having", "do",   "does",   "did",    "done",   "doing", "will",
        "would", "can",    "could", "shall", "should", "may",    "might",  "must",  "seem",
        "seems", "seemed", "become", "became", "becomes", "get", "gets",  "got",   "gotten"};
    return set;
}

void IndicatorConfig::validate() const {
    auto in_range = [](double t) { return t > 0.0 && t <= 1.0; };
    if (!in_range(sim_sentence_threshold) || !in_range(sim_word_threshold)) {
        throw std::invalid_argument("similarity thresholds must lie in (0, 1]");
    }
    if (neighbor_m < 1) throw std::invalid_argument("neighbor count must be >= 1");
}

SentenceGraph SentenceGraph::from_edges(Eigen::Index n, const std::vector<std::pair<Eigen::Index, Eigen::Index>>& edges) {
    SentenceGraph g;
    g.adjacency = Eigen::MatrixXi::Zero(n, n);
    for (auto [i, j] : edges) {
        if (i == j) continue;
        g.adjacency(i, j) = 1;
        g.adjacency(j, i) = 1;
    }
    return g;
}

bool deverbal_match(const AnnotatedSentence& prev, const AnnotatedSentence& next, const DerivationalLexicon& lex,
                    const EmbeddingStore& store, const IndicatorConfig& cfg) {
    const auto nouns = noun_lemmas(next);
    if (nouns.empty()) return false;
    NominalizationCache cache(lex, store, cfg);
    return intersects(cache.for_sentence(prev), nouns);
}

bool conjunction_match(const AnnotatedSentence& /*prev*/, const AnnotatedSentence& next, const IndicatorConfig& cfg) {
    std::size_t start = 0;
    while (start < next.tokens.size() && skippable_lead(next.tokens[start])) ++start;
    // Longest phrases first.
    std::vector<std::vector<std::string>> phrases;
    phrases.reserve(cfg.conjunctions.size());
    for (const auto& c : cfg.conjunctions) phrases.push_back(split_words(to_lower(c)));
    std::stable_sort(phrases.begin(), phrases.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
    for (const auto& words : phrases) {
        if (words.empty() || start + words.size() > next.tokens.size()) continue;
        bool ok = true;
        for (std::size_t k = 0; k < words.size() && ok; ++k) ok = next.tokens[start + k].lower == words[k];
        if (ok) return true;
    }
    return false;
}

std::set<std::pair<std::string, std::string>> entity_spans(const AnnotatedSentence& s) {
    std::set<std::pair<std::string, std::string>> out;
    std::string text;
    std::string type;
    auto flush = [&] {
        if (!text.empty()) out.emplace(text, type);
        text.clear();
        type.clear();
    };
    for (const auto& t : s.tokens) {
        if (!t.entity) {
            flush();
            continue;
        }
        if (t.entity->begin || t.entity->type != type || text.empty()) {
            flush();
            text = t.lower;
            type = t.entity->type;
        } else {
            text += ' ';
            text += t.lower;
        }
    }
    flush();
    return out;
}

bool entity_match(const AnnotatedSentence& a, const AnnotatedSentence& b) {
    const auto ea = entity_spans(a);
    if (ea.empty()) return false;
    for (const auto& e : entity_spans(b)) {
        if (ea.contains(e)) return true;
    }
    return false;
}

bool similarity_match(const AnnotatedSentence& a, const AnnotatedSentence& b, const EmbeddingStore& store,
                      const IndicatorConfig& cfg) {
    return cosine(sentence_vector(a, store), sentence_vector(b, store)) >= cfg.sim_sentence_threshold;
}

SentenceGraph build_graph(const DocumentSet& ds, const DerivationalLexicon& lex, const EmbeddingStore& store,
                          const IndicatorConfig& cfg) {
    cfg.validate();
    const auto n = static_cast<Eigen::Index>(ds.sentences.size());
    SentenceGraph g;
    g.adjacency = Eigen::MatrixXi::Zero(n, n);

    std::vector<Eigen::VectorXd> vectors;
    std::vector<std::set<std::pair<std::string, std::string>>> entities;
    std::vector<std::set<std::string>> nouns;
    vectors.reserve(static_cast<std::size_t>(n));
    for (const auto& s : ds.sentences) {
        vectors.push_back(sentence_vector(s, store));
        entities.push_back(entity_spans(s));
        nouns.push_back(noun_lemmas(s));
    }
    NominalizationCache cache(lex, store, cfg);

    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& si = ds.sentences[static_cast<std::size_t>(i)];
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const auto& sj = ds.sentences[static_cast<std::size_t>(j)];
            std::uint8_t bits = 0;
            if (j == i + 1) {
                if (!nouns[static_cast<std::size_t>(j)].empty() &&
                    intersects(cache.for_sentence(si), nouns[static_cast<std::size_t>(j)])) {
                    bits |= kDeverbal;
                }
                if (conjunction_match(si, sj, cfg)) bits |= kConjunction;
            }
            const auto& ei = entities[static_cast<std::size_t>(i)];
            for (const auto& e : entities[static_cast<std::size_t>(j)]) {
                if (ei.contains(e)) {
                    bits |= kEntity;
                    break;
                }
            }
            if (cosine(vectors[static_cast<std::size_t>(i)], vectors[static_cast<std::size_t>(j)]) >=
                cfg.sim_sentence_threshold) {
                bits |= kSimilarity;
            }
            if (bits != 0) {
                g.adjacency(i, j) = 1;
                g.adjacency(j, i) = 1;
                g.trace.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), bits});
            }
        }
    }
    return g;
}

nlohmann::json graph_to_json(const SentenceGraph& g) {
    nlohmann::json adj = nlohmann::json::array();
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < g.size(); ++j) row.push_back(g.adjacency(i, j));
        adj.push_back(std::move(row));
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : g.trace) {
        nlohmann::json names = nlohmann::json::array();
        if (e.indicators & kDeverbal) names.push_back("deverbal");
        if (e.indicators & kConjunction) names.push_back("conjunction");
        if (e.indicators & kEntity) names.push_back("entity");
        if (e.indicators & kSimilarity) names.push_back("similarity");
        edges.push_back({{"i", e.i}, {"j", e.j}, {"indicators", std::move(names)}});
    }
    return {{"n", g.size()}, {"adjacency", std::move(adj)}, {"edges", std::move(edges)}};
}

}  // namespace glimmer
