#pragma once

// Independent reference implementations shared by the unit suites and the
// acceptance binary. None of these call into the code they check beyond
// reading graph structure.

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "glimmer/sentgraph.hpp"
#include "glimmer/wordgraph.hpp"

namespace oracle {

using glimmer::SentenceGraph;
using glimmer::WordGraph;

inline SentenceGraph random_graph(std::mt19937& rng, int n, double p) {
    std::vector<std::pair<Eigen::Index, Eigen::Index>> edges;
    std::bernoulli_distribution coin(p);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (coin(rng)) edges.emplace_back(i, j);
        }
    }
    return SentenceGraph::from_edges(n, edges);
}

/// Hop distances from `source`; -1 when unreachable.
inline std::vector<int> bfs(const SentenceGraph& g, Eigen::Index source) {
    std::vector<int> dist(static_cast<std::size_t>(g.size()), -1);
    std::deque<Eigen::Index> queue{source};
    dist[static_cast<std::size_t>(source)] = 0;
    while (!queue.empty()) {
        const auto u = queue.front();
        queue.pop_front();
        for (Eigen::Index v = 0; v < g.size(); ++v) {
            if (g.adjacency(u, v) && dist[static_cast<std::size_t>(v)] < 0) {
                dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

/// Floyd-Warshall output agrees with BFS (sentinel n when unreachable).
inline bool distances_match_bfs(const SentenceGraph& g, const Eigen::MatrixXi& d) {
    const auto n = g.size();
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto ref = bfs(g, i);
        for (Eigen::Index j = 0; j < n; ++j) {
            const int r = ref[static_cast<std::size_t>(j)];
            if (d(i, j) != (r < 0 ? static_cast<int>(n) : r)) return false;
        }
    }
    return true;
}

inline std::vector<int> components(const SentenceGraph& g) {
    std::vector<int> label(static_cast<std::size_t>(g.size()), -1);
    int next = 0;
    for (Eigen::Index s = 0; s < g.size(); ++s) {
        if (label[static_cast<std::size_t>(s)] >= 0) continue;
        for (Eigen::Index v = 0; v < g.size(); ++v) {
            if (bfs(g, s)[static_cast<std::size_t>(v)] >= 0) label[static_cast<std::size_t>(v)] = next;
        }
        ++next;
    }
    return label;
}

/// Partition equality up to label permutation.
inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            if ((a[i] == a[j]) != (b[i] == b[j])) return false;
        }
    }
    return true;
}

/// k disconnected blocks (spanning path plus random chords) with shuffled ids.
struct PlantedGraph {
    SentenceGraph graph;
    std::vector<int> truth;
    int k = 0;
};

inline PlantedGraph planted_components(std::mt19937& rng) {
    const int k = 2 + static_cast<int>(rng() % 3);
    std::vector<std::pair<Eigen::Index, Eigen::Index>> edges;
    std::vector<int> truth;
    int n = 0;
    for (int b = 0; b < k; ++b) {
        const int size = 1 + static_cast<int>(rng() % 4);
        for (int i = 0; i < size; ++i) {
            truth.push_back(b);
            if (i > 0) edges.emplace_back(n + i - 1, n + i);
            for (int j = 0; j + 1 < i; ++j) {
                if (rng() % 3 == 0) edges.emplace_back(n + j, n + i);
            }
        }
        n += size;
    }
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::pair<Eigen::Index, Eigen::Index>> shuffled;
    for (auto [a, b] : edges) shuffled.emplace_back(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)]);
    PlantedGraph out{SentenceGraph::from_edges(n, shuffled), std::vector<int>(static_cast<std::size_t>(n)), k};
    for (int i = 0; i < n; ++i) out.truth[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = truth[static_cast<std::size_t>(i)];
    return out;
}

// ---------------------------------------------------------------------------
// Word graphs

inline glimmer::AnnotatedSentence sentence(const std::string& text,
                                           const std::set<std::string>& verbs = {"sat", "ran", "saw"}) {
    glimmer::AnnotatedSentence s;
    std::istringstream in(text);
    std::string w;
    while (in >> w) {
        glimmer::Token t;
        t.surface = w;
        t.lower = glimmer::to_lower(w);
        t.lemma = t.lower;
        t.pos = glimmer::is_punctuation(w) ? glimmer::Pos::Punct
                : verbs.contains(t.lower)  ? glimmer::Pos::Verb
                                           : glimmer::Pos::Noun;
        s.tokens.push_back(std::move(t));
    }
    return s;
}

inline std::vector<glimmer::AnnotatedSentence> cluster(const std::vector<std::string>& texts) {
    std::vector<glimmer::AnnotatedSentence> out;
    for (const auto& t : texts) out.push_back(sentence(t));
    return out;
}

/// Up to 4 sentences of up to 8 tokens over a small vocabulary, so nodes merge.
inline std::vector<glimmer::AnnotatedSentence> random_cluster(std::mt19937& rng) {
    static const std::vector<std::string> vocab{"the", "cat", "sat", "dog", "ran", "on", "mat", ","};
    std::vector<glimmer::AnnotatedSentence> out;
    const int n = 1 + static_cast<int>(rng() % 4);
    for (int s = 0; s < n; ++s) {
        const int len = 1 + static_cast<int>(rng() % 8);
        std::string text;
        for (int i = 0; i < len; ++i) text += vocab[rng() % vocab.size()] + " ";
        out.push_back(sentence(text));
    }
    return out;
}

inline std::vector<std::string> words_of(const WordGraph& g, const std::vector<std::size_t>& nodes) {
    std::vector<std::string> out;
    for (auto id : nodes) {
        if (!g.node(id).sentinel) out.push_back(g.node(id).lower);
    }
    return out;
}

/// Edge weight recomputed from the sentence paths alone.
inline double recomputed_weight(const WordGraph& g, std::size_t a, std::size_t b) {
    const auto& paths = g.sentence_paths();
    auto freq = [&](std::size_t id) {
        double f = 0;
        for (const auto& p : paths) f += std::find(p.begin(), p.end(), id) != p.end() ? 1 : 0;
        return f;
    };
    double inv = 0.0;
    for (const auto& p : paths) {
        auto ia = std::find(p.begin(), p.end(), a);
        auto ib = std::find(p.begin(), p.end(), b);
        if (ia != p.end() && ib != p.end() && ib > ia) inv += 1.0 / static_cast<double>(ib - ia);
    }
    const double fa = freq(a), fb = freq(b);
    return (fa + fb) / inv / (fa * fb);
}

inline bool weights_match(const WordGraph& g, double tolerance) {
    for (std::size_t u = 0; u < g.node_count(); ++u) {
        for (const auto& [v, w] : g.out_edges(u)) {
            if (!(std::abs(w - recomputed_weight(g, u, v)) <= tolerance)) return false;
        }
    }
    return true;
}

struct Path {
    std::vector<std::size_t> nodes;
    double weight;
};

/// Every loopless START->END path by DFS, sorted by weight.
inline std::vector<Path> all_simple_paths(const WordGraph& g) {
    std::vector<Path> out;
    std::vector<std::size_t> stack{WordGraph::kStart};
    std::vector<char> on(g.node_count(), 0);
    on[WordGraph::kStart] = 1;
    std::function<void(double)> dfs = [&](double w) {
        const auto u = stack.back();
        if (u == WordGraph::kEnd) {
            out.push_back({stack, w});
            return;
        }
        for (const auto& edge : g.out_edges(u)) {
            const auto v = edge.first;
            if (on[v]) continue;
            on[v] = 1;
            stack.push_back(v);
            dfs(w + recomputed_weight(g, u, v));
            stack.pop_back();
            on[v] = 0;
        }
    };
    dfs(0.0);
    std::stable_sort(out.begin(), out.end(), [](const Path& x, const Path& y) { return x.weight < y.weight; });
    return out;
}

inline bool path_valid(const WordGraph& g, const std::vector<std::size_t>& nodes, const glimmer::PathFilter& f) {
    int words = 0;
    bool verb = false;
    for (auto id : nodes) {
        const auto& n = g.node(id);
        if (n.sentinel) continue;
        words += n.pos != glimmer::Pos::Punct;
        verb = verb || n.pos == glimmer::Pos::Verb;
    }
    return words >= f.min_tokens && (verb || !f.require_verb);
}

/// Compares k_shortest_paths output with exhaustive enumeration. Paths tied
/// at the cut-off weight may legitimately differ, so the check covers the
/// weight sequence, membership, distinctness and every strictly lighter path.
inline bool k_shortest_matches(const WordGraph& g, const std::vector<glimmer::PathCandidate>& got, int k,
                               const glimmer::PathFilter& filter) {
    const auto all = all_simple_paths(g);
    std::vector<Path> valid;
    for (const auto& p : all) {
        if (path_valid(g, p.nodes, filter)) valid.push_back(p);
    }
    if (valid.empty()) {
        return got.size() == 1 && !all.empty() && std::abs(got.front().weight_sum - all.front().weight) <= 1e-9;
    }
    const std::size_t expected = std::min<std::size_t>(static_cast<std::size_t>(k), valid.size());
    if (got.size() != expected) return false;
    std::set<std::vector<std::size_t>> distinct;
    for (std::size_t i = 0; i < expected; ++i) {
        if (std::abs(got[i].weight_sum - valid[i].weight) > 1e-9) return false;
        const bool member = std::any_of(valid.begin(), valid.end(), [&](const Path& p) { return p.nodes == got[i].nodes; });
        if (!member) return false;
        distinct.insert(got[i].nodes);
    }
    if (distinct.size() != got.size()) return false;
    const double cutoff = valid[expected - 1].weight;
    for (const auto& p : valid) {
        if (p.weight < cutoff - 1e-9 && !distinct.contains(p.nodes)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// ROUGE

/// LCS by memoized recursion (the library uses a rolling-row table).
inline std::size_t lcs(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
    std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> std::size_t {
        if (i == a.size() || j == b.size()) return 0;
        const auto key = std::make_pair(i, j);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        const std::size_t r = a[i] == b[j] ? 1 + go(i + 1, j + 1) : std::max(go(i + 1, j), go(i, j + 1));
        memo[key] = r;
        return r;
    };
    return go(0, 0);
}

/// Hand-counted ROUGE f1 values; texts are whitespace-separated tokens.
struct RougeCase {
    std::string candidate;
    std::vector<std::string> references;
    double r1, r2, rl;
};

inline const std::vector<RougeCase>& rouge_hand_cases() {
    static const std::vector<RougeCase> cases{
        {"the cat sat", {"the cat"}, 0.8, 2.0 / 3.0, 0.8},
        {"a b c d", {"a c d"}, 6.0 / 7.0, 0.4, 6.0 / 7.0},
        {"a b c d", {"d c b a"}, 1.0, 0.0, 0.25},
        {"x y z", {"p q r"}, 0.0, 0.0, 0.0},
        {"the the the", {"the cat the"}, 2.0 / 3.0, 0.0, 2.0 / 3.0},
        {"a b a b", {"a b"}, 2.0 / 3.0, 0.5, 2.0 / 3.0},
        {"a", {"a b c d e"}, 1.0 / 3.0, 0.0, 1.0 / 3.0},
        {"a b c", {"a x y", "a b z"}, 2.0 / 3.0, 0.5, 2.0 / 3.0},
        {"a b c d e f", {"a c e b d f"}, 1.0, 0.0, 2.0 / 3.0},
        {"the cat sat on the mat", {"the cat is on the mat"}, 5.0 / 6.0, 0.6, 5.0 / 6.0},
    };
    return cases;
}

inline std::vector<std::string> split(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

}  // namespace oracle
