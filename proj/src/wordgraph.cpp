#include "glimmer/wordgraph.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace glimmer {

namespace {

constexpr const char* kLeftEdge = "\x02<s>";
constexpr const char* kRightEdge = "\x02</s>";

using Path = std::vector<std::size_t>;

struct Candidate {
    double weight = 0.0;
    Path nodes;

    bool operator<(const Candidate& o) const {
        if (weight != o.weight) return weight < o.weight;
        return nodes < o.nodes;
    }
};

std::optional<std::size_t> occurrence_in(const WordNode& n, std::size_t sentence) {
    for (const auto& o : n.occurrences) {
        if (o.sentence == sentence) return o.position;
    }
    return std::nullopt;
}

/// Dijkstra from `source` to END avoiding banned nodes and edges. Ties are
/// broken by node id, so the result is deterministic.
std::optional<Candidate> shortest(const WordGraph& g, std::size_t source, const std::vector<char>& banned_nodes,
                                  const std::set<std::pair<std::size_t, std::size_t>>& banned_edges) {
    const std::size_t n = g.node_count();
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, kInf);
    std::vector<std::size_t> prev(n, n);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[source] = 0.0;
    queue.emplace(0.0, source);
    while (!queue.empty()) {
        auto [d, u] = queue.top();
        queue.pop();
        if (d > dist[u]) continue;
        if (u == WordGraph::kEnd) break;
        for (const auto& [v, w] : g.out_edges(u)) {
            if (banned_nodes[v] || banned_edges.contains({u, v})) continue;
            const double nd = d + w;
            if (nd < dist[v]) {
                dist[v] = nd;
                prev[v] = u;
                queue.emplace(nd, v);
            }
        }
    }
    if (dist[WordGraph::kEnd] == kInf) return std::nullopt;
    Candidate c;
    for (std::size_t v = WordGraph::kEnd; v != n; v = prev[v]) {
        c.nodes.push_back(v);
        if (v == source) break;
    }
    std::reverse(c.nodes.begin(), c.nodes.end());
    return c;
}

}  // namespace

const std::string& WordNode::surface() const {
    static const std::string empty;
    if (surfaces.empty()) return empty;
    const auto* best = &surfaces.front();
    for (const auto& s : surfaces) {
        if (s.second > best->second) best = &s;
    }
    return best->first;
}

std::optional<double> WordGraph::weight(std::size_t from, std::size_t to) const {
    const auto& edges = out_[from];
    auto it = std::lower_bound(edges.begin(), edges.end(), to,
                               [](const std::pair<std::size_t, double>& e, std::size_t t) { return e.first < t; });
    if (it == edges.end() || it->first != to) return std::nullopt;
    return it->second;
}

std::size_t WordGraph::edge_count() const {
    std::size_t n = 0;
    for (const auto& e : out_) n += e.size();
    return n;
}

WordGraph build_word_graph(const std::vector<AnnotatedSentence>& cluster, const WordGraphOptions& options) {
    WordGraph g;
    g.nodes_.resize(2);
    g.nodes_[WordGraph::kStart].lower = "<START>";
    g.nodes_[WordGraph::kStart].sentinel = true;
    g.nodes_[WordGraph::kEnd].lower = "<END>";
    g.nodes_[WordGraph::kEnd].sentinel = true;

    std::map<std::pair<std::string, Pos>, std::vector<std::size_t>> index;
    std::vector<std::vector<std::string>> lowers;
    lowers.reserve(cluster.size());
    for (const auto& s : cluster) {
        std::vector<std::string> row;
        row.reserve(s.tokens.size());
        for (const auto& t : s.tokens) row.push_back(t.lower);
        lowers.push_back(std::move(row));
    }
    auto left_of = [&lowers](std::size_t s, std::size_t position) -> const std::string& {
        static const std::string edge = kLeftEdge;
        return position <= 1 ? edge : lowers[s][position - 2];
    };
    auto right_of = [&lowers](std::size_t s, std::size_t position) -> const std::string& {
        static const std::string edge = kRightEdge;
        return position >= lowers[s].size() ? edge : lowers[s][position];
    };

    std::set<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t s = 0; s < cluster.size(); ++s) {
        const auto& tokens = cluster[s].tokens;
        Path path{WordGraph::kStart};
        g.nodes_[WordGraph::kStart].occurrences.push_back({s, 0});
        std::set<std::size_t> used;
        for (std::size_t p = 0; p < tokens.size(); ++p) {
            const Token& tok = tokens[p];
            const std::size_t position = p + 1;
            auto& bucket = index[{tok.lower, tok.pos}];
            std::optional<std::size_t> chosen;
            int best_context = -1;
            int best_freq = -1;
            for (std::size_t id : bucket) {  // creation order
                if (used.contains(id)) continue;
                const WordNode& node = g.nodes_[id];
                int context = 0;
                for (const auto& o : node.occurrences) {
                    if (left_of(o.sentence, o.position) == left_of(s, position)) ++context;
                    if (right_of(o.sentence, o.position) == right_of(s, position)) ++context;
                }
                if (context > best_context || (context == best_context && node.freq() > best_freq)) {
                    chosen = id;
                    best_context = context;
                    best_freq = node.freq();
                }
            }
            if (!chosen) {
                chosen = g.nodes_.size();
                WordNode node;
                node.lower = tok.lower;
                node.pos = tok.pos;
                g.nodes_.push_back(std::move(node));
                bucket.push_back(*chosen);
            }
            WordNode& node = g.nodes_[*chosen];
            node.occurrences.push_back({s, position});
            auto surf = std::find_if(node.surfaces.begin(), node.surfaces.end(),
                                     [&tok](const auto& e) { return e.first == tok.surface; });
            if (surf == node.surfaces.end()) {
                node.surfaces.emplace_back(tok.surface, 1);
            } else {
                ++surf->second;
            }
            used.insert(*chosen);
            path.push_back(*chosen);
        }
        g.nodes_[WordGraph::kEnd].occurrences.push_back({s, tokens.size() + 1});
        path.push_back(WordGraph::kEnd);
        for (std::size_t i = 0; i + 1 < path.size(); ++i) edges.emplace(path[i], path[i + 1]);
        g.sentence_paths_.push_back(std::move(path));
    }

    g.out_.assign(g.nodes_.size(), {});
    for (const auto& [from, to] : edges) {  // std::set order keeps targets ascending
        g.out_[from].emplace_back(to, 0.0);
    }
    for (std::size_t from = 0; from < g.out_.size(); ++from) {
        for (auto& [to, w] : g.out_[from]) w = edge_weight(g, from, to, options);
    }
    return g;
}

double edge_weight(const WordGraph& g, std::size_t from, std::size_t to, const WordGraphOptions& options) {
    const WordNode& a = g.node(from);
    const WordNode& b = g.node(to);
    double inverse_distance = 0.0;
    for (const auto& oa : a.occurrences) {
        const auto pb = occurrence_in(b, oa.sentence);
        if (!pb || *pb <= oa.position) continue;
        const std::size_t d = *pb - oa.position;
        if (options.adjacent_only_distance && d != 1) continue;
        inverse_distance += 1.0 / static_cast<double>(d);
    }
    if (inverse_distance == 0.0) throw std::logic_error("edge_weight: nodes never co-occur in order");
    const double fa = a.freq();
    const double fb = b.freq();
    return (fa + fb) / inverse_distance / (fa * fb);
}

double path_weight(const WordGraph& g, const std::vector<std::size_t>& nodes) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const auto w = g.weight(nodes[i], nodes[i + 1]);
        if (!w) throw std::invalid_argument("path_weight: path uses a missing edge");
        sum += *w;
    }
    return sum;
}

bool path_is_valid(const WordGraph& g, const std::vector<std::size_t>& nodes, const PathFilter& filter) {
    int words = 0;
    bool verb = false;
    for (std::size_t id : nodes) {
        const WordNode& n = g.node(id);
        if (n.sentinel) continue;
        if (n.pos != Pos::Punct) ++words;
        if (n.pos == Pos::Verb) verb = true;
    }
    return words >= filter.min_tokens && (verb || !filter.require_verb);
}

std::vector<PathCandidate> k_shortest_paths(const WordGraph& g, int k, const PathFilter& filter, int max_enumerated) {
    if (k < 1) throw std::invalid_argument("k_shortest_paths: k must be >= 1");
    std::vector<PathCandidate> valid;
    const std::size_t n = g.node_count();
    std::vector<char> no_nodes(n, 0);
    auto first = shortest(g, WordGraph::kStart, no_nodes, {});
    if (!first) return valid;
    first->weight = path_weight(g, first->nodes);

    std::vector<Candidate> found{*first};
    std::set<Path> seen{first->nodes};
    std::set<Candidate> pending;
    auto accept = [&](const Candidate& c) {
        if (path_is_valid(g, c.nodes, filter)) valid.push_back({c.nodes, c.weight, 0.0, 0.0});
    };
    accept(*first);

    while (static_cast<int>(valid.size()) < k && static_cast<int>(found.size()) < max_enumerated) {
        const Path last = found.back().nodes;
        for (std::size_t i = 0; i + 1 < last.size(); ++i) {
            const std::size_t spur = last[i];
            std::set<std::pair<std::size_t, std::size_t>> banned_edges;
            for (const auto& p : found) {
                if (p.nodes.size() > i + 1 && std::equal(last.begin(), last.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                                         p.nodes.begin())) {
                    banned_edges.emplace(p.nodes[i], p.nodes[i + 1]);
                }
            }
            std::vector<char> banned_nodes(n, 0);
            for (std::size_t r = 0; r < i; ++r) banned_nodes[last[r]] = 1;
            auto tail = shortest(g, spur, banned_nodes, banned_edges);
            if (!tail) continue;
            Candidate c;
            c.nodes.assign(last.begin(), last.begin() + static_cast<std::ptrdiff_t>(i));
            c.nodes.insert(c.nodes.end(), tail->nodes.begin(), tail->nodes.end());
            if (seen.contains(c.nodes)) continue;
            c.weight = path_weight(g, c.nodes);
            pending.insert(std::move(c));
        }
        // Skip candidates already promoted (the same path can arise from two spurs).
        while (!pending.empty() && seen.contains(pending.begin()->nodes)) pending.erase(pending.begin());
        if (pending.empty()) break;
        Candidate next = *pending.begin();
        pending.erase(pending.begin());
        seen.insert(next.nodes);
        accept(next);
        found.push_back(std::move(next));
    }
    if (valid.empty()) valid.push_back({first->nodes, first->weight, 0.0, 0.0});
    return valid;
}

NgramModel::NgramModel(const std::vector<std::vector<std::string>>& sentences) {
    std::set<std::string> vocab;
    for (const auto& s : sentences) {
        std::vector<std::string> padded{kBos, kBos};
        for (const auto& w : s) {
            padded.push_back(w);
            vocab.insert(w);
        }
        padded.push_back(kEos);
        for (std::size_t i = 2; i < padded.size(); ++i) {
            const std::string ctx = key(padded[i - 2], padded[i - 1]);
            ++contexts_[ctx];
            ++trigrams_[key(ctx, padded[i])];
        }
    }
    vocabulary_ = vocab.size();
}

NgramModel NgramModel::from_docset(const DocumentSet& ds) {
    std::vector<std::vector<std::string>> sentences;
    sentences.reserve(ds.sentences.size());
    for (const auto& s : ds.sentences) {
        std::vector<std::string> words;
        words.reserve(s.tokens.size());
        for (const auto& t : s.tokens) words.push_back(t.lower);
        sentences.push_back(std::move(words));
    }
    return NgramModel(sentences);
}

double NgramModel::probability(const std::string& w1, const std::string& w2, const std::string& w3) const {
    const std::string ctx = key(w1, w2);
    const auto c3 = trigrams_.find(key(ctx, w3));
    const auto c2 = contexts_.find(ctx);
    const double num = 1.0 + (c3 == trigrams_.end() ? 0 : c3->second);
    const double den = static_cast<double>(vocabulary_) + (c2 == contexts_.end() ? 0 : c2->second);
    return den > 0 ? num / den : 0.0;
}

double trigram_fluency(const std::vector<std::string>& words, const NgramModel& model) {
    std::vector<std::string> padded{NgramModel::kBos, NgramModel::kBos};
    padded.insert(padded.end(), words.begin(), words.end());
    padded.emplace_back(NgramModel::kEos);
    double sum = 0.0;
    for (std::size_t i = 2; i < padded.size(); ++i) sum += model.probability(padded[i - 2], padded[i - 1], padded[i]);
    return sum;
}

double trigram_fluency(const WordGraph& g, const PathCandidate& path, const NgramModel& model) {
    std::vector<std::string> words;
    for (std::size_t id : path.nodes) {
        if (!g.node(id).sentinel) words.push_back(g.node(id).lower);
    }
    return trigram_fluency(words, model);
}

std::string realize(const WordGraph& g, const std::vector<std::size_t>& nodes) {
    std::vector<std::string> surfaces;
    for (std::size_t id : nodes) {
        if (!g.node(id).sentinel) surfaces.push_back(g.node(id).surface());
    }
    return detokenize(surfaces);
}

ClusterSummary compress_cluster(const std::vector<AnnotatedSentence>& cluster, const CompressionConfig& cfg,
                                const NgramModel& model) {
    ClusterSummary out;
    if (cluster.empty()) return out;
    if (cluster.size() == 1) {
        out.text = sentence_text(cluster.front());
        return out;
    }
    const WordGraph g = build_word_graph(cluster, cfg.graph);
    auto paths = k_shortest_paths(g, cfg.fluency ? cfg.k_paths : 1, cfg.filter, cfg.max_enumerated);
    out.candidates = paths.size();
    if (paths.empty()) return out;
    std::size_t best = 0;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        auto& p = paths[i];
        p.fluency_sum = trigram_fluency(g, p, model);
        p.score = p.fluency_sum > 0 ? p.weight_sum / p.fluency_sum : std::numeric_limits<double>::infinity();
        if (cfg.fluency && p.score < paths[best].score) best = i;
    }
    out.path = paths[best];
    out.text = realize(g, out.path.nodes);
    return out;
}

std::string summarize_cluster(const std::vector<AnnotatedSentence>& cluster, const CompressionConfig& cfg,
                              const NgramModel& model) {
    return compress_cluster(cluster, cfg, model).text;
}

nlohmann::json word_graph_to_json(const WordGraph& g) {
    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t id = 0; id < g.node_count(); ++id) {
        const WordNode& n = g.node(id);
        nodes.push_back({{"id", id},
                         {"word", n.sentinel ? n.lower : n.surface()},
                         {"pos", n.sentinel ? "SENTINEL" : std::string(to_string(n.pos))},
                         {"freq", n.freq()}});
    }
    nlohmann::json edges = nlohmann::json::array();
    for (std::size_t from = 0; from < g.node_count(); ++from) {
        for (const auto& [to, w] : g.out_edges(from)) edges.push_back({{"from", from}, {"to", to}, {"weight", w}});
    }
    return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

}  // namespace glimmer
