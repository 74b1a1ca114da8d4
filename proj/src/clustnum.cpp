#include "glimmer/clustnum.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "glimmer/random.hpp"

namespace glimmer {

void TtrConfig::validate() const {
    if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("sigma must lie in (0, 1)");
    if (beta < 0.0) throw std::invalid_argument("beta must be >= 0");
    if (sample_min < 1 || sample_min > sample_max) throw std::invalid_argument("need 1 <= sample_min <= sample_max");
    if (reps < 1 || d_rounds < 1) throw std::invalid_argument("reps and d_rounds must be >= 1");
    if (!(d_lower > 0.0 && d_lower < d_upper)) throw std::invalid_argument("D search range must satisfy 0 < lo < hi");
}

std::string_view to_string(CountMethod m) {
    switch (m) {
        case CountMethod::Ttr: return "ttr";
        case CountMethod::Distance: return "distance";
        case CountMethod::Eigengap: return "eigengap";
        case CountMethod::Fixed: return "fixed";
    }
    return "fixed";
}

nlohmann::json to_json(const ClusterCountResult& r) {
    nlohmann::json j{{"k", r.k}, {"method", std::string(to_string(r.method))}, {"n_sent", r.n_sent}};
    if (r.ttr) {
        j["ttr"] = {{"ttr_input", r.ttr->ttr_input}, {"d_value", r.ttr->d_value}, {"d_fallback", r.ttr->d_fallback},
                    {"n_low", r.ttr->n_low},         {"n_high", r.ttr->n_high},   {"n_neutral", r.ttr->n_neutral},
                    {"raw", r.ttr->raw}};
    }
    if (!r.distance.empty()) {
        auto& table = j["distance"] = nlohmann::json::array();
        for (const auto& s : r.distance) {
            table.push_back({{"k", s.k}, {"inter", s.inter}, {"intra", s.intra}, {"score", s.score}});
        }
    }
    if (!r.eigenvalues.empty()) j["eigenvalues"] = r.eigenvalues;
    if (!r.warnings.empty()) j["warnings"] = r.warnings;
    return j;
}

double ttr(const std::vector<std::string>& tokens) {
    if (tokens.empty()) throw std::invalid_argument("ttr: empty token list");
    std::unordered_set<std::string> types;
    for (const auto& t : tokens) types.insert(to_lower(t));
    return static_cast<double>(types.size()) / static_cast<double>(tokens.size());
}

double ttr_mckee(double n, const LexicalDiversityModel& model) {
    const double d = model.d_value;
    // (D/N)(sqrt(1 + 2N/D) - 1) == 2 / (sqrt(1 + 2N/D) + 1): same value, no cancellation for small N/D.
    return 2.0 / (std::sqrt(1.0 + 2.0 * n / d) + 1.0);
}

std::vector<std::string> sentence_words(const AnnotatedSentence& s) {
    std::vector<std::string> out;
    for (const auto& t : s.tokens) {
        if (t.pos != Pos::Punct) out.push_back(t.lower);
    }
    return out;
}

std::vector<std::string> word_stream(const DocumentSet& ds) {
    std::vector<std::string> out;
    for (const auto& s : ds.sentences) {
        auto words = sentence_words(s);
        out.insert(out.end(), std::make_move_iterator(words.begin()), std::make_move_iterator(words.end()));
    }
    return out;
}

double fit_d(const std::vector<int>& sizes, const std::vector<double>& curve, const TtrConfig& cfg) {
    auto sse = [&](double d) {
        double acc = 0.0;
        for (std::size_t i = 0; i < sizes.size(); ++i) {
            const double e = curve[i] - ttr_mckee(sizes[i], LexicalDiversityModel{d});
            acc += e * e;
        }
        return acc;
    };
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = cfg.d_lower;
    double b = cfg.d_upper;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = sse(c);
    double fd = sse(d);
    while (b - a > cfg.d_tolerance) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = sse(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = sse(d);
        }
    }
    return 0.5 * (a + b);
}

LexicalDiversityModel estimate_d(const std::vector<std::string>& words, const TtrConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    if (words.size() < static_cast<std::size_t>(cfg.sample_max)) return {cfg.d_fallback, true};

    // Map words to dense ids once; sampling then works on integers.
    std::unordered_map<std::string, int> ids;
    std::vector<int> stream;
    stream.reserve(words.size());
    for (const auto& w : words) stream.push_back(ids.emplace(to_lower(w), static_cast<int>(ids.size())).first->second);

    Rng rng(seed);
    std::vector<int> perm(stream.size());
    std::vector<std::uint32_t> stamp(ids.size(), 0);
    std::uint32_t epoch = 0;
    std::vector<int> sizes;
    for (int s = cfg.sample_min; s <= cfg.sample_max; ++s) sizes.push_back(s);

    double d_sum = 0.0;
    for (int round = 0; round < cfg.d_rounds; ++round) {
        std::vector<double> curve;
        curve.reserve(sizes.size());
        for (int s : sizes) {
            double ttr_sum = 0.0;
            for (int rep = 0; rep < cfg.reps; ++rep) {
                std::iota(perm.begin(), perm.end(), 0);
                // Partial Fisher-Yates: the first s slots are a uniform sample without replacement.
                int unique = 0;
                ++epoch;
                for (int i = 0; i < s; ++i) {
                    const std::size_t j = static_cast<std::size_t>(i) +
                                          uniform_index(rng, perm.size() - static_cast<std::size_t>(i));
                    std::swap(perm[static_cast<std::size_t>(i)], perm[j]);
                    const int id = stream[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
                    if (stamp[static_cast<std::size_t>(id)] != epoch) {
                        stamp[static_cast<std::size_t>(id)] = epoch;
                        ++unique;
                    }
                }
                ttr_sum += static_cast<double>(unique) / s;
            }
            curve.push_back(ttr_sum / cfg.reps);
        }
        d_sum += fit_d(sizes, curve, cfg);
    }
    return {d_sum / cfg.d_rounds, false};
}

LexicalDiversityModel estimate_d(const DocumentSet& ds, const TtrConfig& cfg, std::uint64_t seed) {
    return estimate_d(word_stream(ds), cfg, seed);
}

TtrClass classify_ratio(double ratio, const TtrConfig& cfg) {
    if (ratio < 1.0 - cfg.sigma) return TtrClass::Low;
    if (cfg.band == TtrBand::Two || ratio >= 1.0 + cfg.sigma) return TtrClass::High;
    return TtrClass::Neutral;
}

TtrClass classify_sentence(const AnnotatedSentence& s, const LexicalDiversityModel& model, const TtrConfig& cfg) {
    const auto words = sentence_words(s);
    if (words.empty()) return TtrClass::Neutral;
    const double observed = ttr(words);
    const double expected = ttr_mckee(static_cast<double>(words.size()), model);
    return classify_ratio(observed / expected, cfg);
}

int ttr_cluster_formula(int n_sent, int n_low, int n_high, double beta, double ttr_input) {
    if (n_sent < 1) return 1;
    const double raw = (n_sent - beta * (n_low - n_high)) * ttr_input;
    // Absorb representation error (e.g. 0.29 * 100 = 28.999999999999996).
    const double floored = std::floor(raw + 1e-9);
    if (floored < 1.0) return 1;
    if (floored > n_sent) return n_sent;
    return static_cast<int>(floored);
}

ClusterCountResult cluster_count_ttr(const DocumentSet& ds, const TtrConfig& cfg, std::uint64_t seed) {
    ClusterCountResult out;
    out.method = CountMethod::Ttr;
    out.n_sent = static_cast<int>(ds.sentences.size());
    if (out.n_sent == 0) {
        out.k = 1;
        return out;
    }
    const auto words = word_stream(ds);
    TtrDiagnostics diag;
    diag.ttr_input = words.empty() ? 1.0 : ttr(words);
    const auto model = estimate_d(words, cfg, seed);
    diag.d_value = model.d_value;
    diag.d_fallback = model.fallback;
    if (model.fallback) {
        out.warnings.push_back("input has fewer than " + std::to_string(cfg.sample_max) +
                               " words; D set to fallback " + std::to_string(cfg.d_fallback));
    }
    for (const auto& s : ds.sentences) {
        switch (classify_sentence(s, model, cfg)) {
            case TtrClass::Low: ++diag.n_low; break;
            case TtrClass::High: ++diag.n_high; break;
            case TtrClass::Neutral: ++diag.n_neutral; break;
        }
    }
    diag.raw = (out.n_sent - cfg.beta * (diag.n_low - diag.n_high)) * diag.ttr_input;
    out.k = ttr_cluster_formula(out.n_sent, diag.n_low, diag.n_high, cfg.beta, diag.ttr_input);
    out.ttr = diag;
    return out;
}

Eigen::MatrixXi floyd_warshall(const SentenceGraph& g, std::optional<int> unreachable) {
    const Eigen::Index n = g.size();
    constexpr int kInf = std::numeric_limits<int>::max() / 4;
    Eigen::MatrixXi d = Eigen::MatrixXi::Constant(n, n, kInf);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (g.adjacency(i, j) != 0) d(i, j) = 1;
        }
        d(i, i) = 0;
    }
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (d(i, k) == kInf) continue;
            for (Eigen::Index j = 0; j < n; ++j) {
                const int via = d(i, k) + d(k, j);
                if (via < d(i, j)) d(i, j) = via;
            }
        }
    }
    const int sentinel = unreachable.value_or(static_cast<int>(n));
    return (d.array() == kInf).select(sentinel, d);
}

KRange default_k_range(Eigen::Index n) {
    const int half = static_cast<int>((n + 1) / 2);
    KRange r{2, std::min(15, half)};
    r.hi = std::min<int>(std::max(r.lo, r.hi), static_cast<int>(n));
    return r;
}

DistanceScore score_partition(const Eigen::MatrixXi& dist, const std::vector<int>& labels) {
    double inter = 0.0;
    double intra = 0.0;
    std::size_t n_inter = 0;
    std::size_t n_intra = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        for (std::size_t j = i + 1; j < labels.size(); ++j) {
            const double d = dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (labels[i] == labels[j]) {
                intra += d;
                ++n_intra;
            } else {
                inter += d;
                ++n_inter;
            }
        }
    }
    DistanceScore s;
    s.inter = n_inter ? inter / static_cast<double>(n_inter) : 0.0;
    s.intra = n_intra ? intra / static_cast<double>(n_intra) : 0.0;
    s.score = s.inter - s.intra;
    return s;
}

ClusterCountResult cluster_count_distance(const SentenceGraph& g, std::optional<KRange> k_range, std::uint64_t seed,
                                          const SpectralOptions& spectral, std::optional<int> unreachable) {
    ClusterCountResult out;
    out.method = CountMethod::Distance;
    out.n_sent = static_cast<int>(g.size());
    if (g.size() < 2) {
        out.k = 1;
        return out;
    }
    KRange range = k_range.value_or(default_k_range(g.size()));
    range.lo = std::max(range.lo, 1);
    range.hi = std::min<int>(range.hi, static_cast<int>(g.size()));
    if (range.hi < range.lo) range.hi = range.lo = std::min<int>(range.lo, static_cast<int>(g.size()));

    const Eigen::MatrixXi dist = floyd_warshall(g, unreachable);
    double best = -std::numeric_limits<double>::infinity();
    out.k = range.lo;
    for (int k = range.lo; k <= range.hi; ++k) {
        const auto assignment = spectral_clusters(g, k, seed, spectral);
        DistanceScore s = score_partition(dist, assignment.labels);
        s.k = k;
        out.distance.push_back(s);
        if (s.score > best + 1e-12) {
            best = s.score;
            out.k = k;
        }
    }
    return out;
}

int eigengap_k(const std::vector<double>& values, int k_max) {
    const int n = static_cast<int>(values.size());
    if (n < 2) return 1;
    const int last = std::min(k_max, n - 1);
    int best_k = 1;
    double best_gap = values[1] - values[0];
    for (int i = 2; i <= last; ++i) {
        const double gap = values[static_cast<std::size_t>(i)] - values[static_cast<std::size_t>(i - 1)];
        if (gap > best_gap + 1e-9 * std::max(1.0, std::abs(best_gap))) {
            best_gap = gap;
            best_k = i;
        }
    }
    return best_k;
}

ClusterCountResult cluster_count_eigengap(const SentenceGraph& g, int k_max) {
    ClusterCountResult out;
    out.method = CountMethod::Eigengap;
    out.n_sent = static_cast<int>(g.size());
    if (g.size() < 2) {
        out.k = 1;
        return out;
    }
    const auto lap = laplacian<double>(g);
    const auto pairs = smallest_eigenvectors(lap, g.size());
    out.eigenvalues.assign(pairs.spectrum.data(), pairs.spectrum.data() + pairs.spectrum.size());
    out.k = eigengap_k(out.eigenvalues, k_max);
    return out;
}

}  // namespace glimmer
