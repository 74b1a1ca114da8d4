#include "glimmer/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace glimmer {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    const auto* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError("invalid value for " + std::string(key) + ": '" + std::string(value) + "'");
    }
    return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
    const std::string v = to_lower(value);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("invalid boolean for " + std::string(key) + ": '" + std::string(value) + "'");
}

std::vector<std::string> parse_list(std::string_view value) {
    std::vector<std::string> out;
    while (!value.empty()) {
        const auto comma = value.find(',');
        const auto item = trim(value.substr(0, comma));
        if (!item.empty()) out.push_back(to_lower(item));
        if (comma == std::string_view::npos) break;
        value.remove_prefix(comma + 1);
    }
    return out;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

MethodSpec parse_method(std::string_view text) {
    const std::string t = to_lower(trim(text));
    if (t == "ttr") return {CountMethod::Ttr, 9};
    if (t == "distance") return {CountMethod::Distance, 9};
    if (t == "eigengap") return {CountMethod::Eigengap, 9};
    if (t.rfind("fixed:", 0) == 0) {
        const int k = parse_number<int>("method", std::string_view(t).substr(6));
        if (k < 1) throw ConfigError("fixed cluster count must be >= 1");
        return {CountMethod::Fixed, k};
    }
    throw ConfigError("unknown method '" + std::string(text) + "' (expected ttr, distance, eigengap or fixed:<k>)");
}

std::string to_string(const MethodSpec& m) {
    if (m.method == CountMethod::Fixed) return "fixed:" + std::to_string(m.fixed_k);
    return std::string(to_string(m.method));
}

std::size_t preset_output_tokens(std::string_view preset) {
    const std::string p = to_lower(preset);
    if (p == "multinews" || p == "multi-news") return 256;
    if (p == "multixscience" || p == "multi-xscience") return 128;
    if (p == "duc2004" || p == "duc-2004") return 128;
    throw ConfigError("unknown preset '" + std::string(preset) + "' (expected multinews, multixscience or duc2004)");
}

void PipelineConfig::validate() const {
    if (method.method == CountMethod::Fixed && method.fixed_k < 1) throw ConfigError("fixed k must be >= 1");
    if (max_input_tokens && *max_input_tokens == 0) throw ConfigError("max input tokens must be >= 1");
    if (max_output_tokens < static_cast<std::size_t>(std::max(compression.filter.min_tokens, 1))) {
        throw ConfigError("max output tokens must be >= min_tokens (" + std::to_string(compression.filter.min_tokens) +
                          ")");
    }
    if (compression.k_paths < 1) throw ConfigError("k_paths must be >= 1");
    if (compression.max_enumerated < 1) throw ConfigError("max_enumerated must be >= 1");
    if (eigengap_k_max < 1) throw ConfigError("k_max must be >= 1");
    if (distance_range && (distance_range->lo < 1 || distance_range->hi < distance_range->lo)) {
        throw ConfigError("invalid distance k range");
    }
    if (spectral.kmeans.restarts < 1 || spectral.kmeans.max_iterations < 1) {
        throw ConfigError("k-means restarts and iterations must be >= 1");
    }
    try {
        indicators.validate();
        ttr.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

void apply_setting(PipelineConfig& cfg, std::string_view key_in, std::string_view value_in) {
    const std::string key = to_lower(trim(key_in));
    const std::string_view value = trim(value_in);
    if (key == "method") {
        cfg.method = parse_method(value);
    } else if (key == "seed") {
        cfg.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "max_input") {
        if (to_lower(value) == "none") {
            cfg.max_input_tokens.reset();
        } else {
            cfg.max_input_tokens = parse_number<std::size_t>(key, value);
        }
    } else if (key == "max_output") {
        cfg.max_output_tokens = parse_number<std::size_t>(key, value);
    } else if (key == "preset") {
        cfg.max_output_tokens = preset_output_tokens(value);
    } else if (key == "annotator") {
        const std::string v = to_lower(value);
        if (v == "builtin") {
            cfg.annotator = AnnotatorKind::BuiltinHeuristic;
        } else if (v == "pre-annotated" || v == "preannotated") {
            cfg.annotator = AnnotatorKind::PreAnnotated;
        } else {
            throw ConfigError("unknown annotator '" + std::string(value) + "' (expected builtin or pre-annotated)");
        }
    } else if (key == "embeddings") {
        cfg.embeddings_path = value;
    } else if (key == "lexicon") {
        cfg.lexicon_path = value;
    } else if (key == "conjunctions") {
        cfg.indicators.conjunctions = parse_list(value);
    } else if (key == "non_notional_verbs") {
        const auto items = parse_list(value);
        cfg.indicators.non_notional_verbs = {items.begin(), items.end()};
    } else if (key == "sim_sentence_threshold") {
        cfg.indicators.sim_sentence_threshold = parse_number<double>(key, value);
    } else if (key == "sim_word_threshold") {
        cfg.indicators.sim_word_threshold = parse_number<double>(key, value);
    } else if (key == "neighbor_m") {
        cfg.indicators.neighbor_m = parse_number<int>(key, value);
    } else if (key == "sigma") {
        cfg.ttr.sigma = parse_number<double>(key, value);
    } else if (key == "beta") {
        cfg.ttr.beta = parse_number<double>(key, value);
    } else if (key == "ttr_band") {
        const std::string v = to_lower(value);
        if (v == "three") {
            cfg.ttr.band = TtrBand::Three;
        } else if (v == "two") {
            cfg.ttr.band = TtrBand::Two;
        } else {
            throw ConfigError("ttr_band must be three or two");
        }
    } else if (key == "d_fallback") {
        cfg.ttr.d_fallback = parse_number<double>(key, value);
    } else if (key == "row_normalize") {
        cfg.spectral.row_normalize = parse_bool(key, value);
    } else if (key == "kmeans_restarts") {
        cfg.spectral.kmeans.restarts = parse_number<int>(key, value);
    } else if (key == "kmeans_max_iterations") {
        cfg.spectral.kmeans.max_iterations = parse_number<int>(key, value);
    } else if (key == "k_min") {
        KRange r = cfg.distance_range.value_or(KRange{2, 15});
        r.lo = parse_number<int>(key, value);
        cfg.distance_range = r;
    } else if (key == "k_max") {
        const int k = parse_number<int>(key, value);
        cfg.eigengap_k_max = k;
        KRange r = cfg.distance_range.value_or(KRange{2, k});
        r.hi = k;
        cfg.distance_range = r;
    } else if (key == "unreachable") {
        cfg.unreachable = parse_number<int>(key, value);
    } else if (key == "fluency") {
        cfg.compression.fluency = parse_bool(key, value);
    } else if (key == "k_paths") {
        cfg.compression.k_paths = parse_number<int>(key, value);
    } else if (key == "max_enumerated") {
        cfg.compression.max_enumerated = parse_number<int>(key, value);
    } else if (key == "min_tokens") {
        cfg.compression.filter.min_tokens = parse_number<int>(key, value);
    } else if (key == "require_verb") {
        cfg.compression.filter.require_verb = parse_bool(key, value);
    } else if (key == "adjacent_only_distance") {
        cfg.compression.graph.adjacent_only_distance = parse_bool(key, value);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

void apply_config_text(PipelineConfig& cfg, std::string_view text) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        try {
            apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
}

void apply_config_file(PipelineConfig& cfg, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    apply_config_text(cfg, buf.str());
}

Resources load_resources(const std::string& embeddings_path, const std::string& lexicon_path) {
    return {load_embeddings(embeddings_path), load_lexicon(lexicon_path)};
}

std::size_t output_token_count(std::string_view text) { return tokenize(text).size(); }

std::vector<int> order_clusters(const ClusterAssignment& assign, const std::vector<AnnotatedSentence>& sentences) {
    std::vector<std::pair<std::size_t, int>> first;
    const auto members = assign.clusters();
    for (std::size_t c = 0; c < members.size(); ++c) {
        if (members[c].empty()) continue;
        std::size_t lo = sentences[members[c].front()].global_index;
        for (std::size_t i : members[c]) lo = std::min(lo, sentences[i].global_index);
        first.emplace_back(lo, static_cast<int>(c));
    }
    std::sort(first.begin(), first.end());
    std::vector<int> order;
    order.reserve(first.size());
    for (const auto& [lo, c] : first) order.push_back(c);
    return order;
}

std::string enforce_length(const std::vector<std::string>& sentences, std::size_t budget) {
    std::vector<std::string> kept;
    std::size_t used = 0;
    for (const auto& s : sentences) {
        const auto tokens = tokenize(s);
        if (tokens.empty()) continue;
        if (used + tokens.size() <= budget) {
            kept.push_back(s);
            used += tokens.size();
            continue;
        }
        if (kept.empty() && budget > 0) kept.push_back(s.substr(0, tokens[budget - 1].end));
        break;
    }
    std::string out;
    for (const auto& s : kept) {
        if (!out.empty()) out += ' ';
        out += s;
    }
    return out;
}

SummaryResult summarize_docset(const DocumentSet& ds, const Resources& res, const PipelineConfig& cfg) {
    using Clock = std::chrono::steady_clock;
    SummaryResult out;
    const auto start = Clock::now();

    auto t = Clock::now();
    DocumentSet work = cfg.max_input_tokens ? truncate_docset(ds, *cfg.max_input_tokens) : ds;
    out.timings.truncate_ms = elapsed_ms(t);

    t = Clock::now();
    AnnotatorSpec spec;
    spec.kind = cfg.annotator;
    const DerivationalLexicon* lex = &res.lexicon;
    spec.is_known_verb = [lex](std::string_view v) { return lex->contains(v); };
    out.annotated = annotate(work, spec);
    out.timings.annotate_ms = elapsed_ms(t);
    const auto& sentences = out.annotated.sentences;
    const int n = static_cast<int>(sentences.size());
    if (n == 0) {
        out.warnings.push_back("document set has no sentences after truncation; summary is empty");
        out.timings.total_ms = elapsed_ms(start);
        return out;
    }

    t = Clock::now();
    out.graph = build_graph(out.annotated, res.lexicon, res.embeddings, cfg.indicators);
    out.timings.graph_ms = elapsed_ms(t);

    t = Clock::now();
    switch (cfg.method.method) {
        case CountMethod::Ttr: out.count = cluster_count_ttr(out.annotated, cfg.ttr, cfg.seed); break;
        case CountMethod::Distance:
            out.count = cluster_count_distance(out.graph, cfg.distance_range, cfg.seed, cfg.spectral, cfg.unreachable);
            break;
        case CountMethod::Eigengap: out.count = cluster_count_eigengap(out.graph, cfg.eigengap_k_max); break;
        case CountMethod::Fixed:
            out.count.method = CountMethod::Fixed;
            out.count.n_sent = n;
            out.count.k = std::min(cfg.method.fixed_k, n);
            if (out.count.k < cfg.method.fixed_k) {
                out.count.warnings.push_back("fixed k " + std::to_string(cfg.method.fixed_k) + " clamped to " +
                                             std::to_string(n) + " sentences");
            }
            break;
    }
    out.timings.count_ms = elapsed_ms(t);
    out.warnings.insert(out.warnings.end(), out.count.warnings.begin(), out.count.warnings.end());

    t = Clock::now();
    const auto cut = spectral_cut(out.graph, out.count.k, cfg.seed, cfg.spectral);
    out.timings.cluster_ms = elapsed_ms(t);
    out.eigenvalues.assign(cut.eigenvalues.begin(), cut.eigenvalues.end());
    out.labels = cut.assignment.labels;
    out.cluster_count = cut.assignment.k;
    if (cut.assignment.k_reduced) {
        out.warnings.push_back("k-means produced empty clusters; k reduced from " + std::to_string(out.count.k) +
                               " to " + std::to_string(cut.assignment.k));
    }

    t = Clock::now();
    const NgramModel model = NgramModel::from_docset(out.annotated);
    const auto members = cut.assignment.clusters();
    for (int c : order_clusters(cut.assignment, sentences)) {
        const auto& ids = members[static_cast<std::size_t>(c)];
        std::vector<AnnotatedSentence> cluster;
        cluster.reserve(ids.size());
        for (std::size_t i : ids) cluster.push_back(sentences[i]);
        std::vector<std::size_t> global;
        for (const auto& s : cluster) global.push_back(s.global_index);
        out.per_cluster_sentences.push_back(std::move(global));
        out.cluster_summaries.push_back(compress_cluster(cluster, cfg.compression, model).text);
    }
    out.timings.compress_ms = elapsed_ms(t);

    out.summary = enforce_length(out.cluster_summaries, cfg.max_output_tokens);
    out.timings.total_ms = elapsed_ms(start);
    return out;
}

int resolve_thread_count(std::optional<int> requested) {
    std::optional<int> cap;
    if (const char* env = std::getenv("GLIMMER_THREADS"); env != nullptr && *env != '\0') {
        int v = 0;
        const std::string_view s(env);
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec == std::errc() && ptr == s.data() + s.size() && v > 0) cap = v;
    }
    int n = requested.value_or(0);
    if (n <= 0) n = cap.value_or(static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));
    if (cap) n = std::min(n, *cap);
    return std::max(n, 1);
}

std::vector<SummaryResult> summarize_all(const std::vector<DocumentSet>& sets, const Resources& res,
                                         const PipelineConfig& cfg, int threads) {
    std::vector<SummaryResult> results(sets.size());
    std::vector<std::exception_ptr> errors(sets.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < sets.size(); i = next++) {
            try {
                results[i] = summarize_docset(sets[i], res, cfg);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int workers = std::clamp<int>(threads, 1, static_cast<int>(std::max<std::size_t>(sets.size(), 1)));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return results;
}

nlohmann::json diagnostics_json(const SummaryResult& r) {
    nlohmann::json j = to_json(r.count);
    j["cluster_count"] = r.cluster_count;
    j["clusters"] = r.per_cluster_sentences;
    j["cluster_summaries"] = r.cluster_summaries;
    j["timings_ms"] = {{"truncate", r.timings.truncate_ms}, {"annotate", r.timings.annotate_ms},
                       {"graph", r.timings.graph_ms},       {"count", r.timings.count_ms},
                       {"cluster", r.timings.cluster_ms},   {"compress", r.timings.compress_ms},
                       {"total", r.timings.total_ms}};
    j["warnings"] = r.warnings;
    return j;
}

nlohmann::json clusters_json(const SummaryResult& r) {
    return {{"k", r.cluster_count}, {"labels", r.labels}, {"eigenvalues", r.eigenvalues}};
}

}  // namespace glimmer
