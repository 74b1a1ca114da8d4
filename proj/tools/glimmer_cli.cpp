#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "glimmer/pipeline.hpp"
#include "glimmer/rouge.hpp"

namespace {

using namespace glimmer;

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void require_file(const std::string& path, const std::string& what) {
    if (path.empty()) throw UsageError("missing required " + what + " path");
    if (!std::filesystem::is_regular_file(path)) throw UsageError(what + " file not found: " + path);
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    return out;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open " + path);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

/// One reference set per non-blank line: a string, an array of strings, or an
/// object carrying "summary" / "references".
std::vector<std::vector<std::string>> read_references(const std::string& path) {
    std::vector<std::vector<std::string>> out;
    std::size_t record = 0;
    for (const auto& line : read_lines(path)) {
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        ++record;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw DataError("references record " + std::to_string(record) + ": " + e.what());
        }
        if (j.is_object()) {
            if (j.contains("references")) {
                j = j["references"];
            } else if (j.contains("summary")) {
                j = j["summary"];
            } else {
                throw DataError("references record " + std::to_string(record) + ": no summary field");
            }
        }
        std::vector<std::string> refs;
        if (j.is_string()) {
            refs.push_back(j.get<std::string>());
        } else if (j.is_array()) {
            for (const auto& r : j) {
                if (!r.is_string()) throw DataError("references record " + std::to_string(record) + ": non-string");
                refs.push_back(r.get<std::string>());
            }
        } else {
            throw DataError("references record " + std::to_string(record) + ": expected string or array");
        }
        out.push_back(std::move(refs));
    }
    return out;
}

struct SummarizeArgs {
    std::string input, output, config, method, embeddings, lexicon, preset, ttr_band, annotator;
    std::string dump_graph, dump_clusters, dump_wordgraph, diagnostics;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> max_input, max_output;
    std::optional<double> sigma, beta;
    std::optional<int> k_paths, min_tokens, threads, k_max;
    bool no_truncate = false;
    bool no_fluency = false;
};

int run_summarize(const SummarizeArgs& a) {
    PipelineConfig cfg;
    if (!a.config.empty()) {
        require_file(a.config, "config");
        apply_config_file(cfg, a.config);
    }
    if (!a.method.empty()) cfg.method = parse_method(a.method);
    if (a.seed) cfg.seed = *a.seed;
    if (!a.embeddings.empty()) cfg.embeddings_path = a.embeddings;
    if (!a.lexicon.empty()) cfg.lexicon_path = a.lexicon;
    if (!a.preset.empty()) cfg.max_output_tokens = preset_output_tokens(a.preset);
    if (a.max_output) cfg.max_output_tokens = *a.max_output;
    if (a.max_input) cfg.max_input_tokens = *a.max_input;
    if (a.no_truncate) cfg.max_input_tokens.reset();
    if (a.sigma) cfg.ttr.sigma = *a.sigma;
    if (a.beta) cfg.ttr.beta = *a.beta;
    if (!a.ttr_band.empty()) apply_setting(cfg, "ttr_band", a.ttr_band);
    if (!a.annotator.empty()) apply_setting(cfg, "annotator", a.annotator);
    if (a.no_fluency) cfg.compression.fluency = false;
    if (a.k_paths) cfg.compression.k_paths = *a.k_paths;
    if (a.min_tokens) cfg.compression.filter.min_tokens = *a.min_tokens;
    if (a.k_max) apply_setting(cfg, "k_max", std::to_string(*a.k_max));
    cfg.validate();

    require_file(a.input, "input");
    require_file(cfg.embeddings_path, "embeddings");
    require_file(cfg.lexicon_path, "lexicon");
    const Resources res = load_resources(cfg.embeddings_path, cfg.lexicon_path);
    const auto sets = load_docsets(a.input);

    auto out = open_output(a.output);
    std::optional<std::ofstream> graph_out, cluster_out, wordgraph_out, diag_out;
    if (!a.dump_graph.empty()) graph_out = open_output(a.dump_graph);
    if (!a.dump_clusters.empty()) cluster_out = open_output(a.dump_clusters);
    if (!a.dump_wordgraph.empty()) wordgraph_out = open_output(a.dump_wordgraph);
    if (!a.diagnostics.empty()) diag_out = open_output(a.diagnostics);

    const auto results = summarize_all(sets, res, cfg, resolve_thread_count(a.threads));
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        out << r.summary << '\n';
        for (const auto& w : r.warnings) std::cerr << "record " << (i + 1) << ": warning: " << w << '\n';
        if (graph_out) *graph_out << graph_to_json(r.graph).dump() << '\n';
        if (cluster_out) *cluster_out << clusters_json(r).dump() << '\n';
        if (diag_out) *diag_out << diagnostics_json(r).dump() << '\n';
        if (wordgraph_out) {
            nlohmann::json graphs = nlohmann::json::array();
            for (const auto& ids : r.per_cluster_sentences) {
                std::vector<AnnotatedSentence> cluster;
                for (std::size_t id : ids) cluster.push_back(r.annotated.sentences[id]);
                graphs.push_back(word_graph_to_json(build_word_graph(cluster, cfg.compression.graph)));
            }
            *wordgraph_out << graphs.dump() << '\n';
        }
    }
    return 0;
}

int run_eval(const std::string& system, const std::string& refs, const std::string& report_path) {
    require_file(system, "system output");
    require_file(refs, "references");
    auto outputs = read_lines(system);
    while (!outputs.empty() && outputs.back().empty()) outputs.pop_back();
    const auto report = evaluate_corpus(outputs, read_references(refs));
    const auto j = to_json(report);
    if (!report_path.empty()) {
        auto out = open_output(report_path);
        out << j.dump(2) << '\n';
    }
    std::cout << "R1 " << report.mean.r1 << "  R2 " << report.mean.r2 << "  RL " << report.mean.rl << '\n';
    return 0;
}

int run_baseline(const std::string& input, const std::string& output, int n, std::optional<std::size_t> max_input,
                 bool no_truncate) {
    require_file(input, "input");
    auto out = open_output(output);
    for (const auto& ds : load_docsets(input)) {
        DocumentSet work = ds;
        if (!no_truncate) work = truncate_docset(ds, max_input.value_or(500));
        out << first_n_baseline(annotate(work, {}), n) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"glimmer: unsupervised multi-document summarizer"};
    app.require_subcommand(1);

    SummarizeArgs s;
    auto* sum = app.add_subcommand("summarize", "Summarize every document set of a JSONL corpus");
    sum->add_option("--input", s.input, "Input JSONL corpus")->required();
    sum->add_option("--output", s.output, "Output text file, one summary per line")->required();
    sum->add_option("--config", s.config, "key = value config file (flags override it)");
    sum->add_option("--method", s.method, "Cluster count method: ttr | distance | eigengap | fixed:<k>");
    sum->add_option("--embeddings", s.embeddings, "Word vectors (text format)");
    sum->add_option("--lexicon", s.lexicon, "Derivational lexicon (verb<TAB>nouns)");
    sum->add_option("--seed", s.seed, "Random seed");
    auto* max_in = sum->add_option("--max-input", s.max_input, "Input truncation budget in tokens (default 500)");
    sum->add_flag("--no-truncate", s.no_truncate, "Disable input truncation")->excludes(max_in);
    sum->add_option("--max-output", s.max_output, "Output length cap in tokens");
    sum->add_option("--preset", s.preset, "Output length preset: multinews | multixscience | duc2004");
    sum->add_option("--sigma", s.sigma, "TTR band half-width");
    sum->add_option("--beta", s.beta, "TTR low/high weight");
    sum->add_option("--ttr-band", s.ttr_band, "three | two");
    sum->add_option("--k-max", s.k_max, "Upper cluster count for distance/eigengap");
    sum->add_flag("--no-fluency", s.no_fluency, "Pick the shortest path without fluency re-ranking");
    sum->add_option("--k-paths", s.k_paths, "Candidate paths re-ranked per cluster");
    sum->add_option("--min-tokens", s.min_tokens, "Minimum words in a compressed sentence");
    sum->add_option("--annotator", s.annotator, "builtin | pre-annotated");
    sum->add_option("--dump-graph", s.dump_graph, "Write sentence graphs (JSONL)");
    sum->add_option("--dump-clusters", s.dump_clusters, "Write cluster labels and eigenvalues (JSONL)");
    sum->add_option("--dump-wordgraph", s.dump_wordgraph, "Write per-cluster word graphs (JSONL)");
    sum->add_option("--diagnostics", s.diagnostics, "Write per-record diagnostics (JSONL)");
    sum->add_option("--threads", s.threads, "Worker threads (capped by GLIMMER_THREADS)");

    std::string system, refs, report;
    auto* ev = app.add_subcommand("eval", "Score system summaries with ROUGE-1/2/L f1");
    ev->add_option("--system", system, "System summaries, one per line")->required();
    ev->add_option("--refs", refs, "Reference summaries (JSONL)")->required();
    ev->add_option("--report", report, "JSON report path");

    std::string b_input, b_output;
    int b_n = 2;
    std::optional<std::size_t> b_max_input;
    bool b_no_truncate = false;
    auto* base = app.add_subcommand("baseline", "First-n sentences of every document");
    base->add_option("--input", b_input, "Input JSONL corpus")->required();
    base->add_option("--output", b_output, "Output text file")->required();
    base->add_option("--n", b_n, "Sentences per document")->check(CLI::PositiveNumber);
    auto* b_max = base->add_option("--max-input", b_max_input, "Input truncation budget in tokens (default 500)");
    base->add_flag("--no-truncate", b_no_truncate, "Disable input truncation")->excludes(b_max);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*sum) return run_summarize(s);
        if (*ev) return run_eval(system, refs, report);
        return run_baseline(b_input, b_output, b_n, b_max_input, b_no_truncate);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
}
