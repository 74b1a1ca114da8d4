#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "glimmer/clustnum.hpp"
#include "glimmer/corpus.hpp"
#include "glimmer/lexsem.hpp"
#include "glimmer/sentgraph.hpp"
#include "glimmer/spectral.hpp"
#include "glimmer/wordgraph.hpp"

namespace glimmer {

/// Invalid configuration (bad flag values, unknown config keys). Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MethodSpec {
    CountMethod method = CountMethod::Ttr;
    int fixed_k = 9;
};

/// "ttr", "distance", "eigengap" or "fixed:<k>".
MethodSpec parse_method(std::string_view text);
std::string to_string(const MethodSpec& m);

/// Output length presets: multinews 256, multixscience 128, duc2004 128.
std::size_t preset_output_tokens(std::string_view preset);

struct PipelineConfig {
    MethodSpec method;
    std::optional<std::size_t> max_input_tokens = 500;  // nullopt disables truncation
    std::size_t max_output_tokens = 256;
    std::uint64_t seed = 0;
    AnnotatorKind annotator = AnnotatorKind::BuiltinHeuristic;
    std::string embeddings_path;
    std::string lexicon_path;

    IndicatorConfig indicators;
    TtrConfig ttr;
    SpectralOptions spectral;
    std::optional<KRange> distance_range;
    std::optional<int> unreachable;
    int eigengap_k_max = 15;
    CompressionConfig compression;

    void validate() const;
};

/// Applies one `key = value` setting; throws ConfigError on unknown keys or bad values.
void apply_setting(PipelineConfig& cfg, std::string_view key, std::string_view value);
/// Flat `key = value` file; '#' starts a comment. List values are comma-separated.
void apply_config_text(PipelineConfig& cfg, std::string_view text);
void apply_config_file(PipelineConfig& cfg, const std::string& path);

struct Resources {
    EmbeddingStore embeddings;
    DerivationalLexicon lexicon;
};

Resources load_resources(const std::string& embeddings_path, const std::string& lexicon_path);

struct Timings {
    double truncate_ms = 0.0;
    double annotate_ms = 0.0;
    double graph_ms = 0.0;
    double count_ms = 0.0;
    double cluster_ms = 0.0;
    double compress_ms = 0.0;
    double total_ms = 0.0;
};

struct SummaryResult {
    std::string summary;
    int cluster_count = 0;
    /// Global sentence indices of each cluster, in output order.
    std::vector<std::vector<std::size_t>> per_cluster_sentences;
    std::vector<std::string> cluster_summaries;  // same order
    ClusterCountResult count;
    std::vector<double> eigenvalues;
    std::vector<int> labels;
    SentenceGraph graph;
    DocumentSet annotated;
    Timings timings;
    std::vector<std::string> warnings;
};

SummaryResult summarize_docset(const DocumentSet& ds, const Resources& res, const PipelineConfig& cfg);

/// Cluster ids sorted by the smallest global_index among their members.
std::vector<int> order_clusters(const ClusterAssignment& assign, const std::vector<AnnotatedSentence>& sentences);

/// Whole sentences while the running token count fits; a first sentence
/// longer than the budget is cut at a token boundary.
std::string enforce_length(const std::vector<std::string>& sentences, std::size_t budget);

/// Scoring/length token count of a text (corpus tokenizer).
std::size_t output_token_count(std::string_view text);

/// Worker count: explicit request, else GLIMMER_THREADS, else hardware concurrency.
/// GLIMMER_THREADS also caps an explicit request.
int resolve_thread_count(std::optional<int> requested);

/// Summarizes every document set on a worker pool; results keep input order.
std::vector<SummaryResult> summarize_all(const std::vector<DocumentSet>& sets, const Resources& res,
                                         const PipelineConfig& cfg, int threads);

nlohmann::json diagnostics_json(const SummaryResult& r);
nlohmann::json clusters_json(const SummaryResult& r);

}  // namespace glimmer
