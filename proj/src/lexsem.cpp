#include "glimmer/lexsem.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace glimmer {

namespace {

std::string read_file(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(std::string("cannot open ") + what + " file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

bool parse_double(std::string_view s, double& out) {
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end;
}

bool is_integer(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

bool EmbeddingStore::add(std::string_view word, const Eigen::Ref<const Eigen::VectorXd>& vec) {
    if (dimension_ == 0) dimension_ = static_cast<int>(vec.size());
    if (vec.size() != dimension_) throw std::invalid_argument("EmbeddingStore::add: dimension mismatch");
    std::string key = to_lower(word);
    if (index_.contains(key)) return false;
    index_.emplace(key, words_.size());
    words_.push_back(std::move(key));
    data_.insert(data_.end(), vec.data(), vec.data() + vec.size());
    normalized_valid_ = false;
    return true;
}

std::optional<std::size_t> EmbeddingStore::index_of(std::string_view word) const {
    auto it = index_.find(to_lower(word));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Eigen::Map<const Eigen::VectorXd> EmbeddingStore::vector(std::size_t index) const {
    return Eigen::Map<const Eigen::VectorXd>(data_.data() + index * static_cast<std::size_t>(dimension_), dimension_);
}

const Eigen::MatrixXd& EmbeddingStore::normalized() const {
    // Built once after loading; concurrent readers only see the finished table.
    if (!normalized_valid_) {
        using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        normalized_ = Eigen::Map<const RowMajor>(data_.data(), static_cast<Eigen::Index>(words_.size()), dimension_);
        for (Eigen::Index r = 0; r < normalized_.rows(); ++r) {
            const double n = normalized_.row(r).norm();
            if (n > 0) normalized_.row(r) /= n;
        }
        normalized_valid_ = true;
    }
    return normalized_;
}

EmbeddingStore parse_embeddings(std::string_view text) {
    EmbeddingStore store;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    Eigen::VectorXd vec;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        const std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        const auto fields = split_fields(line);
        if (fields.empty()) continue;
        // word2vec-style "count dim" header
        if (line_no == 1 && fields.size() == 2 && is_integer(fields[0]) && is_integer(fields[1])) continue;
        if (fields.size() < 2) throw DataError("embeddings line " + std::to_string(line_no) + ": no vector values");
        const int dim = static_cast<int>(fields.size() - 1);
        if (store.dimension() != 0 && dim != store.dimension()) {
            throw DataError("embeddings line " + std::to_string(line_no) + ": expected " +
                            std::to_string(store.dimension()) + " values, found " + std::to_string(dim));
        }
        vec.resize(dim);
        for (int i = 0; i < dim; ++i) {
            if (!parse_double(fields[static_cast<std::size_t>(i) + 1], vec[i])) {
                throw DataError("embeddings line " + std::to_string(line_no) + ": bad number '" +
                                std::string(fields[static_cast<std::size_t>(i) + 1]) + "'");
            }
        }
        store.add(fields[0], vec);
    }
    if (store.empty()) throw DataError("embeddings: no vectors");
    store.normalized();
    return store;
}

EmbeddingStore load_embeddings(const std::string& path) { return parse_embeddings(read_file(path, "embeddings")); }

Eigen::VectorXd sentence_vector(const AnnotatedSentence& s, const EmbeddingStore& store) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(store.dimension());
    int count = 0;
    for (const auto& t : s.tokens) {
        if (t.pos == Pos::Punct) continue;
        if (auto idx = store.index_of(t.lower)) {
            sum += store.vector(*idx);
            ++count;
        }
    }
    if (count > 0) sum /= count;
    return sum;
}

std::vector<Neighbor> nearest_neighbors(std::string_view word, const EmbeddingStore& store, int m, double min_sim) {
    if (m < 1) throw std::invalid_argument("nearest_neighbors: m must be >= 1");
    const auto query = store.index_of(word);
    if (!query) return {};
    const Eigen::MatrixXd& table = store.normalized();
    const Eigen::VectorXd sims = table * table.row(static_cast<Eigen::Index>(*query)).transpose();
    const bool zero_query = table.row(static_cast<Eigen::Index>(*query)).squaredNorm() == 0.0;
    std::vector<Neighbor> hits;
    if (zero_query) return hits;
    for (Eigen::Index i = 0; i < sims.size(); ++i) {
        if (static_cast<std::size_t>(i) == *query) continue;
        const double sim = std::clamp(sims[i], -1.0, 1.0);
        if (sim >= min_sim) hits.push_back({store.word(static_cast<std::size_t>(i)), sim});
    }
    auto better = [](const Neighbor& a, const Neighbor& b) {
        if (a.similarity != b.similarity) return a.similarity > b.similarity;
        return a.word < b.word;
    };
    const std::size_t keep = std::min<std::size_t>(hits.size(), static_cast<std::size_t>(m));
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(keep), hits.end(), better);
    hits.resize(keep);
    return hits;
}

void DerivationalLexicon::add(std::string_view verb, std::string_view noun) {
    if (verb.empty() || noun.empty()) return;
    entries_[to_lower(verb)].insert(to_lower(noun));
}

const std::set<std::string>* DerivationalLexicon::find(std::string_view verb) const {
    auto it = entries_.find(std::string(verb));
    return it == entries_.end() ? nullptr : &it->second;
}

DerivationalLexicon parse_lexicon(std::string_view text) {
    DerivationalLexicon lex;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string_view::npos) {
            throw DataError("lexicon line " + std::to_string(line_no) + ": expected verb<TAB>nouns");
        }
        const std::string_view verb = line.substr(0, tab);
        std::string_view nouns = line.substr(tab + 1);
        while (!nouns.empty()) {
            const std::size_t comma = nouns.find(',');
            std::string_view noun = nouns.substr(0, comma);
            while (!noun.empty() && noun.front() == ' ') noun.remove_prefix(1);
            while (!noun.empty() && noun.back() == ' ') noun.remove_suffix(1);
            lex.add(verb, noun);
            if (comma == std::string_view::npos) break;
            nouns.remove_prefix(comma + 1);
        }
    }
    return lex;
}

DerivationalLexicon load_lexicon(const std::string& path) { return parse_lexicon(read_file(path, "lexicon")); }

std::set<std::string> nominalizations(std::string_view verb_lemma, const DerivationalLexicon& lex,
                                      const EmbeddingStore& store, int m, double min_sim) {
    std::set<std::string> out;
    const auto* nouns = lex.find(to_lower(verb_lemma));
    if (!nouns) return out;
    for (const auto& noun : *nouns) {
        out.insert(noun);
        if (store.empty()) continue;
        for (auto& n : nearest_neighbors(noun, store, m, min_sim)) out.insert(std::move(n.word));
    }
    return out;
}

}  // namespace glimmer
