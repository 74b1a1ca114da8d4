#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace glimmer {

/// Malformed input data (corpus records, resource files). Maps to CLI exit code 1.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Coarse part-of-speech tag set.
enum class Pos { Noun, Verb, Adj, Adv, Pron, Det, Adp, Conj, Num, Punct, Other };

std::string_view to_string(Pos pos);

/// Accepts the coarse tags above plus the Universal Dependencies names
/// (PROPN, AUX, CCONJ, SCONJ, PART, INTJ, SYM, X), mapped onto the coarse set.
std::optional<Pos> parse_pos(std::string_view tag);

struct EntityTag {
    std::string type;
    bool begin = true;  // B- (true) or I- (false)

    bool operator==(const EntityTag&) const = default;
};

struct Token {
    std::string surface;
    std::string lower;
    Pos pos = Pos::Other;
    std::string lemma;
    std::optional<EntityTag> entity;
};

struct AnnotatedSentence {
    std::vector<Token> tokens;
    std::size_t doc_index = 0;
    std::size_t sent_index_in_doc = 0;
    std::size_t global_index = 0;
};

/// One raw pre-annotated token as read from the input record.
struct RawToken {
    std::string text;
    std::string pos;
    std::string lemma;
    std::string ent;  // "O", "B-TYPE" or "I-TYPE"; empty means "O"
};

using RawSentence = std::vector<RawToken>;

struct Document {
    std::string text;
    /// Present when the record carried sentence/token annotations.
    std::optional<std::vector<RawSentence>> annotated;
};

struct DocumentSet {
    std::vector<Document> documents;
    std::vector<AnnotatedSentence> sentences;
    std::vector<std::string> reference_summaries;

    std::size_t sentence_count() const { return sentences.size(); }
};

enum class InputFormat { Jsonl };

/// Parses a JSON Lines corpus. Blank lines are skipped; record numbers in
/// error messages are 1-based and count non-blank lines.
std::vector<DocumentSet> load_docsets(const std::string& path, InputFormat format = InputFormat::Jsonl);
std::vector<DocumentSet> parse_docsets(std::string_view jsonl);

// ---------------------------------------------------------------------------
// Tokenization

/// A token produced by the punctuation-detaching tokenizer, with its byte span
/// in the source text.
struct TextToken {
    std::string text;
    std::size_t begin = 0;
    std::size_t end = 0;
};

/// Whitespace splitting with leading/trailing punctuation detached. Known
/// abbreviations ("Mr.", "U.S.", single-letter initials) keep their period.
std::vector<TextToken> tokenize(std::string_view text);

/// Number of whitespace-delimited tokens.
std::size_t whitespace_token_count(std::string_view text);

bool is_punctuation(std::string_view token);

/// Joins tokens with single spaces, attaching punctuation to its neighbour
/// (no space before .,;:!?%) or closing brackets/quotes, none after opening ones).
std::string detokenize(const std::vector<std::string>& tokens);

std::string to_lower(std::string_view s);

// ---------------------------------------------------------------------------
// Truncation

/// Per-document token allocation for a total budget: equal shares, with the
/// surplus of short documents redistributed until the budget is met.
std::vector<std::size_t> allocate_token_budget(const std::vector<std::size_t>& lengths, std::size_t budget);

/// Keeps the first allocated tokens of every document. Documents that fit are
/// returned untouched.
DocumentSet truncate_docset(const DocumentSet& ds, std::size_t budget);

// ---------------------------------------------------------------------------
// Annotation

enum class AnnotatorKind { BuiltinHeuristic, PreAnnotated };

struct AnnotatorSpec {
    AnnotatorKind kind = AnnotatorKind::BuiltinHeuristic;
    /// Optional verb vocabulary used by the builtin lemmatizer to pick among
    /// suffix-stripping candidates (e.g. the derivational lexicon's keys).
    std::function<bool(std::string_view)> is_known_verb;
};

/// Segments and annotates every document; fills ds.sentences with dense
/// global indices.
DocumentSet annotate(const DocumentSet& ds, const AnnotatorSpec& annotator);

/// Builtin heuristics, exposed for testing.
std::vector<std::vector<TextToken>> split_sentences(std::string_view text);
std::vector<Token> tag_sentence(const std::vector<TextToken>& sentence, const AnnotatorSpec& annotator);
std::string lemmatize(std::string_view lower, Pos pos, const std::function<bool(std::string_view)>& is_known_verb = {});

/// Surface realization of a sentence.
std::string sentence_text(const AnnotatedSentence& s);

}  // namespace glimmer
