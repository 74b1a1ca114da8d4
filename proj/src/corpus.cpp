#include "glimmer/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace glimmer {

namespace {

using json = nlohmann::json;

constexpr std::array kPosNames{"NOUN", "VERB", "ADJ", "ADV", "PRON", "DET", "ADP", "CONJ", "NUM", "PUNCT", "OTHER"};

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// Multi-byte punctuation that is detached like its ASCII counterparts.
constexpr std::array<std::string_view, 6> kOpeningUtf8{"“", "‘", "«", "—", "–", "…"};
constexpr std::array<std::string_view, 6> kClosingUtf8{"”", "’", "»", "—", "–", "…"};

constexpr std::string_view kLeadingAscii = "\"'([{`";
constexpr std::string_view kTrailingAscii = ".,;:!?\"')]}";

const std::unordered_set<std::string>& abbreviations() {
    static const std::unordered_set<std::string> set{
        "mr.",   "mrs.", "ms.",  "dr.",   "prof.", "sr.",  "jr.",   "st.",  "mt.",  "gen.", "gov.",
        "sen.",  "rep.", "lt.",  "col.",  "sgt.",  "capt.", "cmdr.", "inc.", "corp.", "ltd.", "co.",
        "vs.",   "etc.", "e.g.", "i.e.",  "jan.",  "feb.", "mar.",  "apr.", "jun.", "jul.", "aug.",
        "sep.",  "sept.", "oct.", "nov.", "dec.",  "no.",  "u.s.",  "u.k.", "u.n.", "a.m.", "p.m.",
        "d.c.",  "ave.", "blvd.", "dept.", "est.", "fig.", "approx."};
    return set;
}

bool is_abbreviation(std::string_view chunk) {
    if (chunk.size() < 2 || chunk.back() != '.') return false;
    const std::string lower = to_lower(chunk);
    if (abbreviations().contains(lower)) return true;
    // Initials and dotted acronyms: "J." or "U.S.A."
    if (chunk.size() == 2 && is_alpha(chunk[0])) return true;
    for (std::size_t i = 0; i < chunk.size(); i += 2) {
        if (i + 1 >= chunk.size() || !is_alpha(chunk[i]) || chunk[i + 1] != '.') return false;
    }
    return true;
}

bool is_contraction(std::string_view chunk) {
    static const std::unordered_set<std::string> set{"'s", "'re", "'ve", "'ll", "'d", "'m", "n't", "'t"};
    return set.contains(to_lower(chunk));
}

std::size_t leading_punct_len(std::string_view s) {
    if (s.empty()) return 0;
    if (kLeadingAscii.find(s.front()) != std::string_view::npos) return 1;
    for (auto p : kOpeningUtf8) {
        if (s.starts_with(p)) return p.size();
    }
    return 0;
}

std::size_t trailing_punct_len(std::string_view s) {
    if (s.empty()) return 0;
    if (kTrailingAscii.find(s.back()) != std::string_view::npos) return 1;
    for (auto p : kClosingUtf8) {
        if (s.ends_with(p)) return p.size();
    }
    return 0;
}

void split_chunk(std::string_view text, std::size_t begin, std::size_t end, std::vector<TextToken>& out) {
    std::string_view chunk = text.substr(begin, end - begin);
    if (chunk == "..." || is_contraction(chunk) || is_punctuation(chunk)) {
        out.push_back({std::string(chunk), begin, end});
        return;
    }
    std::vector<TextToken> tail;
    while (!chunk.empty()) {
        const std::size_t n = leading_punct_len(chunk);
        if (n == 0 || n == chunk.size()) break;
        out.push_back({std::string(chunk.substr(0, n)), begin, begin + n});
        chunk.remove_prefix(n);
        begin += n;
    }
    while (!chunk.empty()) {
        if (chunk.ends_with("...") && chunk.size() > 3) {
            tail.push_back({"...", end - 3, end});
            chunk.remove_suffix(3);
            end -= 3;
            continue;
        }
        if (chunk.back() == '.' && is_abbreviation(chunk)) break;
        const std::size_t n = trailing_punct_len(chunk);
        if (n == 0 || n == chunk.size()) break;
        tail.push_back({std::string(chunk.substr(chunk.size() - n)), end - n, end});
        chunk.remove_suffix(n);
        end -= n;
    }
    if (!chunk.empty()) out.push_back({std::string(chunk), begin, end});
    out.insert(out.end(), tail.rbegin(), tail.rend());
}

// ---------------------------------------------------------------------------
// Closed-class lexicon for the builtin tagger.

const std::unordered_map<std::string, Pos>& closed_class() {
    static const std::unordered_map<std::string, Pos> map = [] {
        std::unordered_map<std::string, Pos> m;
        auto add = [&m](Pos pos, std::initializer_list<const char*> words) {
            for (const char* w : words) m.emplace(w, pos);
        };
        add(Pos::Det, {"the", "a", "an", "this", "that", "these", "those", "every", "each", "some", "any",
                       "no", "all", "both", "another", "either", "neither", "such", "my", "your", "his",
                       "its", "our", "their", "her", "several", "many", "few", "much", "more", "most",
                       "less", "least", "other", "whose"});
        add(Pos::Pron, {"i", "you", "he", "she", "it", "we", "they", "me", "him", "us", "them", "mine",
                        "yours", "hers", "ours", "theirs", "myself", "yourself", "himself", "herself",
                        "itself", "ourselves", "themselves", "who", "whom", "which", "what", "whoever",
                        "whatever", "someone", "anyone", "everyone", "nobody", "somebody", "everybody",
                        "something", "anything", "everything", "nothing", "one"});
        add(Pos::Adp, {"in", "on", "at", "by", "for", "with", "from", "to", "of", "about", "into", "onto",
                       "over", "under", "after", "before", "during", "between", "through", "against",
                       "without", "within", "since", "until", "among", "across", "behind", "near", "upon",
                       "toward", "towards", "around", "along", "despite", "via", "per", "amid", "beyond",
                       "above", "below", "beside", "inside", "outside", "throughout", "like", "than",
                       "off", "up", "down", "out"});
        add(Pos::Conj, {"and", "or", "but", "nor", "because", "although", "though", "while", "whereas",
                        "if", "unless", "whether", "as", "so", "yet", "once", "whenever", "wherever"});
        add(Pos::Adv, {"not", "n't", "very", "also", "still", "just", "however", "moreover", "furthermore",
                       "therefore", "thus", "meanwhile", "nevertheless", "nonetheless", "instead",
                       "otherwise", "then", "now", "here", "there", "when", "where", "why", "how",
                       "already", "again", "ever", "never", "always", "often", "soon", "later", "too",
                       "even", "only", "almost", "quite", "rather", "perhaps", "maybe", "yesterday",
                       "today", "tomorrow", "hence", "besides", "afterward", "afterwards", "ago",
                       "away", "back", "together", "abroad", "else", "indeed", "once"});
        add(Pos::Verb, {"is", "are", "was", "were", "be", "been", "being", "am", "has", "have", "had",
                        "having", "do", "does", "did", "done", "doing", "will", "would", "can", "could",
                        "shall", "should", "may", "might", "must", "'re", "'ve", "'ll", "'d", "'m"});
        add(Pos::Num, {"zero", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
                       "eleven", "twelve", "twenty", "thirty", "forty", "fifty", "hundred", "thousand",
                       "million", "billion", "trillion", "dozen", "first", "second", "third"});
        add(Pos::Other, {"'s", "'t"});
        return m;
    }();
    return map;
}

const std::unordered_map<std::string, std::string>& irregular_verbs() {
    static const std::unordered_map<std::string, std::string> map{
        {"is", "be"},         {"are", "be"},        {"was", "be"},        {"were", "be"},
        {"been", "be"},       {"being", "be"},      {"am", "be"},         {"'re", "be"},
        {"'m", "be"},         {"has", "have"},      {"had", "have"},      {"having", "have"},
        {"'ve", "have"},      {"does", "do"},       {"did", "do"},        {"done", "do"},
        {"doing", "do"},      {"said", "say"},      {"says", "say"},      {"told", "tell"},
        {"made", "make"},     {"took", "take"},     {"taken", "take"},    {"went", "go"},
        {"gone", "go"},       {"goes", "go"},       {"came", "come"},     {"saw", "see"},
        {"seen", "see"},      {"knew", "know"},     {"known", "know"},    {"got", "get"},
        {"gotten", "get"},    {"gave", "give"},     {"given", "give"},    {"found", "find"},
        {"thought", "think"}, {"left", "leave"},    {"meant", "mean"},    {"kept", "keep"},
        {"began", "begin"},   {"begun", "begin"},   {"felt", "feel"},     {"brought", "bring"},
        {"wrote", "write"},   {"written", "write"}, {"sat", "sit"},       {"stood", "stand"},
        {"lost", "lose"},     {"paid", "pay"},      {"met", "meet"},      {"led", "lead"},
        {"understood", "understand"}, {"spoke", "speak"}, {"spoken", "speak"}, {"grew", "grow"},
        {"grown", "grow"},    {"won", "win"},       {"bought", "buy"},    {"sent", "send"},
        {"built", "build"},   {"fell", "fall"},     {"fallen", "fall"},   {"held", "hold"},
        {"fought", "fight"},  {"shot", "shoot"},    {"ran", "run"},       {"rose", "rise"},
        {"risen", "rise"},    {"became", "become"}, {"chose", "choose"},  {"chosen", "choose"},
        {"drove", "drive"},   {"driven", "drive"},  {"broke", "break"},   {"broken", "break"},
        {"spent", "spend"},   {"sold", "sell"},     {"struck", "strike"}, {"taught", "teach"},
        {"caught", "catch"},  {"sought", "seek"},   {"fled", "flee"},     {"hid", "hide"},
        {"hidden", "hide"},   {"ate", "eat"},       {"eaten", "eat"},     {"flew", "fly"},
        {"flown", "fly"},     {"threw", "throw"},   {"thrown", "throw"},  {"drew", "draw"},
        {"drawn", "draw"},    {"wore", "wear"},     {"worn", "wear"},     {"heard", "hear"},
        {"dealt", "deal"},    {"slept", "sleep"},   {"swore", "swear"},   {"sworn", "swear"},
        {"froze", "freeze"},  {"frozen", "freeze"}, {"stole", "steal"},   {"stolen", "steal"},
        {"woke", "wake"},     {"woken", "wake"},    {"forgot", "forget"}, {"forgotten", "forget"},
        {"lay", "lie"},       {"lain", "lie"},      {"laid", "lay"},      {"bit", "bite"},
        {"bitten", "bite"},   {"hung", "hang"},     {"shook", "shake"},   {"shaken", "shake"},
        {"sank", "sink"},     {"sunk", "sink"},     {"wound", "wind"},    {"lent", "lend"},
        {"bent", "bend"},     {"fed", "feed"},      {"bled", "bleed"},    {"sped", "speed"},
        {"'ll", "will"},      {"'d", "would"},      {"ca", "can"},        {"wo", "will"}};
    return map;
}

// Base forms of frequent verbs that carry no verbal suffix.
const std::unordered_set<std::string>& common_verbs() {
    static const std::unordered_set<std::string> set{
        "say", "tell", "make", "take", "go", "come", "see", "know", "get", "give", "find", "think",
        "want", "use", "work", "call", "try", "ask", "need", "feel", "become", "leave", "put", "mean",
        "keep", "let", "begin", "seem", "help", "show", "hear", "play", "run", "move", "live", "believe",
        "bring", "happen", "write", "provide", "sit", "stand", "lose", "pay", "meet", "include",
        "continue", "set", "learn", "change", "lead", "understand", "watch", "follow", "stop", "create",
        "speak", "read", "allow", "add", "spend", "grow", "open", "walk", "win", "offer", "remember",
        "consider", "appear", "buy", "wait", "serve", "die", "send", "expect", "build", "stay", "fall",
        "cut", "reach", "kill", "remain", "suggest", "raise", "pass", "sell", "require", "report",
        "decide", "pull", "announce", "arrest", "destroy", "attack", "claim", "accuse", "deny",
        "confirm", "release", "plan", "agree", "hope", "charge", "vote", "elect", "launch",
        "investigate", "warn", "order", "approve", "reject", "describe", "explain", "develop",
        "receive", "return", "join", "hold", "face", "fight", "protect", "increase", "reduce", "force",
        "prevent", "argue", "admit", "discover", "collapse", "fire", "struggle", "sue", "ban", "shoot",
        "rescue", "injure", "hit", "told", "rise", "drive", "break", "choose", "seek", "flee", "hide",
        "eat", "fly", "throw", "draw", "wear", "deal", "sleep", "steal", "wake", "forget", "hang",
        "shake", "sink", "lend", "bend", "feed", "sign", "ask", "look", "turn", "start", "close",
        "visit", "say", "predict", "estimate", "insist", "urge", "refuse", "fail", "manage"};
    return set;
}

bool is_possessive_or_det(const Token& t) { return t.pos == Pos::Det; }

bool is_subject_pronoun(std::string_view lower) {
    return lower == "i" || lower == "you" || lower == "he" || lower == "she" || lower == "it" ||
           lower == "we" || lower == "they" || lower == "who";
}

bool is_modal(std::string_view lower) {
    static const std::unordered_set<std::string_view> set{"will", "would", "can", "could", "shall",
                                                          "should", "may", "might", "must", "'ll",
                                                          "'d", "to", "did", "does", "do", "n't", "not"};
    return set.contains(lower);
}

bool is_number(std::string_view s) {
    bool digit = false;
    for (char c : s) {
        if (is_digit(c)) {
            digit = true;
        } else if (c != ',' && c != '.' && c != '%' && c != '$' && c != '-' && c != '/') {
            return false;
        }
    }
    return digit;
}

std::optional<Pos> suffix_pos(std::string_view w) {
    auto ends = [w](std::string_view suffix) { return w.size() > suffix.size() + 2 && w.ends_with(suffix); };
    if (ends("ly")) return Pos::Adv;
    for (auto s : {"tion", "tions", "sion", "sions", "ment", "ments", "ness", "ity", "ities", "ance",
                   "ence", "ship", "ism", "ist", "ists", "ers", "ors", "ees", "age", "hood"}) {
        if (ends(s)) return Pos::Noun;
    }
    for (auto s : {"ous", "ful", "ive", "able", "ible", "al", "ic", "less", "ish", "ary", "ese", "ian"}) {
        if (ends(s)) return Pos::Adj;
    }
    for (auto s : {"ize", "izes", "ise", "ify", "ified", "ifies", "ized", "ed", "ing"}) {
        if (ends(s)) return Pos::Verb;
    }
    return std::nullopt;
}

bool is_consonant(char c) {
    return is_alpha(c) && std::string_view("aeiou").find(static_cast<char>(std::tolower(c))) == std::string_view::npos;
}

std::string strip_verb_suffix(std::string_view w, const std::function<bool(std::string_view)>& known) {
    std::vector<std::string> candidates;
    auto undouble = [](std::string_view stem) -> std::optional<std::string> {
        if (stem.size() >= 3 && stem[stem.size() - 1] == stem[stem.size() - 2] && is_consonant(stem.back()) &&
            stem.back() != 'l' && stem.back() != 's' && stem.back() != 'z' && stem.back() != 'f') {
            return std::string(stem.substr(0, stem.size() - 1));
        }
        return std::nullopt;
    };
    auto needs_e = [](std::string_view stem) {
        if (stem.size() < 2) return false;
        const char last = stem.back();
        if (last == 'c' || last == 'v' || last == 'z' || last == 'u') return true;
        return stem.ends_with("rg") || stem.ends_with("dg") || (stem.ends_with("ng") && stem.size() > 4) ||
               stem.ends_with("ls") || stem.ends_with("rs") || stem.ends_with("ns") || stem.ends_with("as") ||
               stem.ends_with("us") || (stem.ends_with("at") && stem.size() > 4) || stem.ends_with("ot") ||
               (stem.ends_with("it") && stem.size() > 5) || stem.ends_with("ir") || stem.ends_with("ur") ||
               stem.ends_with("iz") || stem.ends_with("ak") || stem.ends_with("ok");
    };
    auto push_stem = [&](std::string_view stem, bool e_rule) {
        std::string base(stem);
        if (auto u = undouble(stem)) candidates.push_back(*u);
        if (e_rule && needs_e(stem)) candidates.push_back(base + "e");
        candidates.push_back(base);
        if (e_rule && !needs_e(stem)) candidates.push_back(base + "e");
    };
    if (w.size() > 4 && w.ends_with("ied")) {
        candidates.push_back(std::string(w.substr(0, w.size() - 3)) + "y");
    } else if (w.size() > 4 && w.ends_with("ies")) {
        candidates.push_back(std::string(w.substr(0, w.size() - 3)) + "y");
    } else if (w.size() > 4 && w.ends_with("ing")) {
        push_stem(w.substr(0, w.size() - 3), true);
    } else if (w.size() > 3 && w.ends_with("ed")) {
        push_stem(w.substr(0, w.size() - 2), true);
    } else if (w.size() > 3 && w.ends_with("es")) {
        const std::string_view stem = w.substr(0, w.size() - 2);
        if (stem.ends_with("s") || stem.ends_with("x") || stem.ends_with("z") || stem.ends_with("ch") ||
            stem.ends_with("sh")) {
            candidates.emplace_back(stem);
            candidates.emplace_back(w.substr(0, w.size() - 1));
        } else {
            candidates.emplace_back(w.substr(0, w.size() - 1));
            candidates.emplace_back(stem);
        }
    } else if (w.size() > 2 && w.ends_with("s") && !w.ends_with("ss")) {
        candidates.emplace_back(w.substr(0, w.size() - 1));
    }
    if (candidates.empty()) return std::string(w);
    if (known) {
        if (known(w)) return std::string(w);
        for (const auto& c : candidates) {
            if (known(c)) return c;
        }
    }
    return candidates.front();
}

std::string strip_noun_suffix(std::string_view w) {
    if (w.size() > 4 && w.ends_with("ies")) return std::string(w.substr(0, w.size() - 3)) + "y";
    if (w.size() > 4 && w.ends_with("es")) {
        const std::string_view stem = w.substr(0, w.size() - 2);
        if (stem.ends_with("s") || stem.ends_with("x") || stem.ends_with("z") || stem.ends_with("ch") ||
            stem.ends_with("sh")) {
            return std::string(stem);
        }
    }
    if (w.size() > 3 && w.ends_with("s") && !w.ends_with("ss") && !w.ends_with("us") && !w.ends_with("is")) {
        return std::string(w.substr(0, w.size() - 1));
    }
    return std::string(w);
}

bool capitalized(std::string_view s) { return !s.empty() && is_upper(s.front()); }

bool closing_quote(const std::vector<TextToken>& toks, std::size_t i) {
    const auto& t = toks[i].text;
    const bool quote = t == "\"" || t == "'" || t == ")" || t == "]" || t == "”" || t == "’" ||
                       t == "»";
    return quote && i > 0 && toks[i - 1].end == toks[i].begin;
}

bool is_terminal(std::string_view t) { return t == "." || t == "!" || t == "?" || t == "..." || t == "…"; }

std::vector<Token> tag_with_context(const std::vector<TextToken>& sentence, const AnnotatorSpec& annotator,
                                    const std::unordered_set<std::string>* lower_attested) {
    std::vector<Token> tokens;
    tokens.reserve(sentence.size());
    const auto& closed = closed_class();
    const auto& irregular = irregular_verbs();
    const auto& verbs = common_verbs();

    std::size_t first_word = 0;
    while (first_word < sentence.size() && is_punctuation(sentence[first_word].text)) ++first_word;

    // "May", "Will", "Second" mid-sentence are names, not function words.
    auto proper_name_override = [first_word](std::size_t i, Pos closed_pos, const Token& tok) {
        if (i == first_word || !capitalized(tok.surface) || tok.surface.size() < 2) return false;
        return closed_pos == Pos::Verb || closed_pos == Pos::Adv || closed_pos == Pos::Num;
    };

    // Pass 1: POS
    for (std::size_t i = 0; i < sentence.size(); ++i) {
        Token tok;
        tok.surface = sentence[i].text;
        tok.lower = to_lower(tok.surface);
        const Token* prev = tokens.empty() ? nullptr : &tokens.back();
        if (is_punctuation(tok.surface)) {
            tok.pos = Pos::Punct;
        } else if (is_number(tok.surface)) {
            tok.pos = Pos::Num;
        } else if (auto it = closed.find(tok.lower); it != closed.end() && !proper_name_override(i, it->second, tok)) {
            tok.pos = it->second;
            // "that" after a verb or noun is a complementizer/relative
            if (tok.lower == "that" && prev && (prev->pos == Pos::Verb || prev->pos == Pos::Noun)) tok.pos = Pos::Conj;
        } else if (i != first_word && capitalized(tok.surface)) {
            tok.pos = Pos::Noun;
        } else if (irregular.contains(tok.lower)) {
            tok.pos = Pos::Verb;
        } else {
            const bool after_det = prev && (is_possessive_or_det(*prev) || prev->pos == Pos::Adj ||
                                            (prev->pos == Pos::Adp && prev->lower != "to"));
            const bool verb_context = prev && (is_modal(prev->lower) || is_subject_pronoun(prev->lower));
            const auto guess = suffix_pos(tok.lower);
            std::string base = tok.lower;
            if (base.size() > 3 && base.ends_with("s") && !base.ends_with("ss")) base.pop_back();
            if (verb_context && (!guess || *guess == Pos::Verb || verbs.contains(tok.lower) || verbs.contains(base))) {
                tok.pos = Pos::Verb;
            } else if (guess) {
                tok.pos = *guess;
                if (tok.pos == Pos::Verb && after_det) {
                    tok.pos = tok.lower.ends_with("ing") ? Pos::Noun : Pos::Adj;
                }
            } else if ((verbs.contains(tok.lower) || verbs.contains(base)) && !after_det) {
                tok.pos = Pos::Verb;
            } else {
                tok.pos = Pos::Noun;
            }
        }
        tokens.push_back(std::move(tok));
    }

    // Pass 2: capitalized spans → ENTITY
    auto entity_candidate = [&](std::size_t i) {
        const Token& t = tokens[i];
        if (!capitalized(t.surface) || t.pos == Pos::Punct || t.pos == Pos::Num) return false;
        if (t.surface.size() == 1 && t.lower == "i") return false;
        if (i != first_word) return t.pos == Pos::Noun;
        // Sentence-initial: require a word that is not closed-class, has no
        // derivational suffix, and is never seen lowercase in the document.
        if (closed.contains(t.lower) || irregular.contains(t.lower)) return false;
        if (suffix_pos(t.lower)) return false;
        if (verbs.contains(t.lower)) return false;
        if (lower_attested && lower_attested->contains(t.lower)) return false;
        return true;
    };
    for (std::size_t i = 0; i < tokens.size();) {
        if (!entity_candidate(i)) {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < tokens.size() && tokens[j].pos == Pos::Noun && capitalized(tokens[j].surface)) ++j;
        for (std::size_t k = i; k < j; ++k) {
            tokens[k].pos = Pos::Noun;
            tokens[k].entity = EntityTag{"ENTITY", k == i};
        }
        i = j;
    }

    // Pass 3: lemmas
    for (auto& tok : tokens) {
        if (tok.entity) {
            tok.lemma = tok.lower;
        } else if (tok.pos == Pos::Verb) {
            if (auto it = irregular.find(tok.lower); it != irregular.end()) {
                tok.lemma = it->second;
            } else {
                tok.lemma = lemmatize(tok.lower, Pos::Verb, annotator.is_known_verb);
            }
        } else {
            tok.lemma = lemmatize(tok.lower, tok.pos, annotator.is_known_verb);
        }
    }
    return tokens;
}

std::optional<EntityTag> parse_entity(std::string_view ent) {
    if (ent.empty() || ent == "O") return std::nullopt;
    if (ent.size() > 2 && (ent[0] == 'B' || ent[0] == 'I') && ent[1] == '-') {
        return EntityTag{std::string(ent.substr(2)), ent[0] == 'B'};
    }
    return EntityTag{std::string(ent), true};
}

std::string text_of(const std::vector<RawSentence>& sentences) {
    std::string out;
    for (const auto& s : sentences) {
        for (const auto& t : s) {
            if (!out.empty()) out += ' ';
            out += t.text;
        }
    }
    return out;
}

constexpr std::string_view kMissing = "\x01";  // marks an absent pre-annotation field

std::string field_or_missing(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::string(kMissing);
    if (!it->is_string()) throw DataError(std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
}

RawSentence parse_raw_sentence(const json& sent) {
    if (!sent.is_object() || !sent.contains("tokens") || !sent["tokens"].is_array()) {
        throw DataError("annotated sentence needs a \"tokens\" array");
    }
    const auto& toks = sent["tokens"];
    RawSentence out;
    out.reserve(toks.size());
    if (!toks.empty() && toks.front().is_string()) {
        // Parallel-array layout: {"tokens":[..], "pos":[..], "lemma":[..], "ent":[..]}
        auto column = [&sent](const char* key, std::size_t i) -> std::string {
            auto it = sent.find(key);
            if (it == sent.end() || !it->is_array() || i >= it->size() || (*it)[i].is_null()) {
                return std::string(kMissing);
            }
            return (*it)[i].get<std::string>();
        };
        for (std::size_t i = 0; i < toks.size(); ++i) {
            std::string ent = column("ent", i);
            if (ent == kMissing && !sent.contains("ent")) ent.clear();
            out.push_back({toks[i].get<std::string>(), column("pos", i), column("lemma", i), ent});
        }
    } else {
        for (const auto& t : toks) {
            if (!t.is_object() || !t.contains("t") || !t["t"].is_string()) {
                throw DataError("annotated token needs a string field \"t\"");
            }
            std::string ent = t.contains("ent") && t["ent"].is_string() ? t["ent"].get<std::string>() : "";
            out.push_back({t["t"].get<std::string>(), field_or_missing(t, "pos"), field_or_missing(t, "lemma"), ent});
        }
    }
    return out;
}

DocumentSet parse_record(const json& rec) {
    if (!rec.is_object()) throw DataError("record is not a JSON object");
    auto docs = rec.find("documents");
    if (docs == rec.end() || !docs->is_array()) throw DataError("missing \"documents\" array");
    if (docs->empty()) throw DataError("empty \"documents\" array");
    DocumentSet ds;
    for (const auto& d : *docs) {
        Document doc;
        if (d.is_string()) {
            doc.text = d.get<std::string>();
        } else if (d.is_object() && d.contains("sentences") && d["sentences"].is_array()) {
            std::vector<RawSentence> sentences;
            for (const auto& s : d["sentences"]) sentences.push_back(parse_raw_sentence(s));
            doc.text = text_of(sentences);
            doc.annotated = std::move(sentences);
        } else {
            throw DataError("each document must be a string or an object with \"sentences\"");
        }
        ds.documents.push_back(std::move(doc));
    }
    if (auto s = rec.find("summary"); s != rec.end() && !s->is_null()) {
        if (s->is_string()) {
            ds.reference_summaries.push_back(s->get<std::string>());
        } else if (s->is_array()) {
            for (const auto& r : *s) {
                if (!r.is_string()) throw DataError("\"summary\" array must hold strings");
                ds.reference_summaries.push_back(r.get<std::string>());
            }
        } else {
            throw DataError("\"summary\" must be a string or an array of strings");
        }
    }
    return ds;
}

}  // namespace

std::string_view to_string(Pos pos) { return kPosNames[static_cast<std::size_t>(pos)]; }

std::optional<Pos> parse_pos(std::string_view tag) {
    for (std::size_t i = 0; i < kPosNames.size(); ++i) {
        if (tag == kPosNames[i]) return static_cast<Pos>(i);
    }
    if (tag == "PROPN") return Pos::Noun;
    if (tag == "AUX") return Pos::Verb;
    if (tag == "CCONJ" || tag == "SCONJ") return Pos::Conj;
    if (tag == "PART" || tag == "INTJ" || tag == "SYM" || tag == "X" || tag == "SPACE") return Pos::Other;
    return std::nullopt;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<DocumentSet> parse_docsets(std::string_view jsonl) {
    std::vector<DocumentSet> out;
    std::size_t record = 0;
    std::size_t pos = 0;
    while (pos < jsonl.size()) {
        std::size_t nl = jsonl.find('\n', pos);
        if (nl == std::string_view::npos) nl = jsonl.size();
        std::string_view line = jsonl.substr(pos, nl - pos);
        pos = nl + 1;
        if (std::all_of(line.begin(), line.end(), is_space)) continue;
        ++record;
        try {
            out.push_back(parse_record(json::parse(line)));
        } catch (const json::exception& e) {
            throw DataError("record " + std::to_string(record) + ": malformed JSON: " + e.what());
        } catch (const DataError& e) {
            throw DataError("record " + std::to_string(record) + ": " + e.what());
        }
    }
    return out;
}

std::vector<DocumentSet> load_docsets(const std::string& path, InputFormat /*format*/) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open corpus file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_docsets(buf.str());
}

bool is_punctuation(std::string_view token) {
    if (token.empty()) return false;
    std::string_view rest = token;
    while (!rest.empty()) {
        bool matched = false;
        for (auto set : {kOpeningUtf8, kClosingUtf8}) {
            for (auto p : set) {
                if (rest.starts_with(p)) {
                    rest.remove_prefix(p.size());
                    matched = true;
                    break;
                }
            }
            if (matched) break;
        }
        if (matched) continue;
        const unsigned char c = static_cast<unsigned char>(rest.front());
        if (c >= 0x80 || std::isalnum(c)) return false;
        rest.remove_prefix(1);
    }
    return true;
}

std::vector<TextToken> tokenize(std::string_view text) {
    std::vector<TextToken> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) ++i;
        if (i >= text.size()) break;
        std::size_t j = i;
        while (j < text.size() && !is_space(text[j])) ++j;
        split_chunk(text, i, j, out);
        i = j;
    }
    return out;
}

std::size_t whitespace_token_count(std::string_view text) {
    std::size_t n = 0;
    bool in_token = false;
    for (char c : text) {
        if (is_space(c)) {
            in_token = false;
        } else if (!in_token) {
            in_token = true;
            ++n;
        }
    }
    return n;
}

std::string detokenize(const std::vector<std::string>& tokens) {
    static const std::unordered_set<std::string> no_space_before{
        ".", ",", ";", ":", "!", "?", "%", ")", "]", "}", "...", "'s", "n't", "'re", "'ve", "'ll", "'d",
        "'m", "”", "’", "…", "»"};
    static const std::unordered_set<std::string> no_space_after{"(", "[", "{", "$", "“", "‘", "«", "`"};
    std::string out;
    bool glue_next = false;
    bool quote_open = false;
    for (const auto& tok : tokens) {
        bool glue = glue_next || out.empty();
        glue_next = false;
        if (tok == "\"") {
            if (quote_open) {
                glue = true;
            } else {
                glue_next = true;
            }
            quote_open = !quote_open;
        } else if (no_space_before.contains(tok)) {
            glue = true;
        }
        if (no_space_after.contains(tok)) glue_next = true;
        if (!glue) out += ' ';
        out += tok;
    }
    return out;
}

std::vector<std::size_t> allocate_token_budget(const std::vector<std::size_t>& lengths, std::size_t budget) {
    std::vector<std::size_t> alloc(lengths.size(), 0);
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        if (lengths[i] > 0) active.push_back(i);
    }
    std::size_t remaining = budget;
    while (remaining > 0 && !active.empty()) {
        const std::size_t quota = remaining / active.size();
        const std::size_t extra = remaining % active.size();
        if (quota == 0) {
            for (std::size_t r = 0; r < extra; ++r) alloc[active[r]] += 1;
            break;
        }
        std::vector<std::size_t> still_active;
        bool any_short = false;
        for (std::size_t i : active) {
            const std::size_t left = lengths[i] - alloc[i];
            if (left <= quota) {
                alloc[i] = lengths[i];
                remaining -= left;
                any_short = true;
            } else {
                still_active.push_back(i);
            }
        }
        if (!any_short) {
            for (std::size_t r = 0; r < active.size(); ++r) {
                alloc[active[r]] += quota + (r < extra ? 1 : 0);
            }
            remaining = 0;
        }
        active = std::move(still_active);
    }
    return alloc;
}

DocumentSet truncate_docset(const DocumentSet& ds, std::size_t budget) {
    std::vector<std::size_t> lengths;
    lengths.reserve(ds.documents.size());
    for (const auto& d : ds.documents) {
        if (d.annotated) {
            std::size_t n = 0;
            for (const auto& s : *d.annotated) n += s.size();
            lengths.push_back(n);
        } else {
            lengths.push_back(whitespace_token_count(d.text));
        }
    }
    const auto alloc = allocate_token_budget(lengths, budget);

    DocumentSet out;
    out.reference_summaries = ds.reference_summaries;
    for (std::size_t i = 0; i < ds.documents.size(); ++i) {
        const Document& d = ds.documents[i];
        if (alloc[i] >= lengths[i]) {
            out.documents.push_back(d);
            continue;
        }
        Document cut;
        if (d.annotated) {
            std::vector<RawSentence> kept;
            std::size_t left = alloc[i];
            for (const auto& s : *d.annotated) {
                if (left == 0) break;
                const std::size_t take = std::min(left, s.size());
                kept.emplace_back(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(take));
                left -= take;
            }
            cut.text = text_of(kept);
            cut.annotated = std::move(kept);
        } else {
            // Cut right after the alloc[i]-th whitespace token.
            std::size_t seen = 0;
            std::size_t end = 0;
            bool in_token = false;
            for (std::size_t p = 0; p < d.text.size(); ++p) {
                if (is_space(d.text[p])) {
                    if (in_token && seen == alloc[i]) break;
                    in_token = false;
                } else if (!in_token) {
                    in_token = true;
                    ++seen;
                }
                if (in_token) end = p + 1;
            }
            cut.text = alloc[i] == 0 ? std::string() : d.text.substr(0, end);
        }
        out.documents.push_back(std::move(cut));
    }
    return out;
}

std::string lemmatize(std::string_view lower, Pos pos, const std::function<bool(std::string_view)>& is_known_verb) {
    switch (pos) {
        case Pos::Noun:
            return strip_noun_suffix(lower);
        case Pos::Verb: {
            if (auto it = irregular_verbs().find(std::string(lower)); it != irregular_verbs().end()) return it->second;
            return strip_verb_suffix(lower, is_known_verb);
        }
        default:
            return std::string(lower);
    }
}

std::vector<std::vector<TextToken>> split_sentences(std::string_view text) {
    std::vector<std::vector<TextToken>> sentences;
    const auto tokens = tokenize(text);
    std::vector<TextToken> current;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        // A blank line always separates sentences (headlines, bylines).
        if (!current.empty()) {
            const auto gap = text.substr(current.back().end, tokens[i].begin - current.back().end);
            if (std::count(gap.begin(), gap.end(), '\n') >= 2) {
                sentences.push_back(std::move(current));
                current.clear();
            }
        }
        current.push_back(tokens[i]);
        if (is_terminal(tokens[i].text)) {
            while (i + 1 < tokens.size() && (closing_quote(tokens, i + 1) || is_terminal(tokens[i + 1].text))) {
                current.push_back(tokens[++i]);
            }
            sentences.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) sentences.push_back(std::move(current));
    // Drop sentences made only of punctuation.
    std::erase_if(sentences, [](const auto& s) {
        return std::all_of(s.begin(), s.end(), [](const TextToken& t) { return is_punctuation(t.text); });
    });
    return sentences;
}

std::vector<Token> tag_sentence(const std::vector<TextToken>& sentence, const AnnotatorSpec& annotator) {
    return tag_with_context(sentence, annotator, nullptr);
}

DocumentSet annotate(const DocumentSet& ds, const AnnotatorSpec& annotator) {
    if (ds.documents.empty()) throw DataError("document set has no documents");
    DocumentSet out;
    out.documents = ds.documents;
    out.reference_summaries = ds.reference_summaries;
    std::size_t global = 0;
    for (std::size_t d = 0; d < ds.documents.size(); ++d) {
        const Document& doc = ds.documents[d];
        std::size_t in_doc = 0;
        auto emit = [&](std::vector<Token> tokens) {
            if (tokens.empty()) return;
            out.sentences.push_back({std::move(tokens), d, in_doc++, global++});
        };
        if (annotator.kind == AnnotatorKind::PreAnnotated) {
            if (!doc.annotated) {
                throw DataError("document " + std::to_string(d + 1) + " carries no token annotations");
            }
            for (const auto& raw : *doc.annotated) {
                std::vector<Token> tokens;
                for (const auto& rt : raw) {
                    if (rt.pos == kMissing || rt.lemma == kMissing || rt.ent == kMissing) {
                        throw DataError("document " + std::to_string(d + 1) + ": token '" + rt.text +
                                        "' is missing pos/lemma/ent annotation");
                    }
                    auto pos = parse_pos(rt.pos);
                    if (!pos) throw DataError("unknown part-of-speech tag '" + rt.pos + "'");
                    tokens.push_back({rt.text, to_lower(rt.text), *pos, to_lower(rt.lemma), parse_entity(rt.ent)});
                }
                emit(std::move(tokens));
            }
        } else {
            const auto sentences = split_sentences(doc.text);
            std::unordered_set<std::string> lower_attested;
            for (const auto& s : sentences) {
                for (const auto& t : s) {
                    if (!t.text.empty() && std::islower(static_cast<unsigned char>(t.text.front()))) {
                        lower_attested.insert(t.text);
                    }
                }
            }
            for (const auto& s : sentences) emit(tag_with_context(s, annotator, &lower_attested));
        }
    }
    return out;
}

std::string sentence_text(const AnnotatedSentence& s) {
    std::vector<std::string> surfaces;
    surfaces.reserve(s.tokens.size());
    for (const auto& t : s.tokens) surfaces.push_back(t.surface);
    return detokenize(surfaces);
}

}  // namespace glimmer
