#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "glimmer/corpus.hpp"

using namespace glimmer;

namespace {

std::string words(std::size_t n, const std::string& stem = "w") {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
        if (i) out += ' ';
        out += stem + std::to_string(i);
    }
    return out;
}

DocumentSet docset_of_lengths(const std::vector<std::size_t>& lengths) {
    DocumentSet ds;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        ds.documents.push_back({words(lengths[i], "d" + std::to_string(i) + "w"), std::nullopt});
    }
    return ds;
}

// Independent reimplementation of the iterative redistribution: repeatedly
// split the remaining budget evenly over documents that still have text.
std::vector<std::size_t> simulate_allocation(std::vector<std::size_t> lengths, std::size_t budget) {
    std::vector<std::size_t> take(lengths.size(), 0);
    std::size_t left = budget;
    while (left > 0) {
        std::vector<std::size_t> open;
        for (std::size_t i = 0; i < lengths.size(); ++i) {
            if (take[i] < lengths[i]) open.push_back(i);
        }
        if (open.empty()) break;
        const std::size_t share = left / open.size();
        if (share == 0) {
            for (std::size_t i : open) {
                if (left == 0) break;
                ++take[i];
                --left;
            }
            continue;
        }
        for (std::size_t i : open) {
            const std::size_t add = std::min(share, lengths[i] - take[i]);
            take[i] += add;
            left -= add;
        }
    }
    return take;
}

}  // namespace

TEST_CASE("load: documents and summary") {
    auto sets = parse_docsets(R"({"documents":["a. b.","c."]})" "\n" R"({"documents":["x"],"summary":"s"})");
    REQUIRE(sets.size() == 2);
    CHECK(sets[0].documents.size() == 2);
    CHECK(sets[0].reference_summaries.empty());
    CHECK(sets[1].reference_summaries == std::vector<std::string>{"s"});
}

TEST_CASE("load: summary array and blank lines") {
    auto sets = parse_docsets("\n{\"documents\":[\"a\"],\"summary\":[\"r1\",\"r2\"]}\n\n");
    REQUIRE(sets.size() == 1);
    CHECK(sets[0].reference_summaries.size() == 2);
}

TEST_CASE("load: errors name the record") {
    auto message = [](std::string_view text) {
        try {
            parse_docsets(text);
        } catch (const DataError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message(R"({"summary":"s"})").find("record 1") != std::string::npos);
    CHECK(message("{\"documents\":[\"a\"]}\n{\"documents\":[]}").find("record 2") != std::string::npos);
    CHECK(message("{\"documents\":[\"a\"]}\nnot json").find("record 2") != std::string::npos);
    CHECK_THROWS_AS(load_docsets("/nonexistent/file.jsonl"), DataError);
}

TEST_CASE("tokenize detaches punctuation and keeps abbreviations") {
    auto toks = tokenize("\"Mr. Smith (the mayor) left,\" she said.");
    std::vector<std::string> text;
    for (const auto& t : toks) text.push_back(t.text);
    CHECK(text == std::vector<std::string>{"\"", "Mr.", "Smith", "(", "the", "mayor", ")", "left", ",", "\"", "she",
                                           "said", "."});
    auto us = tokenize("The U.S. economy grew.");
    CHECK(us[1].text == "U.S.");
    CHECK(whitespace_token_count("  a b\tc\n d ") == 4);
}

TEST_CASE("detokenize reattaches punctuation") {
    CHECK(detokenize({"Hello", ",", "world", "!"}) == "Hello, world!");
    CHECK(detokenize({"(", "a", ")", "b", "."}) == "(a) b.");
    CHECK(detokenize({"he", "said", "\"", "no", "\"", "."}) == "he said \"no\".");
    CHECK(detokenize({"it", "'s", "$", "5"}) == "it's $5");
}

TEST_CASE("truncate: equal split") {
    auto ds = docset_of_lengths({120, 150, 100, 300, 101});
    auto alloc = allocate_token_budget({120, 150, 100, 300, 101}, 500);
    CHECK(alloc == std::vector<std::size_t>{100, 100, 100, 100, 100});
    auto t = truncate_docset(ds, 500);
    for (const auto& d : t.documents) CHECK(whitespace_token_count(d.text) == 100);
}

TEST_CASE("truncate: short document surplus is redistributed") {
    const std::vector<std::size_t> lengths{60, 200, 200, 200, 200};
    auto alloc = allocate_token_budget(lengths, 500);
    CHECK(alloc == std::vector<std::size_t>{60, 110, 110, 110, 110});
    CHECK(alloc == simulate_allocation(lengths, 500));
    auto t = truncate_docset(docset_of_lengths(lengths), 500);
    std::size_t total = 0;
    for (const auto& d : t.documents) total += whitespace_token_count(d.text);
    CHECK(total == 500);
}

TEST_CASE("truncate: under budget is unchanged") {
    auto ds = docset_of_lengths({80});
    auto t = truncate_docset(ds, 500);
    CHECK(t.documents[0].text == ds.documents[0].text);
}

TEST_CASE("truncate properties on random lengths") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n_docs = 1 + rng() % 7;
        std::vector<std::size_t> lengths;
        for (std::size_t i = 0; i < n_docs; ++i) lengths.push_back(rng() % 260);
        const std::size_t budget = 1 + rng() % 600;
        const auto alloc = allocate_token_budget(lengths, budget);
        REQUIRE(alloc == simulate_allocation(lengths, budget));
        const std::size_t original = std::accumulate(lengths.begin(), lengths.end(), std::size_t{0});
        const std::size_t taken = std::accumulate(alloc.begin(), alloc.end(), std::size_t{0});
        CHECK(taken <= budget);
        if (original >= budget) CHECK(taken == budget);

        const auto ds = docset_of_lengths(lengths);
        const auto once = truncate_docset(ds, budget);
        const auto twice = truncate_docset(once, budget);
        for (std::size_t i = 0; i < n_docs; ++i) {
            CHECK(whitespace_token_count(once.documents[i].text) == alloc[i]);
            CHECK(twice.documents[i].text == once.documents[i].text);
            CHECK(ds.documents[i].text.rfind(once.documents[i].text, 0) == 0);  // prefix at a token boundary
        }
    }
}

TEST_CASE("annotate: builtin entities") {
    DocumentSet ds;
    ds.documents.push_back({"Obama visited Paris.", std::nullopt});
    auto a = annotate(ds, {});
    REQUIRE(a.sentences.size() == 1);
    const auto& toks = a.sentences[0].tokens;
    REQUIRE(toks.size() == 4);
    REQUIRE(toks[0].entity);
    CHECK(toks[0].entity->type == "ENTITY");
    CHECK(toks[0].entity->begin);
    REQUIRE(toks[2].entity);
    CHECK(toks[2].entity->type == "ENTITY");
    CHECK_FALSE(toks[1].entity);
    CHECK(toks[1].pos == Pos::Verb);
    CHECK(toks[1].lemma == "visit");
    CHECK(toks[3].pos == Pos::Punct);
}

TEST_CASE("annotate: sentence segmentation") {
    DocumentSet ds;
    ds.documents.push_back({"The report was finished. However, doubts remained.", std::nullopt});
    ds.documents.push_back({"Mr. Lee arrived at 5 p.m. on Friday! Was it late?", std::nullopt});
    auto a = annotate(ds, {});
    REQUIRE(a.sentences.size() == 4);
    CHECK(a.sentences[1].tokens[0].lower == "however");
    CHECK(a.sentences[2].tokens[0].surface == "Mr.");
    for (std::size_t i = 0; i < a.sentences.size(); ++i) {
        CHECK(a.sentences[i].global_index == i);
        CHECK_FALSE(a.sentences[i].tokens.empty());
    }
    CHECK(a.sentences[2].doc_index == 1);
    CHECK(a.sentences[3].sent_index_in_doc == 1);
}

TEST_CASE("annotate preserves surfaces and lowercase invariant") {
    const std::string text = "Rescue crews pulled 40 people from homes; the river (Ambra) rose 5 meters. \"It was fast,\" "
                             "said Mayor Dieter Brandt.";
    DocumentSet ds;
    ds.documents.push_back({text, std::nullopt});
    auto a = annotate(ds, {});
    std::string joined;
    std::string compact;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
    }
    for (const auto& s : a.sentences) {
        for (const auto& t : s.tokens) {
            joined += t.surface;
            CHECK(t.lower == to_lower(t.surface));
        }
    }
    CHECK(joined == compact);
}

TEST_CASE("annotate: pre-annotated records") {
    const std::string rec =
        R"({"documents":[{"sentences":[{"tokens":[{"t":"Rain","pos":"NOUN","lemma":"rain","ent":"O"},)"
        R"({"t":"fell","pos":"VERB","lemma":"fall"},{"t":"in","pos":"ADP","lemma":"in"},)"
        R"({"t":"Oslo","pos":"PROPN","lemma":"Oslo","ent":"B-GPE"},{"t":".","pos":"PUNCT","lemma":"."}]}]}]})";
    auto sets = parse_docsets(rec);
    AnnotatorSpec spec;
    spec.kind = AnnotatorKind::PreAnnotated;
    auto a = annotate(sets[0], spec);
    REQUIRE(a.sentences.size() == 1);
    const auto& t = a.sentences[0].tokens;
    CHECK(t[1].lemma == "fall");
    CHECK(t[3].pos == Pos::Noun);
    REQUIRE(t[3].entity);
    CHECK(t[3].entity->type == "GPE");
}

TEST_CASE("annotate: pre-annotated with short pos array is an error") {
    const std::string rec = R"({"documents":[{"sentences":[{"tokens":["a","b","c"],"pos":["NOUN","VERB"],)"
                            R"("lemma":["a","b","c"]}]}]})";
    AnnotatorSpec spec;
    spec.kind = AnnotatorKind::PreAnnotated;
    CHECK_THROWS_AS(annotate(parse_docsets(rec)[0], spec), DataError);
}

TEST_CASE("lemmatize with a known-verb vocabulary") {
    auto known = [](std::string_view v) { return v == "make" || v == "stop" || v == "hope" || v == "study"; };
    CHECK(lemmatize("stopped", Pos::Verb, known) == "stop");
    CHECK(lemmatize("hoped", Pos::Verb, known) == "hope");
    CHECK(lemmatize("studies", Pos::Verb, known) == "study");
    CHECK(lemmatize("made", Pos::Verb, known) == "make");
    CHECK(lemmatize("cities", Pos::Noun) == "city");
    CHECK(lemmatize("went", Pos::Verb) == "go");
}
