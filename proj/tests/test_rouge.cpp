#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "glimmer/rouge.hpp"
#include "oracles.hpp"

using namespace glimmer;
using oracle::split;

namespace {

AnnotatedSentence sent(const std::string& text, std::size_t doc, std::size_t index, std::size_t global) {
    AnnotatedSentence s = oracle::sentence(text);
    s.doc_index = doc;
    s.sent_index_in_doc = index;
    s.global_index = global;
    return s;
}

}  // namespace

TEST_CASE("rouge examples") {
    const auto r1 = rouge_n(split("the cat sat"), {split("the cat")}, 1);
    CHECK(r1.precision == doctest::Approx(2.0 / 3.0));
    CHECK(r1.recall == 1.0);
    CHECK(r1.f1 == doctest::Approx(0.8));
    const auto rl = rouge_l(split("a b c d"), {split("a c d")});
    CHECK(rl.precision == 0.75);
    CHECK(rl.recall == 1.0);
    CHECK(rl.f1 == doctest::Approx(6.0 / 7.0));
    CHECK(lcs_length(split("a b c d e"), split("e d c b a")) == 1);
    CHECK(rouge_n(split("a b c"), {split("a b c")}, 2).f1 == 1.0);
    CHECK(rouge_n(split("a b c"), {split("x y z")}, 1).f1 == 0.0);
    CHECK(rouge_n({}, {split("a")}, 1) == RougeScore{});
    CHECK(rouge_l({}, {split("a")}) == RougeScore{});
    CHECK(rouge_l(split("a"), {{}}) == RougeScore{});
    CHECK_THROWS(rouge_n(split("a"), {split("a")}, 0));
}

TEST_CASE("rouge matches the 10-pair hand oracle exactly") {
    for (const auto& c : oracle::rouge_hand_cases()) {
        CAPTURE(c.candidate);
        std::vector<std::vector<std::string>> refs;
        for (const auto& r : c.references) refs.push_back(split(r));
        const auto cand = split(c.candidate);
        CHECK(rouge_n(cand, refs, 1).f1 == doctest::Approx(c.r1).epsilon(1e-15));
        CHECK(rouge_n(cand, refs, 2).f1 == doctest::Approx(c.r2).epsilon(1e-15));
        CHECK(rouge_l(cand, refs).f1 == doctest::Approx(c.rl).epsilon(1e-15));
    }
}

TEST_CASE("LCS agrees with an independent recursive oracle") {
    std::mt19937 rng(61);
    const std::vector<std::string> vocab{"a", "b", "c", "d", "e"};
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<std::string> x, y;
        for (std::size_t i = 0, n = 1 + rng() % 15; i < n; ++i) x.push_back(vocab[rng() % vocab.size()]);
        for (std::size_t i = 0, n = 1 + rng() % 15; i < n; ++i) y.push_back(vocab[rng() % vocab.size()]);
        CHECK(lcs_length(x, y) == oracle::lcs(x, y));
        const double l = static_cast<double>(oracle::lcs(x, y));
        const double p = l / static_cast<double>(x.size()), r = l / static_cast<double>(y.size());
        CHECK(rouge_l(x, {y}).f1 == doctest::Approx(p + r > 0 ? 2 * p * r / (p + r) : 0.0));
    }
}

TEST_CASE("rouge properties") {
    std::mt19937 rng(67);
    const std::vector<std::string> vocab{"a", "b", "c", "d", "e", "f"};
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::string> x, y;
        for (std::size_t i = 0, n = 1 + rng() % 12; i < n; ++i) x.push_back(vocab[rng() % vocab.size()]);
        for (std::size_t i = 0, n = 1 + rng() % 12; i < n; ++i) y.push_back(vocab[rng() % vocab.size()]);
        CHECK(rouge_n(x, {x}, 1).f1 == 1.0);
        CHECK(rouge_l(x, {x}).f1 == 1.0);
        for (const auto& s : {rouge_n(x, {y}, 1), rouge_n(x, {y}, 2), rouge_l(x, {y})}) {
            CHECK(s.f1 >= 0.0);
            CHECK(s.f1 <= 1.0);
            if (s.precision + s.recall > 0) CHECK(s.f1 == doctest::Approx(2 * s.precision * s.recall / (s.precision + s.recall)));
        }
        // Max over references is at least every single-reference score.
        CHECK(rouge_n(x, {y, x}, 2).f1 >= rouge_n(x, {y}, 2).f1);
    }
}

TEST_CASE("scoring tokens keep punctuation and lowercase") {
    CHECK(rouge_tokens("The Cat, sat.") == std::vector<std::string>{"the", "cat", ",", "sat", "."});
}

TEST_CASE("first_n baseline examples") {
    DocumentSet ds;
    std::size_t g = 0;
    for (std::size_t d = 0; d < 3; ++d) {
        for (std::size_t i = 0; i < 3; ++i) ds.sentences.push_back(sent("d" + std::to_string(d) + "s" + std::to_string(i) + " .", d, i, g++));
    }
    CHECK(first_n_baseline(ds, 2) == "d0s0. d0s1. d1s0. d1s1. d2s0. d2s1.");
    CHECK(first_n_baseline(ds, 1) == "d0s0. d1s0. d2s0.");
    CHECK(first_n_baseline(ds, 5).size() == first_n_baseline(ds, 3).size());
    DocumentSet short_docs;
    short_docs.sentences.push_back(sent("only one", 0, 0, 0));
    short_docs.sentences.push_back(sent("second doc", 2, 0, 1));  // document 1 is empty
    CHECK(first_n_baseline(short_docs, 2) == "only one second doc");
    CHECK(first_n_baseline(DocumentSet{}, 2).empty());
}

TEST_CASE("evaluate_corpus means and errors") {
    const auto single = evaluate_corpus({"the cat sat"}, {{"the cat"}});
    CHECK(single.mean.r1 == doctest::Approx(0.8));
    CHECK(single.mean.r2 == doctest::Approx(2.0 / 3.0));
    const auto two = evaluate_corpus({"the cat sat", "x y z"}, {{"the cat"}, {"p q r"}});
    CHECK(two.mean.r1 == doctest::Approx(0.4));
    CHECK(two.per_sample.size() == 2);
    CHECK(two.per_sample[1].rl == 0.0);
    CHECK_THROWS_AS(evaluate_corpus({"a"}, {}), DataError);
    const auto json = to_json(two);
    CHECK(json["per_sample"].size() == 2);
    CHECK(json["mean"]["r1"].get<double>() == doctest::Approx(0.4));
}
