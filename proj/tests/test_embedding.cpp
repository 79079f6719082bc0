#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "semshift/embedding.hpp"
#include "semshift/eval.hpp"

using namespace semshift;

namespace {

TrainParams small_params(std::uint64_t seed = 1) {
    TrainParams p;
    p.dim = 32;
    p.window = 5;
    p.min_count = 5;
    p.epochs = 5;
    p.seed = seed;
    p.unigram_table_size = 100000;
    return p;
}

EmbeddingSpace hand_space(std::vector<std::pair<std::string, std::vector<float>>> entries) {
    std::vector<std::string> terms;
    std::vector<std::uint64_t> freqs;
    std::vector<float> vectors;
    for (auto& [t, v] : entries) {
        terms.push_back(t);
        freqs.push_back(10);
        vectors.insert(vectors.end(), v.begin(), v.end());
    }
    return EmbeddingSpace("t", static_cast<int>(entries[0].second.size()), std::move(terms),
                          std::move(freqs), std::move(vectors));
}

}  // namespace

TEST_CASE("cosine of a term with itself is one") {
    const auto space = hand_space({{"a", {0.3f, -0.2f, 0.9f}}, {"b", {1.0f, 0.0f, 0.0f}}});
    CHECK(space.cosine("a", "a") == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("cosine of orthogonal vectors is zero") {
    const auto space = hand_space({{"a", {1.0f, 0.0f}}, {"b", {0.0f, 1.0f}}});
    CHECK(space.cosine("a", "b") == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("cosine matches the closed form") {
    const auto space = hand_space({{"a", {1.0f, 0.0f}}, {"b", {1.0f, 1.0f}}});
    CHECK(space.cosine("a", "b") == Catch::Approx(0.7071).margin(1e-4));
}

TEST_CASE("cosine raises typed errors") {
    const auto space = hand_space({{"a", {1.0f, 0.0f}}, {"z", {0.0f, 0.0f}}});
    CHECK_THROWS_AS(space.cosine("a", "missing"), LookupError);
    CHECK_THROWS_AS(space.cosine("a", "z"), NumericError);
}

TEST_CASE("training is reproducible with a fixed seed") {
    const auto corpus = synonym_corpus(3, 800, 41);
    const auto a = train(corpus.stream, small_params(7));
    const auto b = train(corpus.stream, small_params(7));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a.term(i) == b.term(i));
        const auto va = a.vector(i);
        const auto vb = b.vector(i);
        for (int d = 0; d < a.dim(); ++d) REQUIRE(va[d] == vb[d]);
    }
}

TEST_CASE("different seeds give different vectors") {
    const auto corpus = synonym_corpus(3, 800, 41);
    const auto a = train(corpus.stream, small_params(7));
    const auto b = train(corpus.stream, small_params(8));
    bool any_diff = false;
    const auto va = a.vector(std::size_t{0});
    const auto vb = b.vector(std::size_t{0});
    for (int d = 0; d < a.dim(); ++d) any_diff |= va[d] != vb[d];
    CHECK(any_diff);
}

TEST_CASE("min_count excludes rare terms") {
    TokenStream s;
    s.period = "t";
    for (int i = 0; i < 50; ++i) s.documents.push_back({"common1", "common2", "common3"});
    for (int i = 0; i < 4; ++i) s.documents.push_back({"rare", "common1", "common2"});
    const auto space = train(s, small_params());
    CHECK(space.contains("common1"));
    CHECK(!space.contains("rare"));
}

TEST_CASE("empty vocabulary is fatal") {
    TokenStream s;
    s.period = "t";
    s.documents = {{"once"}, {"twice", "twice"}};
    CHECK_THROWS_AS(train(s, small_params()), Error);
}

TEST_CASE("vocabulary is ordered by descending frequency") {
    TokenStream s;
    s.period = "t";
    for (int i = 0; i < 30; ++i) s.documents.push_back({"high", "high", "mid", "low"});
    for (int i = 0; i < 10; ++i) s.documents.push_back({"mid"});
    const auto space = train(s, small_params());
    REQUIRE(space.size() == 3);
    CHECK(space.term(0) == "high");
    CHECK(space.term(1) == "mid");
    CHECK(space.term(2) == "low");
    CHECK(space.freq(0) >= space.freq(1));
    CHECK(space.freq(1) >= space.freq(2));
}

TEST_CASE("planted synonyms align against random terms") {
    const auto corpus = synonym_corpus(4, 4000, 97);
    const auto space = train(corpus.stream, small_params(3));
    const auto& g = corpus.synonym_groups[0];
    REQUIRE(space.contains(g[0]));
    REQUIRE(space.contains(g[1]));
    const double syn_cos = space.cosine(g[0], g[1]);
    std::size_t beaten = 0, total = 0;
    for (std::size_t i = 0; i < space.size(); ++i) {
        const auto& t = space.term(i);
        if (t == g[0] || t == g[1]) continue;
        ++total;
        if (syn_cos > space.cosine(g[0], t)) ++beaten;
    }
    CHECK(static_cast<double>(beaten) >= 0.95 * static_cast<double>(total));
}

TEST_CASE("model files round-trip exactly") {
    const auto corpus = synonym_corpus(2, 600, 5);
    const auto space = train(corpus.stream, small_params());
    const auto path = fs::temp_directory_path() / "semshift_model_test.txt";
    space.save(path);
    const auto loaded = EmbeddingSpace::load(path, space.period());
    REQUIRE(loaded.size() == space.size());
    REQUIRE(loaded.dim() == space.dim());
    for (std::size_t i = 0; i < space.size(); ++i) {
        REQUIRE(loaded.term(i) == space.term(i));
        REQUIRE(loaded.freq(i) == space.freq(i));
        const auto va = space.vector(i);
        const auto vb = loaded.vector(i);
        for (int d = 0; d < space.dim(); ++d) REQUIRE(va[d] == vb[d]);
    }
    fs::remove(path);
}

TEST_CASE("loader rejects corrupted headers") {
    const auto path = fs::temp_directory_path() / "semshift_badmodel_test.txt";
    atomic_write(path, "something-else v9 10 2\n");
    CHECK_THROWS_AS(EmbeddingSpace::load(path), IoError);
    atomic_write(path, "semshift-embedding v1 3 2\nfoo 10 0.1 0.2 0.3\n");
    CHECK_THROWS_AS(EmbeddingSpace::load(path), IoError);  // body shorter than header says
    fs::remove(path);
}

TEST_CASE("multi-worker training produces a usable space") {
    const auto corpus = synonym_corpus(3, 2000, 13);
    auto params = small_params(11);
    params.workers = 2;
    const auto space = train(corpus.stream, params);
    CHECK(space.size() > 10);
    const auto& g = corpus.synonym_groups[1];
    CHECK(space.cosine(g[0], g[1]) > 0.3);
}

TEST_CASE("invalid hyperparameters are rejected") {
    TokenStream s;
    s.period = "t";
    s.documents = {{"a", "b"}};
    TrainParams p = small_params();
    p.dim = 1;
    CHECK_THROWS_AS(train(s, p), ConfigError);
    p = small_params();
    p.window = 0;
    CHECK_THROWS_AS(train(s, p), ConfigError);
}
