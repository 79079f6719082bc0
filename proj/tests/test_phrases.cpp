#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "semshift/eval.hpp"
#include "semshift/phrases.hpp"

using namespace semshift;

namespace {

TokenStream one_doc(std::vector<std::string> tokens) {
    TokenStream s;
    s.period = "t";
    s.documents.push_back(std::move(tokens));
    return s;
}

const BigramStat* find_stat(const std::vector<BigramStat>& stats, const std::string& w1,
                            const std::string& w2) {
    for (const auto& s : stats)
        if (s.w1 == w1 && s.w2 == w2) return &s;
    return nullptr;
}

}  // namespace

TEST_CASE("bigram_stats counts adjacent pairs") {
    const auto stream = one_doc({"a", "b", "a", "b", "a", "b"});
    const auto stats = bigram_stats(stream, 1);
    const auto* ab = find_stat(stats, "a", "b");
    REQUIRE(ab != nullptr);
    CHECK(ab->count_pair == 3);
    CHECK(ab->count_w1 == 3);
    CHECK(ab->cond_prob == 1.0);
}

TEST_CASE("degenerate distribution gives all-zero z") {
    // Every first word is followed by a unique second word exactly once.
    TokenStream s;
    s.period = "t";
    for (int i = 0; i < 6; ++i)
        s.documents.push_back({"u" + std::to_string(i), "v" + std::to_string(i)});
    const auto stats = bigram_stats(s, 1);
    REQUIRE(stats.size() == 6);
    for (const auto& st : stats) {
        CHECK(st.cond_prob == 1.0);
        CHECK(st.z == 0.0);
    }
}

TEST_CASE("a planted collocation has the maximum z") {
    // Background: many first-words spread across many second-words, so their
    // conditional probabilities are low; one pair always co-occurs.
    TokenStream s;
    s.period = "t";
    Rng rng(11);
    for (int d = 0; d < 800; ++d) {
        std::vector<std::string> doc;
        for (int t = 0; t < 10; ++t) doc.push_back("w" + std::to_string(rng.next_below(40)));
        if (d % 4 == 0) {
            doc.push_back("false");
            doc.push_back("flag");
        }
        s.documents.push_back(std::move(doc));
    }
    const auto stats = bigram_stats(s, 5);
    REQUIRE(!stats.empty());

    // Brute-force z over the same pairs.
    const auto* planted = find_stat(stats, "false", "flag");
    REQUIRE(planted != nullptr);
    double mean = 0.0;
    for (const auto& st : stats) mean += st.cond_prob;
    mean /= static_cast<double>(stats.size());
    double var = 0.0;
    for (const auto& st : stats) var += (st.cond_prob - mean) * (st.cond_prob - mean);
    const double sd = std::sqrt(var / static_cast<double>(stats.size()));
    CHECK(planted->z == Catch::Approx((planted->cond_prob - mean) / sd).epsilon(1e-12));
    for (const auto& st : stats) CHECK(planted->z >= st.z);
    CHECK(stats.front().w1 == "false");  // sorted by descending z
}

TEST_CASE("emitted z-scores are standardized") {
    TokenStream s;
    s.period = "t";
    Rng rng(3);
    for (int d = 0; d < 500; ++d) {
        std::vector<std::string> doc;
        for (int t = 0; t < 12; ++t) doc.push_back("w" + std::to_string(rng.next_below(25)));
        s.documents.push_back(std::move(doc));
    }
    const auto stats = bigram_stats(s, 5);
    REQUIRE(stats.size() >= 10);
    double mean = 0.0, var = 0.0;
    for (const auto& st : stats) mean += st.z;
    mean /= static_cast<double>(stats.size());
    for (const auto& st : stats) var += (st.z - mean) * (st.z - mean);
    var /= static_cast<double>(stats.size());
    CHECK(std::abs(mean) < 1e-9);
    CHECK(std::abs(std::sqrt(var) - 1.0) < 1e-9);
}

TEST_CASE("collapse joins a significant bigram") {
    TokenStream s;
    s.period = "t";
    Rng rng(5);
    for (int d = 0; d < 400; ++d) {
        std::vector<std::string> doc;
        for (int t = 0; t < 8; ++t) doc.push_back("w" + std::to_string(rng.next_below(30)));
        doc.push_back("false");
        doc.push_back("flag");
        s.documents.push_back(std::move(doc));
    }
    const auto collapsed = collapse_significant(s, 1.96, 5, 4);
    bool found = false;
    for (const auto& doc : collapsed.documents)
        for (const auto& tok : doc)
            if (tok == "false_flag") found = true;
    CHECK(found);
    for (const auto& doc : collapsed.documents)
        for (std::size_t i = 0; i + 1 < doc.size(); ++i)
            CHECK(!(doc[i] == "false" && doc[i + 1] == "flag"));
}

TEST_CASE("no significant bigram leaves the stream untouched") {
    TokenStream s;
    s.period = "t";
    Rng rng(13);
    for (int d = 0; d < 300; ++d) {
        std::vector<std::string> doc;
        for (int t = 0; t < 10; ++t) doc.push_back("w" + std::to_string(rng.next_below(12)));
        s.documents.push_back(std::move(doc));
    }
    const auto collapsed = collapse_significant(s, 50.0, 5, 4);
    CHECK(collapsed == s);
}

TEST_CASE("recursive rounds build longer phrases") {
    // Round 1 collapses (new, york); round 2 collapses (new_york, times).
    TokenStream s;
    s.period = "t";
    Rng rng(17);
    for (int d = 0; d < 600; ++d) {
        std::vector<std::string> doc;
        for (int t = 0; t < 10; ++t) doc.push_back("w" + std::to_string(rng.next_below(40)));
        doc.push_back("new");
        doc.push_back("york");
        doc.push_back("times");
        s.documents.push_back(std::move(doc));
    }
    const auto collapsed = collapse_significant(s, 1.96, 5, 4);
    bool found = false;
    for (const auto& doc : collapsed.documents)
        for (const auto& tok : doc)
            if (tok == "new_york_times") found = true;
    CHECK(found);
}

TEST_CASE("overlapping occurrences collapse greedily left to right") {
    TokenStream s;
    s.period = "t";
    // Make (a, a) overwhelmingly significant, then check "a a a".
    Rng rng(23);
    for (int d = 0; d < 500; ++d) {
        std::vector<std::string> doc;
        for (int t = 0; t < 8; ++t) doc.push_back("w" + std::to_string(rng.next_below(30)));
        doc.push_back("a");
        doc.push_back("a");
        s.documents.push_back(std::move(doc));
    }
    s.documents.push_back({"a", "a", "a"});
    const auto collapsed = collapse_significant(s, 1.96, 5, 1);
    CHECK(collapsed.documents.back() == std::vector<std::string>{"a_a", "a"});
}

TEST_CASE("collapsing never increases the token count") {
    const auto corpus = planted_collocation_corpus(500, 3, 150, 21);
    const auto collapsed = collapse_significant(corpus.stream, 1.96, 5, 4);
    std::size_t before = 0, after = 0;
    for (const auto& d : corpus.stream.documents) before += d.size();
    for (const auto& d : collapsed.documents) after += d.size();
    CHECK(after <= before);
    REQUIRE(collapsed.documents.size() == corpus.stream.documents.size());
}

TEST_CASE("collapse is deterministic") {
    const auto corpus = planted_collocation_corpus(400, 2, 100, 31);
    const auto a = collapse_significant(corpus.stream, 1.96, 5, 4);
    const auto b = collapse_significant(corpus.stream, 1.96, 5, 4);
    CHECK(a == b);
}

TEST_CASE("phrase stats file writes ranks") {
    const auto stream = one_doc({"a", "b", "a", "b", "a", "b", "c", "d"});
    const auto stats = bigram_stats(stream, 1);
    const auto path = fs::temp_directory_path() / "semshift_phrases_test.tsv";
    save_phrase_stats(path, stats);
    const auto lines = read_lines(path);
    REQUIRE(lines.size() == stats.size() + 1);
    CHECK(lines[0] == "w1\tw2\tcount_pair\tcond_prob\tz\trank");
    CHECK(split(lines[1], '\t')[5] == "1");
    fs::remove(path);
}
