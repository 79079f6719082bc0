#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "semshift/eval.hpp"

using namespace semshift;

namespace {

GenerateParams tiny_params() {
    GenerateParams p;
    p.docs_per_period = 1500;
    p.vocab_size = 500;
    p.scenario_doc_share = 0.1;
    return p;
}

bool doc_contains(const std::vector<std::string>& doc, const std::string& tok) {
    return std::find(doc.begin(), doc.end(), tok) != doc.end();
}

bool doc_contains_any(const std::vector<std::string>& doc, const std::vector<std::string>& toks) {
    for (const auto& t : toks)
        if (doc_contains(doc, t)) return true;
    return false;
}

}  // namespace

TEST_CASE("generation is deterministic for a fixed seed") {
    const auto scenarios = default_scenarios();
    GenerateParams p;
    p.docs_per_period = 400;
    p.vocab_size = 800;
    const auto a = generate(scenarios, {"T1", "T2"}, p, 42);
    const auto b = generate(scenarios, {"T1", "T2"}, p, 42);
    REQUIRE(a.size() == b.size());
    CHECK(a.at("T1") == b.at("T1"));
    CHECK(a.at("T2") == b.at("T2"));
    const auto c = generate(scenarios, {"T1", "T2"}, p, 43);
    CHECK(!(a.at("T1") == c.at("T1")));
}

TEST_CASE("every period holds exactly docs_per_period documents") {
    const auto scenarios = default_scenarios();
    const auto corpus = generate(scenarios, {"T1", "T2"}, tiny_params(), 7);
    CHECK(corpus.at("T1").documents.size() == 1500);
    CHECK(corpus.at("T2").documents.size() == 1500);
}

TEST_CASE("scenario document counts match the configured share") {
    const auto s = make_scenario(ScenarioKind::Stable, "anchorterm", 1);
    const auto corpus = generate({s}, {"T1", "T2"}, tiny_params(), 9);
    // the stable scenario draws from one anchored group, so its documents
    // are exactly those containing context terms
    std::size_t scenario_docs = 0;
    for (const auto& doc : corpus.at("T1").documents)
        if (doc_contains_any(doc, s.mixes[0][0].terms)) ++scenario_docs;
    CHECK(scenario_docs == 150);  // share 0.1 of 1500
}

TEST_CASE("group mixing weights are realized within tolerance") {
    const auto s = make_scenario(ScenarioKind::Replacement, "anchorterm", 2);
    GenerateParams p = tiny_params();
    p.docs_per_period = 4000;
    const auto corpus = generate({s}, {"T1", "T2"}, p, 11);
    // period 2 splits scenario docs 0.6 anchored-new / 0.4 detached-old
    const auto& new_terms = s.mixes[1][0].terms;
    const auto& old_terms = s.mixes[1][1].terms;
    std::size_t with_new = 0, with_old = 0;
    for (const auto& doc : corpus.at("T2").documents) {
        if (doc_contains_any(doc, new_terms)) ++with_new;
        else if (doc_contains_any(doc, old_terms)) ++with_old;
    }
    const double total = static_cast<double>(with_new + with_old);
    CHECK(static_cast<double>(with_new) / total == Catch::Approx(0.6).margin(0.05));
    CHECK(static_cast<double>(with_old) / total == Catch::Approx(0.4).margin(0.05));
    // detached groups never carry the anchor
    for (const auto& doc : corpus.at("T2").documents) {
        if (doc_contains_any(doc, old_terms)) CHECK(!doc_contains(doc, "anchorterm"));
    }
}

TEST_CASE("anchor emission matches the anchor rate") {
    const auto s = make_scenario(ScenarioKind::Stable, "anchorterm", 1);
    GenerateParams p = tiny_params();
    p.docs_per_period = 4000;
    const auto corpus = generate({s}, {"T1", "T2"}, p, 13);
    std::size_t anchor_tokens = 0, scenario_tokens = 0;
    for (const auto& doc : corpus.at("T1").documents) {
        if (!doc_contains_any(doc, s.mixes[0][0].terms) && !doc_contains(doc, "anchorterm"))
            continue;
        for (const auto& t : doc) {
            ++scenario_tokens;
            if (t == "anchorterm") ++anchor_tokens;
        }
    }
    const double rate = static_cast<double>(anchor_tokens) / static_cast<double>(scenario_tokens);
    CHECK(rate == Catch::Approx(p.anchor_rate).margin(0.05 * p.anchor_rate + 0.02));
}

TEST_CASE("scenarios sharing an anchor are rejected") {
    const auto a = make_scenario(ScenarioKind::Stable, "dup", 1);
    const auto b = make_scenario(ScenarioKind::Replacement, "dup", 2);
    CHECK_THROWS_AS(generate({a, b}, {"T1", "T2"}, tiny_params(), 1), ConfigError);
}

TEST_CASE("a vocab too small for the scenario terms is rejected") {
    const auto scenarios = default_scenarios();
    GenerateParams p = tiny_params();
    p.vocab_size = 50;
    CHECK_THROWS_AS(generate(scenarios, {"T1", "T2"}, p, 1), ConfigError);
}

TEST_CASE("period count must match the scenario mixes") {
    const auto s = make_scenario(ScenarioKind::Stable, "x", 1);
    CHECK_THROWS_AS(generate({s}, {"T1", "T2", "T3"}, tiny_params(), 1), ConfigError);
}

TEST_CASE("lexical churn retires old terms and introduces new ones") {
    const auto s = make_scenario(ScenarioKind::LexicalChurn, "churner", 3);
    const auto corpus = generate({s}, {"T1", "T2"}, tiny_params(), 15);
    std::set<std::string> t1_vocab, t2_vocab;
    for (const auto& doc : corpus.at("T1").documents) t1_vocab.insert(doc.begin(), doc.end());
    for (const auto& doc : corpus.at("T2").documents) t2_vocab.insert(doc.begin(), doc.end());
    CHECK(t1_vocab.count("churnero0"));
    CHECK(!t1_vocab.count("churnern0"));
    CHECK(t2_vocab.count("churnern0"));
    CHECK(!t2_vocab.count("churnero0"));
    CHECK(t1_vocab.count("churnerk0"));
    CHECK(t2_vocab.count("churnerk0"));
}

TEST_CASE("ground truth files list every scenario and transition") {
    const auto scenarios = default_scenarios();
    const auto path = fs::temp_directory_path() / "semshift_truth_test.tsv";
    save_truth(path, scenarios, {"T1", "T2", "T3"});
    const auto lines = read_lines(path);
    CHECK(lines.size() == 1 + 2 * scenarios.size());  // two transitions
    CHECK(lines[0] == "anchor\ttransition\texpected");
    fs::remove(path);
}

TEST_CASE("scenario files parse kinds, anchors, and seeds") {
    const auto path = fs::temp_directory_path() / "semshift_scenarios_test.txt";
    atomic_write(path,
                 "# comment\n"
                 "stable aurora 4\n"
                 "replacement umbra\n"
                 "\n");
    const auto scenarios = parse_scenario_file(path);
    REQUIRE(scenarios.size() == 2);
    CHECK(scenarios[0].kind == ScenarioKind::Stable);
    CHECK(scenarios[0].anchor == "aurora");
    CHECK(scenarios[0].seed == 4);
    CHECK(scenarios[1].kind == ScenarioKind::Replacement);
    CHECK(scenarios[1].expected == PatternLabel::Replacement);
    atomic_write(path, "notakind foo\n");
    CHECK_THROWS_AS(parse_scenario_file(path), ConfigError);
    fs::remove(path);
}

TEST_CASE("planted collocations always co-occur adjacently") {
    const auto corpus = planted_collocation_corpus(800, 4, 200, 77);
    REQUIRE(corpus.planted.size() == 4);
    std::size_t planted_seen = 0;
    for (const auto& doc : corpus.stream.documents) {
        for (std::size_t i = 0; i < doc.size(); ++i) {
            for (const auto& [head, tail] : corpus.planted) {
                if (doc[i] == head) {
                    ++planted_seen;
                    REQUIRE(i + 1 < doc.size());
                    CHECK(doc[i + 1] == tail);
                }
            }
        }
    }
    CHECK(planted_seen > 20);
}

TEST_CASE("scenario kinds round-trip through strings") {
    for (const auto k : {ScenarioKind::Stable, ScenarioKind::LexicalChurn,
                         ScenarioKind::Replacement, ScenarioKind::Fragmentation,
                         ScenarioKind::Defragmentation, ScenarioKind::Narrowing}) {
        CHECK(scenario_kind_from_string(to_string(k)) == k);
    }
    CHECK_THROWS_AS(scenario_kind_from_string("bogus"), ConfigError);
}
