#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "semshift/patterns.hpp"

using namespace semshift;

TEST_CASE("rule table rows from the classification scheme") {
    CHECK(classify(2.0, 1.5, 0.3, -0.2).label == PatternLabel::Replacement);
    CHECK(classify(0.2, 0.3, 0.1, 0.5).label == PatternLabel::Stability);
    CHECK(classify(0.4, 0.2, 1.7, 0.9).label == PatternLabel::Fragmentation);
    CHECK(classify(0.1, 0.1, 0.0, -2.0).label == PatternLabel::LexicalReplacement);
    CHECK(classify(1.4, 0.3, 0.2, -1.5).label == PatternLabel::Narrowing);
}

TEST_CASE("defragmentation is the mirrored fragmentation") {
    const auto c = classify(0.4, 0.2, -1.7, 0.9);
    CHECK(c.label == PatternLabel::Defragmentation);
    CHECK(c.rule == 4);
}

TEST_CASE("replacement shadows fragmentation when both antecedents hold") {
    // HAD and CSD high AND NCD high: replacement must win
    const auto c = classify(1.5, 1.5, 1.5, 0.0);
    CHECK(c.label == PatternLabel::Replacement);
    CHECK(c.rule == 1);
}

TEST_CASE("z exactly at the threshold falls through") {
    CHECK(classify(1.0, 0.0, 0.0, 0.5).label == PatternLabel::Unclassified);
    CHECK(classify(0.0, 1.0, 0.0, 0.5).label == PatternLabel::Unclassified);
    CHECK(classify(0.0, 0.0, 1.0, 0.5).label == PatternLabel::Unclassified);
    CHECK(classify(1.0, 1.0, 0.0, 0.0).label == PatternLabel::Unclassified);
}

TEST_CASE("nan inputs are unclassified with rule zero") {
    const double nan = std::nan("");
    CHECK(classify(nan, 0.0, 0.0, 0.0).label == PatternLabel::Unclassified);
    CHECK(classify(nan, 0.0, 0.0, 0.0).rule == 0);
    CHECK(classify(0.0, nan, 0.0, 0.0).rule == 0);
    CHECK(classify(0.0, 0.0, nan, 0.0).rule == 0);
    CHECK(classify(0.0, 0.0, 0.0, nan).rule == 0);
}

TEST_CASE("every finite quadruple yields exactly one label") {
    const double grid[] = {-2.5, -1.0, -0.5, 0.0, 0.5, 1.0, 2.5};
    for (const double h : grid)
        for (const double c : grid)
            for (const double n : grid)
                for (const double l : grid) {
                    const auto r = classify(h, c, n, l);
                    CHECK(r.rule >= 1);
                    CHECK(r.rule <= 7);
                    if (r.rule == 7) CHECK(r.label == PatternLabel::Unclassified);
                }
}

TEST_CASE("lo boundary separates stability from lexical replacement") {
    // lo_z exactly at lo_low counts as low overlap
    CHECK(classify(0.0, 0.0, 0.0, -1.0).label == PatternLabel::LexicalReplacement);
    CHECK(classify(0.0, 0.0, 0.0, -0.99).label == PatternLabel::Stability);
}

TEST_CASE("custom thresholds move the boundaries") {
    Thresholds th;
    th.high = 2.0;
    th.low = 2.0;
    th.lo_low = -2.0;
    CHECK(classify(1.5, 1.5, 0.0, 0.0, th).label == PatternLabel::Stability);
    CHECK(classify(2.5, 2.5, 0.0, 0.0, th).label == PatternLabel::Replacement);
}

TEST_CASE("labels round-trip through strings") {
    for (const auto label :
         {PatternLabel::Stability, PatternLabel::Narrowing, PatternLabel::Replacement,
          PatternLabel::Fragmentation, PatternLabel::Defragmentation,
          PatternLabel::LexicalReplacement, PatternLabel::Unclassified}) {
        CHECK(pattern_from_string(to_string(label)) == label);
    }
}
