#pragma once

#include <cmath>
#include <string>

namespace semshift {

enum class PatternLabel {
    Stability,
    Narrowing,
    Replacement,
    Fragmentation,
    Defragmentation,
    LexicalReplacement,
    Unclassified,
};

inline const char* to_string(PatternLabel label) {
    switch (label) {
        case PatternLabel::Stability: return "stability";
        case PatternLabel::Narrowing: return "narrowing";
        case PatternLabel::Replacement: return "replacement";
        case PatternLabel::Fragmentation: return "fragmentation";
        case PatternLabel::Defragmentation: return "defragmentation";
        case PatternLabel::LexicalReplacement: return "lexical_replacement";
        case PatternLabel::Unclassified: return "unclassified";
    }
    return "?";
}

inline PatternLabel pattern_from_string(const std::string& s) {
    for (const auto label :
         {PatternLabel::Stability, PatternLabel::Narrowing, PatternLabel::Replacement,
          PatternLabel::Fragmentation, PatternLabel::Defragmentation,
          PatternLabel::LexicalReplacement, PatternLabel::Unclassified}) {
        if (s == to_string(label)) return label;
    }
    return PatternLabel::Unclassified;
}

struct Thresholds {
    double high = 1.0;    // z above this counts as high
    double low = 1.0;     // z below this counts as low
    double lo_low = -1.0; // lexical overlap z at or below this counts as low overlap
};

struct Classification {
    PatternLabel label = PatternLabel::Unclassified;
    int rule = 0;  // 1..6 = rule fired, 7 = fell through, 0 = undefined input
};

// Rule table over the four standardized metrics, most specific change
// first. Comparisons are strict, so a z exactly at a threshold is neither
// high nor low and falls through.
inline Classification classify(double had_z, double csd_z, double ncd_z, double lo_z,
                               const Thresholds& th = {}) {
    if (std::isnan(had_z) || std::isnan(csd_z) || std::isnan(ncd_z) || std::isnan(lo_z))
        return {PatternLabel::Unclassified, 0};

    if (had_z > th.high && csd_z > th.high)
        return {PatternLabel::Replacement, 1};
    if (had_z > th.high && csd_z < th.low && std::abs(ncd_z) < th.low)
        return {PatternLabel::Narrowing, 2};
    if (ncd_z > th.high && had_z < th.low && csd_z < th.low)
        return {PatternLabel::Fragmentation, 3};
    if (ncd_z < -th.high && had_z < th.low && csd_z < th.low)
        return {PatternLabel::Defragmentation, 4};
    if (had_z < th.low && csd_z < th.low && std::abs(ncd_z) < th.low && lo_z <= th.lo_low)
        return {PatternLabel::LexicalReplacement, 5};
    if (had_z < th.low && csd_z < th.low && std::abs(ncd_z) < th.low && lo_z > th.lo_low)
        return {PatternLabel::Stability, 6};
    return {PatternLabel::Unclassified, 7};
}

}  // namespace semshift
