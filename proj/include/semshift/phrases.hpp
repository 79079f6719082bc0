#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "semshift/corpus.hpp"
#include "semshift/error.hpp"
#include "semshift/io.hpp"

namespace semshift {

struct BigramStat {
    std::string w1;
    std::string w2;
    std::uint64_t count_pair = 0;
    std::uint64_t count_w1 = 0;  // occurrences of w1 that start a bigram slot
    double cond_prob = 0.0;      // count_pair / count_w1
    double z = 0.0;              // standardized against all emitted cond_probs
};

// One stat per distinct adjacent pair with count_pair >= min_pair_count.
// Pairs never span document boundaries. Results are sorted by descending z,
// ties by (w1, w2).
inline std::vector<BigramStat> bigram_stats(const TokenStream& stream,
                                            std::uint64_t min_pair_count) {
    if (stream.documents.empty()) throw Error("bigram_stats: empty token stream");
    if (min_pair_count == 0) throw ConfigError("min_pair_count must be positive");

    std::map<std::pair<std::string, std::string>, std::uint64_t> pair_counts;
    std::unordered_map<std::string, std::uint64_t> first_counts;
    for (const auto& doc : stream.documents) {
        for (std::size_t i = 0; i + 1 < doc.size(); ++i) {
            ++pair_counts[{doc[i], doc[i + 1]}];
            ++first_counts[doc[i]];
        }
    }

    std::vector<BigramStat> stats;
    for (const auto& [pair, n] : pair_counts) {
        if (n < min_pair_count) continue;
        BigramStat s;
        s.w1 = pair.first;
        s.w2 = pair.second;
        s.count_pair = n;
        s.count_w1 = first_counts.at(pair.first);
        s.cond_prob = static_cast<double>(n) / static_cast<double>(s.count_w1);
        stats.push_back(std::move(s));
    }
    if (stats.empty()) return stats;

    double mean = 0.0;
    for (const auto& s : stats) mean += s.cond_prob;
    mean /= static_cast<double>(stats.size());
    double var = 0.0;
    for (const auto& s : stats) var += (s.cond_prob - mean) * (s.cond_prob - mean);
    var /= static_cast<double>(stats.size());
    const double sd = std::sqrt(var);
    for (auto& s : stats) s.z = sd > 0.0 ? (s.cond_prob - mean) / sd : 0.0;

    std::sort(stats.begin(), stats.end(), [](const BigramStat& a, const BigramStat& b) {
        if (a.z != b.z) return a.z > b.z;
        if (a.w1 != b.w1) return a.w1 < b.w1;
        return a.w2 < b.w2;
    });
    return stats;
}

// Repeatedly collapses significant bigrams (z > z_threshold) into single
// "w1_w2" tokens. Within a document, occurrences are collapsed greedily left
// to right without overlap; statistics are recomputed each round so collapsed
// tokens can combine into longer phrases in later rounds.
inline TokenStream collapse_significant(const TokenStream& stream, double z_threshold,
                                        std::uint64_t min_pair_count, int max_rounds) {
    if (z_threshold <= 0.0) throw ConfigError("z_threshold must be positive");
    if (max_rounds <= 0) throw ConfigError("max_rounds must be positive");

    TokenStream current = stream;
    for (int round = 0; round < max_rounds; ++round) {
        if (current.documents.empty()) break;
        const auto stats = bigram_stats(current, min_pair_count);
        std::unordered_map<std::string, bool> significant;
        for (const auto& s : stats) {
            if (s.z > z_threshold) significant[s.w1 + '\x1f' + s.w2] = true;
        }
        if (significant.empty()) break;

        bool changed = false;
        TokenStream next;
        next.period = current.period;
        next.documents.reserve(current.documents.size());
        for (const auto& doc : current.documents) {
            std::vector<std::string> out;
            out.reserve(doc.size());
            std::size_t i = 0;
            while (i < doc.size()) {
                if (i + 1 < doc.size() && significant.count(doc[i] + '\x1f' + doc[i + 1])) {
                    out.push_back(doc[i] + '_' + doc[i + 1]);
                    i += 2;
                    changed = true;
                } else {
                    out.push_back(doc[i]);
                    ++i;
                }
            }
            next.documents.push_back(std::move(out));
        }
        current = std::move(next);
        if (!changed) break;
    }
    return current;
}

// "<period>.phrases.tsv": w1, w2, count_pair, cond_prob, z, rank.
inline void save_phrase_stats(const fs::path& path, const std::vector<BigramStat>& stats) {
    std::string out = "w1\tw2\tcount_pair\tcond_prob\tz\trank\n";
    int rank = 1;
    for (const auto& s : stats) {
        out += s.w1 + '\t' + s.w2 + '\t' + std::to_string(s.count_pair) + '\t' +
               fmt_double(s.cond_prob) + '\t' + fmt_double(s.z) + '\t' +
               std::to_string(rank++) + '\n';
    }
    atomic_write(path, out);
}

}  // namespace semshift
