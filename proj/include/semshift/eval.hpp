#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "semshift/corpus.hpp"
#include "semshift/error.hpp"
#include "semshift/io.hpp"
#include "semshift/patterns.hpp"
#include "semshift/rng.hpp"

namespace semshift {

// ---- drift scenarios ----------------------------------------------------------

enum class ScenarioKind {
    Stable,
    LexicalChurn,
    Replacement,
    Fragmentation,
    Defragmentation,
    Narrowing,
};

inline const char* to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::Stable: return "stable";
        case ScenarioKind::LexicalChurn: return "lexical_churn";
        case ScenarioKind::Replacement: return "replacement";
        case ScenarioKind::Fragmentation: return "fragmentation";
        case ScenarioKind::Defragmentation: return "defragmentation";
        case ScenarioKind::Narrowing: return "narrowing";
    }
    return "?";
}

inline ScenarioKind scenario_kind_from_string(const std::string& s) {
    for (const auto k : {ScenarioKind::Stable, ScenarioKind::LexicalChurn,
                         ScenarioKind::Replacement, ScenarioKind::Fragmentation,
                         ScenarioKind::Defragmentation, ScenarioKind::Narrowing}) {
        if (s == to_string(k)) return k;
    }
    throw ConfigError("unknown scenario kind: " + s);
}

// One topical group a scenario document draws its tokens from. A document
// belongs to exactly one group; with_anchor controls whether the anchor is
// interleaved into the document.
struct ContextGroup {
    std::vector<std::string> terms;
    double weight = 1.0;
    bool with_anchor = true;
};

struct DriftScenario {
    ScenarioKind kind = ScenarioKind::Stable;
    std::string anchor;
    std::vector<std::vector<ContextGroup>> mixes;  // one entry per period
    std::uint64_t seed = 0;
    PatternLabel expected = PatternLabel::Stability;
};

namespace detail {

inline std::vector<std::string> term_block(const std::string& anchor, const char* tag, int n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(anchor + tag + std::to_string(i));
    return out;
}

inline std::vector<std::string> concat(const std::vector<std::string>& a,
                                       const std::vector<std::string>& b) {
    std::vector<std::string> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

}  // namespace detail

// Builds the canonical two-period realization of each evolutionary kind.
//
//   stable          same context set in both periods
//   lexical_churn   part of the vocabulary is swapped for fresh terms while
//                   the retained core keeps its position (old terms vanish
//                   from the second period entirely)
//   replacement     the anchor abandons its old context for a new one; the
//                   old terms live on without the anchor
//   narrowing       the anchor keeps only the core of its context; dropped
//                   terms still co-occur with the core but not the anchor
//   fragmentation   a small sub-group acquires intense exclusive
//                   co-occurrence, forming a tight sub-structure
//   defragmentation the mirror image: the tight sub-group dissolves back
//                   into the body
inline DriftScenario make_scenario(ScenarioKind kind, const std::string& anchor,
                                   std::uint64_t seed = 0) {
    using detail::concat;
    using detail::term_block;
    DriftScenario s;
    s.kind = kind;
    s.anchor = anchor;
    s.seed = seed;
    switch (kind) {
        case ScenarioKind::Stable: {
            const auto core = term_block(anchor, "s", 16);
            s.mixes = {{{core, 1.0, true}}, {{core, 1.0, true}}};
            s.expected = PatternLabel::Stability;
            break;
        }
        case ScenarioKind::LexicalChurn: {
            const auto core = term_block(anchor, "k", 8);
            const auto old_terms = term_block(anchor, "o", 10);
            const auto new_terms = term_block(anchor, "n", 10);
            s.mixes = {{{concat(core, old_terms), 1.0, true}},
                       {{concat(core, new_terms), 1.0, true}}};
            s.expected = PatternLabel::LexicalReplacement;
            break;
        }
        case ScenarioKind::Replacement: {
            const auto old_terms = term_block(anchor, "o", 16);
            const auto new_terms = term_block(anchor, "n", 16);
            s.mixes = {{{old_terms, 1.0, true}},
                       {{new_terms, 0.6, true}, {old_terms, 0.4, false}}};
            s.expected = PatternLabel::Replacement;
            break;
        }
        case ScenarioKind::Narrowing: {
            const auto core = term_block(anchor, "k", 10);
            const auto aux = term_block(anchor, "x", 8);
            // Dropped terms keep a thin bridge to the core so the
            // neighborhood stays one region while their tie to the anchor
            // decays.
            std::vector<std::string> bridge(core.begin(), core.begin() + 3);
            s.mixes = {{{concat(core, aux), 1.0, true}},
                       {{core, 0.6, true}, {concat(bridge, aux), 0.4, false}}};
            s.expected = PatternLabel::Narrowing;
            break;
        }
        case ScenarioKind::Fragmentation: {
            const auto body = term_block(anchor, "b", 18);
            const auto sub = term_block(anchor, "f", 6);
            s.mixes = {{{concat(body, sub), 1.0, true}},
                       {{concat(body, sub), 0.75, true}, {sub, 0.25, true}}};
            s.expected = PatternLabel::Fragmentation;
            break;
        }
        case ScenarioKind::Defragmentation: {
            const auto body = term_block(anchor, "b", 18);
            const auto sub = term_block(anchor, "f", 6);
            s.mixes = {{{concat(body, sub), 0.75, true}, {sub, 0.25, true}},
                       {{concat(body, sub), 1.0, true}}};
            s.expected = PatternLabel::Defragmentation;
            break;
        }
    }
    return s;
}

// ---- corpus generation ----------------------------------------------------------

struct GenerateParams {
    std::size_t docs_per_period = 10000;
    std::size_t vocab_size = 2000;     // scenario terms + common terms + topic terms
    double scenario_doc_share = 0.06;  // fraction of documents per scenario
    double anchor_rate = 0.25;         // anchor slots within anchored documents
    double background_leak = 0.1;      // common-term slots within scenario documents
    std::size_t common_terms = 50;     // high-frequency glue vocabulary
    double common_rate = 0.2;          // common-term slots within background documents
    std::size_t topic_size = 18;       // terms per background topic
    int min_doc_len = 10;
    int max_doc_len = 18;
    double zipf_exponent = 1.0;
};

namespace detail {

// Zipf-weighted sampler over a flat term list.
struct BackgroundSampler {
    std::vector<std::string> terms;
    std::vector<double> cumulative;

    BackgroundSampler(std::size_t n, double exponent, const char* prefix = "bg") {
        terms.reserve(n);
        cumulative.reserve(n);
        double total = 0.0;
        char buf[32];
        for (std::size_t i = 0; i < n; ++i) {
            std::snprintf(buf, sizeof(buf), "%s%05zu", prefix, i);
            terms.emplace_back(buf);
            total += 1.0 / std::pow(static_cast<double>(i + 1), exponent);
            cumulative.push_back(total);
        }
        for (auto& c : cumulative) c /= total;
    }

    const std::string& draw(Rng& rng) const {
        const double u = rng.next_double();
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        const std::size_t idx = std::min<std::size_t>(it - cumulative.begin(), terms.size() - 1);
        return terms[idx];
    }
};

// Background with structure: a shared high-frequency glue vocabulary that
// appears in every document plus topical term groups, identical across
// periods. Glue pins the global geometry (and the alignment); topics give
// random baseline anchors repeatable neighborhoods, the way ordinary
// discourse does.
struct TopicalBackground {
    BackgroundSampler common;
    std::vector<std::vector<std::string>> topics;
    double common_rate;

    TopicalBackground(std::size_t n_common, std::size_t n_topic_terms, std::size_t topic_size,
                      double zipf_exponent, double rate)
        : common(n_common, zipf_exponent, "cm"), common_rate(rate) {
        const std::size_t n_topics = std::max<std::size_t>(n_topic_terms / topic_size, 1);
        char buf[48];
        for (std::size_t t = 0; t < n_topics; ++t) {
            std::vector<std::string> topic;
            for (std::size_t i = 0; i < topic_size; ++i) {
                std::snprintf(buf, sizeof(buf), "tp%03zu_%02zu", t, i);
                topic.emplace_back(buf);
            }
            topics.push_back(std::move(topic));
        }
    }

    void fill_document(Rng& rng, int len, std::vector<std::string>& doc) const {
        const auto& topic = topics[rng.next_below(topics.size())];
        const std::size_t offset = rng.next_below(topic.size());
        for (int t = 0; t < len; ++t) {
            if (rng.next_double() < common_rate) {
                doc.push_back(common.draw(rng));
            } else {
                doc.push_back(ring_draw(topic, offset, rng));
            }
        }
    }

    // Draws from a contiguous window of the term ring, so co-occurrence --
    // and therefore similarity -- grades with ring distance instead of
    // collapsing the whole group onto one point.
    static const std::string& ring_draw(const std::vector<std::string>& terms,
                                        std::size_t offset, Rng& rng) {
        const std::size_t window = std::max<std::size_t>(3, terms.size() / 4);
        return terms[(offset + rng.next_below(std::min(window, terms.size()))) % terms.size()];
    }
};

}  // namespace detail

// Seeded mixture-model corpus: a Zipfian background plus one topic per
// scenario whose context set changes across periods as the scenario
// dictates. Token frequencies keep min_count filters and bigram statistics
// behaving the way they do on real text.
inline std::map<std::string, TokenStream> generate(const std::vector<DriftScenario>& scenarios,
                                                   const std::vector<std::string>& period_labels,
                                                   const GenerateParams& params,
                                                   std::uint64_t seed) {
    if (period_labels.empty()) throw ConfigError("generate: no periods");
    std::set<std::string> anchors;
    std::set<std::string> scenario_terms;
    for (const auto& s : scenarios) {
        if (!anchors.insert(s.anchor).second)
            throw ConfigError("conflicting scenarios share the anchor " + s.anchor);
        if (s.mixes.size() != period_labels.size())
            throw ConfigError("scenario " + s.anchor + " covers " +
                              std::to_string(s.mixes.size()) + " periods, corpus has " +
                              std::to_string(period_labels.size()));
        for (const auto& mix : s.mixes)
            for (const auto& g : mix)
                scenario_terms.insert(g.terms.begin(), g.terms.end());
    }
    const std::size_t reserved = anchors.size() + scenario_terms.size() + params.common_terms;
    if (params.vocab_size < reserved + 4 * params.topic_size)
        throw ConfigError("vocab_size " + std::to_string(params.vocab_size) +
                          " cannot host " + std::to_string(reserved) +
                          " scenario and common terms plus a topical background");
    const detail::TopicalBackground background(params.common_terms,
                                               params.vocab_size - reserved, params.topic_size,
                                               params.zipf_exponent, params.common_rate);

    std::map<std::string, TokenStream> corpus;
    for (std::size_t pi = 0; pi < period_labels.size(); ++pi) {
        TokenStream stream;
        stream.period = period_labels[pi];

        // Fixed per-scenario document counts; slot order shuffled.
        const std::size_t per_scenario = static_cast<std::size_t>(
            std::llround(params.scenario_doc_share * params.docs_per_period));
        std::vector<int> slots(params.docs_per_period, -1);  // -1 = background
        std::size_t cursor = 0;
        for (std::size_t si = 0; si < scenarios.size(); ++si) {
            for (std::size_t d = 0; d < per_scenario && cursor < slots.size(); ++d)
                slots[cursor++] = static_cast<int>(si);
        }
        Rng order_rng(Rng::mix(seed, pi * 31 + 1));
        deterministic_shuffle(slots, order_rng);

        Rng bg_rng(Rng::mix(seed, pi * 31 + 2));
        std::vector<Rng> scenario_rngs;
        for (const auto& s : scenarios)
            scenario_rngs.emplace_back(Rng::mix(Rng::mix(seed, pi * 31 + 3), s.seed + 17));

        for (const int slot : slots) {
            std::vector<std::string> doc;
            if (slot < 0) {
                const int len = params.min_doc_len +
                                static_cast<int>(bg_rng.next_below(
                                    params.max_doc_len - params.min_doc_len + 1));
                doc.reserve(len);
                background.fill_document(bg_rng, len, doc);
            } else {
                const auto& scenario = scenarios[slot];
                auto& rng = scenario_rngs[slot];
                const auto& groups = scenario.mixes[pi];
                double total_w = 0.0;
                for (const auto& g : groups) total_w += g.weight;
                double u = rng.next_double() * total_w;
                const ContextGroup* group = &groups.back();
                for (const auto& g : groups) {
                    if (u < g.weight) {
                        group = &g;
                        break;
                    }
                    u -= g.weight;
                }
                const int len = params.min_doc_len +
                                static_cast<int>(rng.next_below(
                                    params.max_doc_len - params.min_doc_len + 1));
                doc.reserve(len);
                const std::size_t offset = rng.next_below(group->terms.size());
                for (int t = 0; t < len; ++t) {
                    const double r = rng.next_double();
                    if (group->with_anchor && r < params.anchor_rate) {
                        doc.push_back(scenario.anchor);
                    } else if (r < params.anchor_rate + params.background_leak) {
                        doc.push_back(background.common.draw(rng));
                    } else {
                        doc.push_back(
                            detail::TopicalBackground::ring_draw(group->terms, offset, rng));
                    }
                }
            }
            stream.documents.push_back(std::move(doc));
        }
        corpus.emplace(stream.period, std::move(stream));
    }
    return corpus;
}

// Scenario file: one "<kind> <anchor> [seed]" per line, '#' comments.
inline std::vector<DriftScenario> parse_scenario_file(const fs::path& path) {
    std::vector<DriftScenario> scenarios;
    for (const auto& raw : read_lines(path)) {
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cols;
        for (const auto& c : split(line, ' '))
            if (!c.empty()) cols.push_back(c);
        if (cols.size() < 2 || cols.size() > 3)
            throw ConfigError("bad scenario line: " + line);
        const std::uint64_t sseed = cols.size() == 3 ? std::stoull(cols[2]) : 0;
        scenarios.push_back(make_scenario(scenario_kind_from_string(cols[0]), cols[1], sseed));
    }
    return scenarios;
}

inline std::vector<DriftScenario> default_scenarios() {
    return {
        make_scenario(ScenarioKind::Stable, "veridian", 1),
        make_scenario(ScenarioKind::LexicalChurn, "umbralux", 2),
        make_scenario(ScenarioKind::Replacement, "kestrel", 3),
        make_scenario(ScenarioKind::Fragmentation, "ouroboro", 4),
        make_scenario(ScenarioKind::Defragmentation, "palimpse", 5),
        make_scenario(ScenarioKind::Narrowing, "zephyrus", 6),
    };
}

// Ground-truth labels: anchor, transition, expected pattern.
inline void save_truth(const fs::path& path, const std::vector<DriftScenario>& scenarios,
                       const std::vector<std::string>& period_labels) {
    std::string out = "anchor\ttransition\texpected\n";
    for (std::size_t pi = 0; pi + 1 < period_labels.size(); ++pi) {
        for (const auto& s : scenarios) {
            out += s.anchor + '\t' + period_labels[pi] + '-' + period_labels[pi + 1] + '\t' +
                   to_string(s.expected) + '\n';
        }
    }
    atomic_write(path, out);
}

// ---- auxiliary corpora for focused checks -----------------------------------

// Background soup with n_planted deterministic collocations: the first
// member of each planted pair is always followed by the second.
struct CollocationCorpus {
    TokenStream stream;
    std::vector<std::pair<std::string, std::string>> planted;
};

inline CollocationCorpus planted_collocation_corpus(std::size_t n_docs, int n_planted,
                                                    std::size_t background_vocab,
                                                    std::uint64_t seed) {
    CollocationCorpus out;
    out.stream.period = "synthetic";
    const detail::BackgroundSampler background(background_vocab, 1.0);
    for (int i = 0; i < n_planted; ++i)
        out.planted.emplace_back("plant" + std::to_string(i) + "head",
                                 "plant" + std::to_string(i) + "tail");
    Rng rng(Rng::mix(seed, 0xc0c0));
    for (std::size_t d = 0; d < n_docs; ++d) {
        std::vector<std::string> doc;
        const int len = 10 + static_cast<int>(rng.next_below(8));
        for (int t = 0; t < len; ++t) {
            // A planted pair occupies two adjacent slots in ~2% of draws.
            if (n_planted > 0 && rng.next_double() < 0.02) {
                const auto& pair = out.planted[rng.next_below(n_planted)];
                doc.push_back(pair.first);
                doc.push_back(pair.second);
                ++t;
            } else {
                doc.push_back(background.draw(rng));
            }
        }
        out.stream.documents.push_back(std::move(doc));
    }
    return out;
}

// Groups of interchangeable "synonyms" sharing a context vocabulary;
// ground truth for embedding-sanity checks.
struct SynonymCorpus {
    TokenStream stream;
    std::vector<std::vector<std::string>> synonym_groups;
};

inline SynonymCorpus synonym_corpus(int n_groups, std::size_t n_docs, std::uint64_t seed) {
    SynonymCorpus out;
    out.stream.period = "synthetic";
    std::vector<std::vector<std::string>> contexts;
    for (int g = 0; g < n_groups; ++g) {
        out.synonym_groups.push_back(
            {"syn" + std::to_string(g) + "a", "syn" + std::to_string(g) + "b"});
        std::vector<std::string> ctx;
        for (int c = 0; c < 8; ++c)
            ctx.push_back("ctx" + std::to_string(g) + "_" + std::to_string(c));
        contexts.push_back(std::move(ctx));
    }
    const detail::BackgroundSampler background(400, 1.0);
    Rng rng(Rng::mix(seed, 0x570));
    for (std::size_t d = 0; d < n_docs; ++d) {
        std::vector<std::string> doc;
        const int len = 10 + static_cast<int>(rng.next_below(6));
        if (rng.next_double() < 0.5) {
            // Exactly one synonym occurrence per document, so the two
            // synonyms of a group see identical context distributions.
            const int g = static_cast<int>(rng.next_below(n_groups));
            const auto& syn = out.synonym_groups[g][rng.next_below(2)];
            const std::size_t syn_slot = rng.next_below(len);
            for (int t = 0; t < len; ++t) {
                if (static_cast<std::size_t>(t) == syn_slot) {
                    doc.push_back(syn);
                } else if (rng.next_double() < 0.1) {
                    doc.push_back(background.draw(rng));
                } else {
                    doc.push_back(contexts[g][rng.next_below(contexts[g].size())]);
                }
            }
        } else {
            for (int t = 0; t < len; ++t) doc.push_back(background.draw(rng));
        }
        out.stream.documents.push_back(std::move(doc));
    }
    return out;
}

}  // namespace semshift
