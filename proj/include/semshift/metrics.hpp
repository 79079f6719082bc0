#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "semshift/alignment.hpp"
#include "semshift/clustering.hpp"
#include "semshift/embedding.hpp"
#include "semshift/error.hpp"
#include "semshift/parallel.hpp"
#include "semshift/rng.hpp"

namespace semshift {

// ---- elementary statistics --------------------------------------------------

// Jensen-Shannon divergence with natural log; bounded by ln 2. Inputs must
// be same-length distributions summing to one.
inline double js_divergence(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size())
        throw NumericError("js_divergence: histogram bin counts differ");
    if (p.empty()) throw NumericError("js_divergence: empty histograms");
    double sp = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        sp += p[i];
        sq += q[i];
    }
    if (std::abs(sp - 1.0) > 1e-9 || std::abs(sq - 1.0) > 1e-9)
        throw NumericError("js_divergence: inputs must sum to 1");
    // Two accumulators keep the result bit-identical under argument swap.
    double dp = 0.0, dq = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double m = 0.5 * (p[i] + q[i]);
        if (p[i] > 0.0) dp += p[i] * std::log(p[i] / m);
        if (q[i] > 0.0) dq += q[i] * std::log(q[i] / m);
    }
    return std::max(0.5 * dp + 0.5 * dq, 0.0);
}

// Pearson (non-excess) kurtosis m4 / m2^2, population moments.
inline double kurtosis(std::span<const double> values) {
    if (values.size() < 4) throw NumericError("kurtosis needs at least 4 values");
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (const double v : values) mean += v;
    mean /= n;
    double m2 = 0.0, m4 = 0.0;
    for (const double v : values) {
        const double d = v - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m4 /= n;
    if (m2 == 0.0) throw NumericError("kurtosis undefined for zero variance");
    return m4 / (m2 * m2);
}

// Equal-width histogram over [-1, 1] with add-one smoothing, normalized.
inline std::vector<double> similarity_histogram(std::span<const double> sims, int bins) {
    if (bins < 1) throw ConfigError("histogram needs at least one bin");
    std::vector<double> counts(bins, 1.0);  // add-one smoothing
    for (const double s : sims) {
        int idx = static_cast<int>((s + 1.0) / 2.0 * bins);
        idx = std::clamp(idx, 0, bins - 1);
        counts[idx] += 1.0;
    }
    const double total = static_cast<double>(sims.size()) + bins;
    for (auto& c : counts) c /= total;
    return counts;
}

// ---- neighborhood metrics ---------------------------------------------------

// A raw metric value; empty when the supporting terms do not exist, and
// flagged unreliable when they are too few to trust.
struct RawMetric {
    std::optional<double> value;
    bool reliable = false;
};

constexpr int kMinSupportTerms = 5;

// Historical association divergence: JS divergence between the histograms
// of anchor-to-member similarities measured in the source and target spaces.
// Members (and the anchor) missing from either vocabulary are dropped.
inline RawMetric had(const EmbeddingSpace& source, const EmbeddingSpace& target,
                     const SemanticObject& object, int bins = 20) {
    if (!source.contains(object.anchor) || !target.contains(object.anchor))
        return {std::nullopt, false};
    std::vector<double> src_sims, tgt_sims;
    for (const auto& t : object.members) {
        if (!source.contains(t) || !target.contains(t)) continue;
        src_sims.push_back(source.cosine(object.anchor, t));
        tgt_sims.push_back(target.cosine(object.anchor, t));
    }
    if (src_sims.empty()) return {std::nullopt, false};
    const auto hp = similarity_histogram(src_sims, bins);
    const auto hq = similarity_histogram(tgt_sims, bins);
    return {js_divergence(hp, hq), src_sims.size() >= kMinSupportTerms};
}

// Counterfactual semantic divergence: mean cosine distance over all cross
// pairs between projected source-neighborhood vectors and observed
// target-neighborhood vectors.
inline RawMetric csd(const ShadowObject& shadow_obj, const SemanticObject& observed,
                     const EmbeddingSpace& target) {
    if (shadow_obj.members.empty() || observed.members.empty())
        throw Error("csd: empty neighborhood");
    std::vector<std::span<const float>> obs_vecs;
    for (const auto& t : observed.members) {
        if (target.contains(t)) obs_vecs.push_back(target.vector(t));
    }
    if (obs_vecs.empty()) return {std::nullopt, false};
    double sum = 0.0;
    std::size_t pairs = 0;
    for (const auto& a : shadow_obj.members) {
        const auto& va = shadow_obj.vectors.at(a);
        for (const auto& vb : obs_vecs) {
            sum += cosine_distance(va, vb);
            ++pairs;
        }
    }
    const bool reliable = shadow_obj.members.size() >= kMinSupportTerms &&
                          obs_vecs.size() >= kMinSupportTerms;
    return {sum / static_cast<double>(pairs), reliable};
}

// Union of two neighborhoods restricted to terms present in both
// vocabularies; the frame for NCD.
struct UnionSet {
    std::string anchor;
    std::vector<std::string> members;  // sorted
};

inline UnionSet make_union(const SemanticObject& source_obj, const SemanticObject& target_obj,
                           const EmbeddingSpace& source, const EmbeddingSpace& target) {
    std::set<std::string> merged(source_obj.members.begin(), source_obj.members.end());
    merged.insert(target_obj.members.begin(), target_obj.members.end());
    UnionSet u;
    u.anchor = source_obj.anchor;
    for (const auto& t : merged)
        if (source.contains(t) && target.contains(t)) u.members.push_back(t);
    return u;
}

// Neighborhood coherence divergence: kurtosis of all pairwise member
// similarities in the target space minus the same quantity in the source
// space.
inline RawMetric ncd(const EmbeddingSpace& source, const EmbeddingSpace& target,
                     const UnionSet& u) {
    if (u.members.size() < 4) return {std::nullopt, false};
    auto pair_sims = [&](const EmbeddingSpace& space) {
        std::vector<double> sims;
        sims.reserve(u.members.size() * (u.members.size() - 1) / 2);
        for (std::size_t i = 0; i < u.members.size(); ++i)
            for (std::size_t j = i + 1; j < u.members.size(); ++j)
                sims.push_back(space.cosine(u.members[i], u.members[j]));
        return sims;
    };
    try {
        const double ks = kurtosis(pair_sims(source));
        const double kt = kurtosis(pair_sims(target));
        return {kt - ks, true};
    } catch (const NumericError&) {
        return {std::nullopt, false};
    }
}

// Jaccard similarity of the raw member term sets (phrase tokens compare as
// exact strings; no vocabulary restriction).
inline double lexical_overlap(const SemanticObject& a, const SemanticObject& b) {
    if (a.members.empty() || b.members.empty())
        throw Error("lexical_overlap: empty neighborhood");
    const std::set<std::string> sa(a.members.begin(), a.members.end());
    const std::set<std::string> sb(b.members.begin(), b.members.end());
    std::size_t inter = 0;
    for (const auto& t : sa) inter += sb.count(t);
    const std::size_t uni = sa.size() + sb.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

// ---- baselines ---------------------------------------------------------------

struct MetricValue {
    double raw = std::numeric_limits<double>::quiet_NaN();
    double z = std::numeric_limits<double>::quiet_NaN();
    double baseline_mean = 0.0;
    double baseline_sd = 0.0;
    int n_baseline = 0;
    bool reliable = false;
};

enum class MetricKind { HAD = 0, CSD = 1, NCD = 2, LO = 3 };

inline const char* to_string(MetricKind k) {
    switch (k) {
        case MetricKind::HAD: return "HAD";
        case MetricKind::CSD: return "CSD";
        case MetricKind::NCD: return "NCD";
        case MetricKind::LO: return "LO";
    }
    return "?";
}

struct BaselineStats {
    double mean = 0.0;
    double sd = 1e-9;
    int n = 0;
};

// Everything needed to evaluate one period transition.
struct TransitionContext {
    const EmbeddingSpace& source;
    const EmbeddingSpace& target;
    const AlignmentMap& map;
    const ClusterAssignment& coarse_source;
    const ClusterAssignment& coarse_target;
    ClusterParams refine_params;
    int bins = 20;
};

struct ConceptMetrics {
    RawMetric had_raw, csd_raw, ncd_raw;
    std::optional<double> lo_raw;
};

// The full per-anchor measurement used both for concepts and for random
// baseline anchors: refine in both periods, project the source neighborhood,
// and evaluate the four metrics.
inline ConceptMetrics evaluate_anchor(const TransitionContext& ctx, const std::string& anchor,
                                      std::uint64_t seed = 0, HdbscanCache* cache = nullptr) {
    ConceptMetrics out;
    const auto src_obj =
        refine_neighborhood(ctx.source, anchor, ctx.coarse_source, ctx.refine_params, seed, 1, cache);
    const auto tgt_obj =
        refine_neighborhood(ctx.target, anchor, ctx.coarse_target, ctx.refine_params, seed, 1, cache);
    const auto sh = shadow(src_obj, ctx.map, ctx.source);
    out.had_raw = had(ctx.source, ctx.target, src_obj, ctx.bins);
    out.csd_raw = csd(sh, tgt_obj, ctx.target);
    out.ncd_raw = ncd(ctx.source, ctx.target, make_union(src_obj, tgt_obj, ctx.source, ctx.target));
    out.lo_raw = lexical_overlap(src_obj, tgt_obj);
    return out;
}

struct BaselineSet {
    BaselineStats stats[4];  // indexed by MetricKind
    std::vector<std::string> anchors;
};

// Random non-concept anchors, each run through the same neighborhood
// pipeline as the concepts. Anchors are drawn (seeded, without replacement)
// from the shared vocabulary minus the exclusion set.
inline BaselineSet sample_baselines(const TransitionContext& ctx, int n_samples,
                                    const std::unordered_set<std::string>& exclusions,
                                    std::uint64_t seed, int workers = 1, int min_success = 30) {
    if (n_samples < 1) throw ConfigError("n_samples must be positive");
    std::vector<std::string> eligible;
    for (std::size_t i = 0; i < ctx.source.size(); ++i) {
        const auto& t = ctx.source.term(i);
        if (ctx.target.contains(t) && !exclusions.count(t)) eligible.push_back(t);
    }
    if (eligible.size() < static_cast<std::size_t>(n_samples))
        throw Error("baseline: only " + std::to_string(eligible.size()) +
                    " eligible anchor terms for " + std::to_string(n_samples) + " samples");

    Rng pick(Rng::mix(seed, 0x9a7e));
    deterministic_shuffle(eligible, pick);
    eligible.resize(n_samples);

    // Anchors sharing a coarse cluster redo identical first-level runs, so
    // the cache pays for most of the sampling cost. Refinement itself runs
    // unshuffled; the seed only picks the anchors.
    HdbscanCache cache;
    std::vector<ConceptMetrics> results(n_samples);
    parallel_for(static_cast<std::size_t>(n_samples), workers, [&](std::size_t i) {
        results[i] = evaluate_anchor(ctx, eligible[i], 0, &cache);
    });

    BaselineSet out;
    out.anchors = eligible;
    std::vector<double> samples[4];
    for (const auto& r : results) {
        if (r.had_raw.value && r.had_raw.reliable) samples[0].push_back(*r.had_raw.value);
        if (r.csd_raw.value && r.csd_raw.reliable) samples[1].push_back(*r.csd_raw.value);
        if (r.ncd_raw.value && r.ncd_raw.reliable) samples[2].push_back(*r.ncd_raw.value);
        if (r.lo_raw) samples[3].push_back(*r.lo_raw);
    }
    for (int k = 0; k < 4; ++k) {
        if (samples[k].size() < static_cast<std::size_t>(min_success))
            throw Error(std::string("baseline too thin for ") + to_string(MetricKind(k)) + ": " +
                        std::to_string(samples[k].size()) + " of " + std::to_string(n_samples) +
                        " anchors produced a usable value");
        double mean = 0.0;
        for (const double v : samples[k]) mean += v;
        mean /= static_cast<double>(samples[k].size());
        double var = 0.0;
        for (const double v : samples[k]) var += (v - mean) * (v - mean);
        var /= static_cast<double>(samples[k].size());
        out.stats[k].mean = mean;
        out.stats[k].sd = std::max(std::sqrt(var), 1e-9);
        out.stats[k].n = static_cast<int>(samples[k].size());
    }
    return out;
}

inline MetricValue standardize(const RawMetric& raw, const BaselineStats& base) {
    MetricValue mv;
    mv.baseline_mean = base.mean;
    mv.baseline_sd = base.sd;
    mv.n_baseline = base.n;
    if (raw.value) {
        mv.raw = *raw.value;
        mv.z = (mv.raw - base.mean) / base.sd;
        mv.reliable = raw.reliable;
    }
    return mv;
}

// ---- distance levels and annotation export -----------------------------------

// Band of a distance d relative to the distribution (mu, sigma): three
// half-open one-sigma-wide bands centered on the mean. Distances outside
// all bands are unassigned.
inline std::optional<int> level_of(double d, double mu, double sigma) {
    if (d >= mu - 1.5 * sigma && d < mu - 0.5 * sigma) return 1;
    if (d >= mu - 0.5 * sigma && d < mu + 0.5 * sigma) return 2;
    if (d >= mu + 0.5 * sigma && d < mu + 1.5 * sigma) return 3;
    return std::nullopt;
}

struct DistanceLevels {
    std::unordered_map<std::string, int> levels;  // term -> 1..3
    double mu = 0.0;
    double sigma = 0.0;
};

// For every vocabulary term outside all object member sets, the minimum
// cosine distance to any object centroid, banded into three levels.
inline DistanceLevels distance_levels(const EmbeddingSpace& space,
                                      const std::vector<SemanticObject>& objects,
                                      int workers = 1) {
    if (objects.empty()) throw ConfigError("distance_levels: no objects");
    std::unordered_set<std::string> member_union;
    for (const auto& o : objects)
        member_union.insert(o.members.begin(), o.members.end());

    std::vector<std::string> terms;
    for (std::size_t i = 0; i < space.size(); ++i)
        if (!member_union.count(space.term(i))) terms.push_back(space.term(i));
    if (terms.empty()) throw Error("distance_levels: every term is an object member");

    std::vector<double> dist(terms.size());
    parallel_for(terms.size(), workers, [&](std::size_t i) {
        const auto v = space.vector(terms[i]);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& o : objects) best = std::min(best, cosine_distance(v, o.centroid));
        dist[i] = best;
    });

    DistanceLevels out;
    double mean = 0.0;
    for (const double d : dist) mean += d;
    mean /= static_cast<double>(dist.size());
    double var = 0.0;
    for (const double d : dist) var += (d - mean) * (d - mean);
    var /= static_cast<double>(dist.size());
    out.mu = mean;
    out.sigma = std::sqrt(var);
    if (out.sigma == 0.0)
        throw Error("distance_levels: zero variance in the distance distribution");
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (const auto lvl = level_of(dist[i], out.mu, out.sigma)) out.levels[terms[i]] = *lvl;
    }
    return out;
}

struct AnnotationPair {
    int id = 0;
    int level = 0;
    std::string term_a;
    std::string term_b;
    char concept_side = 'a';  // which of the pair is the object-member term
};

// Pairs one object-member term with one leveled term, drawn evenly from the
// three levels (counts differ by at most one). Leveled terms are used at
// most once; member terms may repeat.
inline std::vector<AnnotationPair> export_annotation_pairs(
    const DistanceLevels& levels, const std::vector<SemanticObject>& objects, int n_pairs,
    std::uint64_t seed) {
    if (n_pairs < 1) throw ConfigError("n_pairs must be positive");
    std::set<std::string> member_set;
    for (const auto& o : objects) member_set.insert(o.members.begin(), o.members.end());
    const std::vector<std::string> members(member_set.begin(), member_set.end());
    if (members.empty()) throw Error("export_annotation_pairs: no object members");

    std::vector<std::string> pools[3];
    for (const auto& [term, lvl] : levels.levels) pools[lvl - 1].push_back(term);
    for (auto& pool : pools) std::sort(pool.begin(), pool.end());

    int alloc[3];
    for (int l = 0; l < 3; ++l) alloc[l] = n_pairs / 3 + (l < n_pairs % 3 ? 1 : 0);
    for (int l = 0; l < 3; ++l) {
        if (pools[l].size() < static_cast<std::size_t>(alloc[l]))
            throw Error("level " + std::to_string(l + 1) + " holds only " +
                        std::to_string(pools[l].size()) + " terms; " + std::to_string(alloc[l]) +
                        " needed for an even split of " + std::to_string(n_pairs));
    }

    Rng rng(Rng::mix(seed, 0x5eed));
    std::vector<AnnotationPair> pairs;
    pairs.reserve(n_pairs);
    for (int l = 0; l < 3; ++l) {
        deterministic_shuffle(pools[l], rng);
        for (int i = 0; i < alloc[l]; ++i) {
            AnnotationPair p;
            p.level = l + 1;
            const auto& concept_term = members[rng.next_below(members.size())];
            const auto& level_term = pools[l][i];
            if (rng.next_below(2) == 0) {
                p.term_a = concept_term;
                p.term_b = level_term;
                p.concept_side = 'a';
            } else {
                p.term_a = level_term;
                p.term_b = concept_term;
                p.concept_side = 'b';
            }
            pairs.push_back(std::move(p));
        }
    }
    deterministic_shuffle(pairs, rng);
    for (std::size_t i = 0; i < pairs.size(); ++i) pairs[i].id = static_cast<int>(i + 1);
    return pairs;
}

}  // namespace semshift
