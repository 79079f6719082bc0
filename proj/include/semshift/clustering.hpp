#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <numeric>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "semshift/embedding.hpp"
#include "semshift/error.hpp"
#include "semshift/io.hpp"
#include "semshift/parallel.hpp"
#include "semshift/rng.hpp"
#include "semshift/vec.hpp"

namespace semshift {

struct ClusterParams {
    int min_cluster_size = 15;
    int min_samples = 5;
};

// Labels are -1 for noise. Centroids are arithmetic means of the member
// points after unit normalization (all distances in this module are
// Euclidean on L2-normalized vectors, which orders pairs exactly like
// cosine distance).
struct HdbscanResult {
    std::vector<int> labels;
    int n_clusters = 0;
    std::vector<std::vector<float>> centroids;
};

namespace detail {

constexpr double kMinSplitDistance = 1e-10;  // caps lambda = 1/d for zero-length edges

inline double lambda_of(double dist) { return 1.0 / std::max(dist, kMinSplitDistance); }

struct CondensedCluster {
    int parent = -1;
    double birth_lambda = 0.0;
    double stability = 0.0;
    std::vector<int> children;  // child cluster ids
};

// Dense pairwise engine over normalized vectors.
struct PointSet {
    const float* data;
    std::size_t n;
    int dim;

    double dist(std::size_t a, std::size_t b) const {
        double d = 0.0;
        const float* pa = data + a * dim;
        const float* pb = data + b * dim;
        for (int k = 0; k < dim; ++k) d += static_cast<double>(pa[k]) * pb[k];
        const double sq = 2.0 - 2.0 * d;
        return sq > 0.0 ? std::sqrt(sq) : 0.0;
    }
};

}  // namespace detail

// Density-based clustering: core distances at min_samples, mutual
// reachability, Prim MST, single-linkage hierarchy, condensed tree at
// min_cluster_size, excess-of-mass extraction. The tree root is a valid
// candidate cluster (whole-set structure is reported as one cluster rather
// than as noise). A nonzero seed shuffles the internal point order, which
// only matters for tie-breaking.
inline HdbscanResult hdbscan(const std::vector<float>& points, std::size_t n, int dim,
                             const ClusterParams& params, std::uint64_t seed = 0,
                             int workers = 1) {
    if (params.min_cluster_size < 2) throw ConfigError("min_cluster_size must be >= 2");
    if (params.min_samples < 1) throw ConfigError("min_samples must be >= 1");
    if (points.size() != n * static_cast<std::size_t>(dim))
        throw Error("hdbscan: point buffer size mismatch");

    HdbscanResult result;
    result.labels.assign(n, -1);
    const std::size_t mcs = static_cast<std::size_t>(params.min_cluster_size);
    if (n < mcs || n < 2) return result;  // nothing clusterable: all noise

    // Normalized working copy, optionally permuted for tie-breaking.
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    if (seed != 0) {
        Rng rng(seed);
        deterministic_shuffle(perm, rng);
    }
    std::vector<float> norm(n * dim);
    for (std::size_t i = 0; i < n; ++i) {
        const float* src = points.data() + perm[i] * dim;
        std::copy(src, src + dim, norm.begin() + i * dim);
        normalize_in_place({norm.data() + i * dim, static_cast<std::size_t>(dim)});
    }
    const detail::PointSet ps{norm.data(), n, dim};

    // Core distance: distance to the k-th nearest other point.
    const std::size_t k = std::min<std::size_t>(params.min_samples, n - 1);
    std::vector<double> core(n);
    parallel_for(n, workers, [&](std::size_t i) {
        std::vector<double> d;
        d.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) d.push_back(ps.dist(i, j));
        std::nth_element(d.begin(), d.begin() + (k - 1), d.end());
        core[i] = d[k - 1];
    });

    auto mreach = [&](std::size_t a, std::size_t b) {
        return std::max({core[a], core[b], ps.dist(a, b)});
    };

    // Prim MST over the implicit complete mutual-reachability graph.
    struct Edge {
        std::size_t a, b;
        double w;
    };
    std::vector<Edge> edges;
    edges.reserve(n - 1);
    {
        std::vector<double> best(n, std::numeric_limits<double>::infinity());
        std::vector<std::size_t> from(n, 0);
        std::vector<char> in_tree(n, 0);
        in_tree[0] = 1;
        for (std::size_t j = 1; j < n; ++j) {
            best[j] = mreach(0, j);
            from[j] = 0;
        }
        for (std::size_t step = 1; step < n; ++step) {
            std::size_t next = n;
            for (std::size_t j = 0; j < n; ++j) {
                if (!in_tree[j] && (next == n || best[j] < best[next])) next = j;
            }
            in_tree[next] = 1;
            edges.push_back({from[next], next, best[next]});
            for (std::size_t j = 0; j < n; ++j) {
                if (in_tree[j]) continue;
                const double w = mreach(next, j);
                if (w < best[j]) {
                    best[j] = w;
                    from[j] = next;
                }
            }
        }
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
        if (x.w != y.w) return x.w < y.w;
        const auto xa = std::min(x.a, x.b), xb = std::max(x.a, x.b);
        const auto ya = std::min(y.a, y.b), yb = std::max(y.a, y.b);
        return std::tie(xa, xb) < std::tie(ya, yb);
    });

    // Single-linkage dendrogram: internal nodes n .. 2n-2.
    const std::size_t n_internal = n - 1;
    std::vector<std::size_t> left(n_internal), right(n_internal), leaf_count(n_internal);
    std::vector<double> merge_dist(n_internal);
    {
        std::vector<std::size_t> uf_parent(2 * n - 1);
        std::iota(uf_parent.begin(), uf_parent.end(), 0);
        std::vector<std::size_t> comp_node(2 * n - 1);  // union-find root -> dendrogram node
        std::iota(comp_node.begin(), comp_node.end(), 0);
        auto find = [&](std::size_t x) {
            while (uf_parent[x] != x) {
                uf_parent[x] = uf_parent[uf_parent[x]];
                x = uf_parent[x];
            }
            return x;
        };
        std::size_t next_node = n;
        for (const auto& e : edges) {
            const std::size_t ra = find(e.a), rb = find(e.b);
            const std::size_t na = comp_node[ra], nb = comp_node[rb];
            const std::size_t idx = next_node - n;
            left[idx] = na;
            right[idx] = nb;
            merge_dist[idx] = e.w;
            leaf_count[idx] = (na < n ? 1 : leaf_count[na - n]) + (nb < n ? 1 : leaf_count[nb - n]);
            uf_parent[ra] = rb;
            comp_node[find(rb)] = next_node;
            ++next_node;
        }
    }

    auto subtree_size = [&](std::size_t node) {
        return node < n ? std::size_t{1} : leaf_count[node - n];
    };
    auto collect_leaves = [&](std::size_t node, std::vector<std::size_t>& out) {
        std::vector<std::size_t> stack{node};
        while (!stack.empty()) {
            const std::size_t cur = stack.back();
            stack.pop_back();
            if (cur < n) {
                out.push_back(cur);
            } else {
                stack.push_back(left[cur - n]);
                stack.push_back(right[cur - n]);
            }
        }
    };

    // Condensed tree. Merges at exactly equal distance form one simultaneous
    // multi-way split (the fringe subtrees of the equal-distance block); this
    // keeps the partition a function of the reachability graph rather than
    // of MST tie order. Points record the cluster they exit from.
    std::vector<detail::CondensedCluster> clusters(1);  // cluster 0 = root, birth 0
    std::vector<int> exit_cluster(n, 0);

    struct Frame {
        std::size_t node;
        int cluster;
    };
    std::vector<Frame> queue{{2 * n - 2, 0}};
    std::vector<std::size_t> scratch;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        const auto [node, cid] = queue[qi];
        const double d = merge_dist[node - n];
        const double lam = detail::lambda_of(d);
        const double birth = clusters[cid].birth_lambda;

        // Fringe of the maximal connected block of nodes merging at d.
        std::vector<std::size_t> parts;
        std::vector<std::size_t> block{node};
        while (!block.empty()) {
            const std::size_t cur = block.back();
            block.pop_back();
            for (const std::size_t child : {left[cur - n], right[cur - n]}) {
                if (child >= n && merge_dist[child - n] == d) {
                    block.push_back(child);
                } else {
                    parts.push_back(child);
                }
            }
        }

        std::vector<std::size_t> big;
        for (const std::size_t p : parts)
            if (subtree_size(p) >= mcs) big.push_back(p);

        if (big.size() >= 2) {
            // true split: everything exits here, large parts become clusters
            clusters[cid].stability +=
                static_cast<double>(subtree_size(node)) * (lam - birth);
            for (const std::size_t p : parts) {
                if (subtree_size(p) >= mcs) {
                    const int nid = static_cast<int>(clusters.size());
                    clusters.push_back({cid, lam, 0.0, {}});
                    clusters[cid].children.push_back(nid);
                    queue.push_back({p, nid});  // >= mcs leaves, so internal
                } else {
                    scratch.clear();
                    collect_leaves(p, scratch);
                    for (const std::size_t pt : scratch) exit_cluster[pt] = cid;
                }
            }
        } else if (big.size() == 1) {
            // the cluster sheds small fragments and lives on
            for (const std::size_t p : parts) {
                if (p == big[0]) continue;
                scratch.clear();
                collect_leaves(p, scratch);
                clusters[cid].stability +=
                    static_cast<double>(scratch.size()) * (lam - birth);
                for (const std::size_t pt : scratch) exit_cluster[pt] = cid;
            }
            queue.push_back({big[0], cid});
        } else {
            // no structure survives: the cluster ends here
            clusters[cid].stability +=
                static_cast<double>(subtree_size(node)) * (lam - birth);
            scratch.clear();
            collect_leaves(node, scratch);
            for (const std::size_t pt : scratch) exit_cluster[pt] = cid;
        }
    }

    // Excess of mass, processed leaves-first (children always have larger
    // ids). A cluster keeps itself when at least as stable as the sum of
    // what survives below it; ancestors override descendants. The root only
    // stands as a cluster when the hierarchy never truly split (otherwise
    // whole-set structure would swallow every partition).
    const std::size_t n_cond = clusters.size();
    std::vector<double> best_below(n_cond, 0.0);
    std::vector<char> locally_selected(n_cond, 0);
    for (std::size_t c = n_cond; c-- > 0;) {
        double child_sum = 0.0;
        for (const int ch : clusters[c].children) child_sum += best_below[ch];
        if (clusters[c].children.empty()) {
            best_below[c] = clusters[c].stability;
            locally_selected[c] = 1;
        } else if (c != 0 && clusters[c].stability >= child_sum) {
            best_below[c] = clusters[c].stability;
            locally_selected[c] = 1;
        } else {
            best_below[c] = child_sum;
        }
    }
    std::vector<char> selected(n_cond, 0);
    for (std::size_t c = 0; c < n_cond; ++c) {
        if (!locally_selected[c]) continue;
        bool shadowed = false;
        for (int p = clusters[c].parent; p >= 0; p = clusters[p].parent) {
            if (selected[p]) {
                shadowed = true;
                break;
            }
        }
        if (!shadowed) selected[c] = 1;
    }

    // Dense output ids in condensed-tree creation order.
    std::vector<int> dense(n_cond, -1);
    for (std::size_t c = 0; c < n_cond; ++c)
        if (selected[c]) dense[c] = result.n_clusters++;

    std::vector<int> work_labels(n, -1);
    for (std::size_t p = 0; p < n; ++p) {
        for (int c = exit_cluster[p]; c >= 0; c = clusters[c].parent) {
            if (selected[c]) {
                work_labels[p] = dense[c];
                break;
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) result.labels[perm[i]] = work_labels[i];

    if (result.n_clusters > 0) {
        result.centroids.assign(result.n_clusters, std::vector<float>(dim, 0.0f));
        std::vector<std::size_t> sizes(result.n_clusters, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const int lab = work_labels[i];
            if (lab < 0) continue;
            const float* src = norm.data() + i * dim;
            for (int d = 0; d < dim; ++d) result.centroids[lab][d] += src[d];
            ++sizes[lab];
        }
        for (int c = 0; c < result.n_clusters; ++c)
            for (int d = 0; d < dim; ++d)
                result.centroids[c][d] /= static_cast<float>(sizes[c]);
    }
    return result;
}

// Index of the centroid nearest to v by cosine distance; exact ties go to
// the lowest id.
inline int nearest_centroid(std::span<const float> v,
                            const std::vector<std::vector<float>>& centroids) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        const double d = cosine_distance(v, centroids[c]);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(c);
        }
    }
    return best;
}

// Term-level assignment covering the whole vocabulary.
struct ClusterAssignment {
    std::unordered_map<std::string, int> labels;
    std::vector<std::vector<float>> centroids;
};

// Clusters the first sample_size vocabulary vectors (vocabulary order is
// descending frequency), then extends the assignment to every remaining
// term -- and to sampled points that came out as noise -- by nearest
// centroid.
inline ClusterAssignment coarse_partition(const EmbeddingSpace& space, std::size_t sample_size,
                                          const ClusterParams& params, std::uint64_t seed = 0,
                                          int workers = 1) {
    if (sample_size < 1) throw ConfigError("sample_size must be positive");
    const std::size_t s = std::min(sample_size, space.size());
    const int dim = space.dim();

    std::vector<float> pts(s * dim);
    for (std::size_t i = 0; i < s; ++i) {
        const auto v = space.vector(i);
        std::copy(v.begin(), v.end(), pts.begin() + i * dim);
    }
    const HdbscanResult coarse = hdbscan(pts, s, dim, params, seed, workers);
    if (coarse.n_clusters == 0)
        throw Error("coarse_partition: no density structure found in the first " +
                    std::to_string(s) + " vectors");

    ClusterAssignment out;
    out.centroids = coarse.centroids;
    std::vector<int> assigned(space.size());
    parallel_for(space.size(), workers, [&](std::size_t i) {
        if (i < s && coarse.labels[i] >= 0) {
            assigned[i] = coarse.labels[i];
        } else {
            assigned[i] = nearest_centroid(space.vector(i), out.centroids);
        }
    });
    out.labels.reserve(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) out.labels.emplace(space.term(i), assigned[i]);
    return out;
}

// A converged semantic neighborhood around an anchor term in one period.
struct SemanticObject {
    std::string anchor;
    std::string period;
    std::vector<std::string> members;  // sorted; always contains the anchor
    std::vector<float> centroid;       // mean of member unit vectors
    int depth = 0;                     // clustering invocations performed
    std::vector<std::size_t> trail;    // member counts, coarse cluster first
};

namespace detail {

inline std::vector<float> mean_unit_vector(const EmbeddingSpace& space,
                                           const std::vector<std::uint32_t>& ids) {
    std::vector<float> centroid(space.dim(), 0.0f);
    std::vector<float> unit(space.dim());
    for (const auto id : ids) {
        const auto v = space.vector(id);
        std::copy(v.begin(), v.end(), unit.begin());
        normalize_in_place(unit);
        for (int d = 0; d < space.dim(); ++d) centroid[d] += unit[d];
    }
    for (auto& x : centroid) x /= static_cast<float>(ids.size());
    return centroid;
}

}  // namespace detail

// Memo for repeated sub-clustering of identical member sets; anchors that
// share a coarse cluster redo the same first-level run otherwise. Purely an
// evaluation-cost device: results are identical with or without it.
class HdbscanCache {
public:
    const HdbscanResult* find(std::uint64_t key) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = entries_.find(key);
        return it == entries_.end() ? nullptr : &it->second;
    }
    const HdbscanResult* store(std::uint64_t key, HdbscanResult result) {
        std::lock_guard<std::mutex> lock(mu_);
        return &entries_.emplace(key, std::move(result)).first->second;
    }

private:
    std::unordered_map<std::uint64_t, HdbscanResult> entries_;
    std::mutex mu_;
};

// Recursive anchored sub-clustering. Each pass re-clusters the current
// member set, reassigns every member to its nearest sub-centroid, and
// descends into the group holding the anchor. Stops when clustering finds
// no structure (everything noise) or the member set stops shrinking.
inline SemanticObject refine_neighborhood(const EmbeddingSpace& space, const std::string& anchor,
                                          const ClusterAssignment& coarse,
                                          const ClusterParams& refine_params,
                                          std::uint64_t seed = 0, int workers = 1,
                                          HdbscanCache* cache = nullptr) {
    const std::uint32_t anchor_id = space.index_of(anchor);
    auto it = coarse.labels.find(anchor);
    if (it == coarse.labels.end())
        throw LookupError("anchor missing from coarse assignment: " + anchor);
    const int coarse_label = it->second;

    // Members in vocabulary order keeps every downstream step deterministic.
    std::vector<std::uint32_t> members;
    for (std::size_t i = 0; i < space.size(); ++i) {
        auto mi = coarse.labels.find(space.term(i));
        if (mi != coarse.labels.end() && mi->second == coarse_label)
            members.push_back(static_cast<std::uint32_t>(i));
    }
    if (members.empty()) throw Error("refine_neighborhood: empty coarse cluster for " + anchor);

    SemanticObject obj;
    obj.anchor = anchor;
    obj.period = space.period();
    obj.trail.push_back(members.size());

    const int dim = space.dim();
    int iteration = 0;
    while (true) {
        ++iteration;
        const std::uint64_t iter_seed =
            seed == 0 ? 0 : (Rng::mix(seed, static_cast<std::uint64_t>(iteration)) | 1ULL);

        const HdbscanResult* sub_ptr = nullptr;
        std::uint64_t key = 0;
        if (cache) {
            key = fnv1a64(space.period());
            key = fnv1a64({reinterpret_cast<const char*>(members.data()),
                           members.size() * sizeof(members[0])},
                          key);
            key = Rng::mix(key, (static_cast<std::uint64_t>(refine_params.min_cluster_size) << 32) ^
                                    static_cast<std::uint64_t>(refine_params.min_samples));
            key = Rng::mix(key, iter_seed);
            sub_ptr = cache->find(key);
        }
        HdbscanResult computed;
        if (!sub_ptr) {
            std::vector<float> pts(members.size() * dim);
            for (std::size_t i = 0; i < members.size(); ++i) {
                const auto v = space.vector(members[i]);
                std::copy(v.begin(), v.end(), pts.begin() + i * dim);
            }
            computed = hdbscan(pts, members.size(), dim, refine_params, iter_seed, workers);
            sub_ptr = cache ? cache->store(key, std::move(computed)) : &computed;
        }
        const HdbscanResult& sub = *sub_ptr;
        if (sub.n_clusters == 0) break;  // no remaining structure

        std::vector<std::uint32_t> next;
        int anchor_group = -1;
        std::vector<int> assign(members.size());
        for (std::size_t i = 0; i < members.size(); ++i) {
            assign[i] = nearest_centroid(space.vector(members[i]), sub.centroids);
            if (members[i] == anchor_id) anchor_group = assign[i];
        }
        for (std::size_t i = 0; i < members.size(); ++i)
            if (assign[i] == anchor_group) next.push_back(members[i]);

        if (next.size() == members.size()) break;  // converged: boundary unchanged
        members = std::move(next);
        obj.trail.push_back(members.size());
    }
    obj.depth = iteration;

    obj.centroid = detail::mean_unit_vector(space, members);
    obj.members.reserve(members.size());
    for (const auto id : members) obj.members.push_back(space.term(id));
    std::sort(obj.members.begin(), obj.members.end());
    return obj;
}

struct StabilityReport {
    std::string anchor;
    int runs = 0;
    double mean_score = 0.0;
    double sd_score = 0.0;
    int flagged = 0;  // runs whose neighborhood held nothing besides the anchor
};

// Repeats the full coarse + refine pipeline and scores each run by the mean
// cosine between the anchor and its final members (anchor excluded).
inline StabilityReport stability(const EmbeddingSpace& space, const std::string& anchor,
                                 std::size_t sample_size, const ClusterParams& coarse_params,
                                 const ClusterParams& refine_params, int runs,
                                 std::uint64_t base_seed, int workers = 1) {
    if (runs < 2) throw ConfigError("stability needs at least 2 runs");
    StabilityReport report;
    report.anchor = anchor;
    report.runs = runs;

    std::vector<double> scores(runs, 0.0);
    for (int r = 0; r < runs; ++r) {
        const std::uint64_t run_seed =
            base_seed == 0 ? 0 : (Rng::mix(base_seed, static_cast<std::uint64_t>(r)) | 1ULL);
        const auto coarse = coarse_partition(space, sample_size, coarse_params, run_seed, workers);
        const auto obj = refine_neighborhood(space, anchor, coarse, refine_params, run_seed, workers);
        double sum = 0.0;
        std::size_t cnt = 0;
        for (const auto& m : obj.members) {
            if (m == anchor) continue;
            sum += space.cosine(anchor, m);
            ++cnt;
        }
        if (cnt == 0) {
            ++report.flagged;
            scores[r] = 0.0;
        } else {
            scores[r] = sum / static_cast<double>(cnt);
        }
    }
    double mean = 0.0;
    for (const double s : scores) mean += s;
    mean /= runs;
    double var = 0.0;
    for (const double s : scores) var += (s - mean) * (s - mean);
    report.mean_score = mean;
    report.sd_score = std::sqrt(var / runs);
    return report;
}

// ---- neighborhood files -----------------------------------------------------

inline void save_coarse(const fs::path& path, const ClusterAssignment& coarse) {
    const int dim = coarse.centroids.empty() ? 0 : static_cast<int>(coarse.centroids[0].size());
    std::string out = "semshift-coarse v1 " + std::to_string(coarse.centroids.size()) + ' ' +
                      std::to_string(dim) + ' ' + std::to_string(coarse.labels.size()) + '\n';
    for (const auto& c : coarse.centroids) {
        std::string row;
        for (std::size_t d = 0; d < c.size(); ++d) {
            if (d) row += ' ';
            row += fmt_float(c[d]);
        }
        out += row + '\n';
    }
    std::vector<std::pair<std::string, int>> sorted(coarse.labels.begin(), coarse.labels.end());
    std::sort(sorted.begin(), sorted.end());
    for (const auto& [term, label] : sorted)
        out += term + '\t' + std::to_string(label) + '\n';
    atomic_write(path, out);
}

inline ClusterAssignment load_coarse(const fs::path& path) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw IoError("empty coarse file " + path.string());
    const auto header = split(lines[0], ' ');
    if (header.size() != 5 || header[0] != "semshift-coarse" || header[1] != "v1")
        throw IoError("bad coarse header in " + path.string());
    const std::size_t n_clusters = std::stoul(header[2]);
    const int dim = std::stoi(header[3]);
    const std::size_t n_terms = std::stoul(header[4]);
    if (lines.size() != 1 + n_clusters + n_terms)
        throw IoError("coarse header disagrees with body in " + path.string());
    ClusterAssignment out;
    for (std::size_t c = 0; c < n_clusters; ++c) {
        const auto cols = split(lines[1 + c], ' ');
        if (cols.size() != static_cast<std::size_t>(dim))
            throw IoError("bad centroid row in " + path.string());
        std::vector<float> v(dim);
        for (int d = 0; d < dim; ++d) v[d] = std::strtof(cols[d].c_str(), nullptr);
        out.centroids.push_back(std::move(v));
    }
    for (std::size_t i = 0; i < n_terms; ++i) {
        const auto cols = split(lines[1 + n_clusters + i], '\t');
        if (cols.size() != 2) throw IoError("bad assignment row in " + path.string());
        out.labels.emplace(cols[0], std::stoi(cols[1]));
    }
    return out;
}

inline void save_object(const fs::path& path, const SemanticObject& obj,
                        const EmbeddingSpace& space) {
    std::string out;
    out += "anchor\t" + obj.anchor + '\n';
    out += "period\t" + obj.period + '\n';
    out += "depth\t" + std::to_string(obj.depth) + '\n';
    std::vector<std::string> counts;
    for (const auto c : obj.trail) counts.push_back(std::to_string(c));
    out += "trail\t" + join(counts, ",") + '\n';
    for (const auto& m : obj.members)
        out += m + '\t' + fmt_double(space.cosine(obj.anchor, m)) + '\n';
    atomic_write(path, out);
}

inline SemanticObject load_object(const fs::path& path, const EmbeddingSpace& space) {
    const auto lines = read_lines(path);
    if (lines.size() < 5) throw IoError("truncated object file " + path.string());
    SemanticObject obj;
    auto field = [&](std::size_t i, const char* key) -> std::string {
        const auto cols = split(lines[i], '\t');
        if (cols.size() != 2 || cols[0] != key)
            throw IoError("bad object header in " + path.string());
        return cols[1];
    };
    obj.anchor = field(0, "anchor");
    obj.period = field(1, "period");
    obj.depth = std::stoi(field(2, "depth"));
    for (const auto& c : split(field(3, "trail"), ','))
        obj.trail.push_back(std::stoul(c));
    std::vector<std::uint32_t> ids;
    for (std::size_t i = 4; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto cols = split(lines[i], '\t');
        obj.members.push_back(cols[0]);
        ids.push_back(space.index_of(cols[0]));
    }
    obj.centroid = detail::mean_unit_vector(space, ids);
    return obj;
}

}  // namespace semshift
