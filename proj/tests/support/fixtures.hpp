// Planted geometric fixtures shared by the clustering tests and the
// acceptance suite. Randomized coordinates keep pairwise distances in
// generic position (no accidental ties).
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "semshift/clustering.hpp"
#include "semshift/embedding.hpp"
#include "semshift/rng.hpp"

namespace fixtures {

using semshift::Rng;

inline std::vector<double> random_direction(Rng& rng, int dim) {
    std::vector<double> v(dim);
    double norm = 0.0;
    for (auto& x : v) {
        x = rng.next_gaussian();
        norm += x * x;
    }
    norm = std::sqrt(norm);
    for (auto& x : v) x /= norm;
    return v;
}

inline std::vector<double> jittered(const std::vector<double>& center, double sigma, Rng& rng) {
    std::vector<double> v(center.size());
    double norm = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = center[i] + sigma * rng.next_gaussian();
        norm += v[i] * v[i];
    }
    norm = std::sqrt(norm);
    for (auto& x : v) x /= norm;
    return v;
}

struct PointFixture {
    std::string name;
    std::vector<std::vector<double>> points;
    int min_cluster_size;
    int min_samples;
};

inline std::vector<float> flatten(const std::vector<std::vector<double>>& pts) {
    std::vector<float> flat;
    flat.reserve(pts.size() * pts[0].size());
    for (const auto& p : pts)
        for (const double x : p) flat.push_back(static_cast<float>(x));
    return flat;
}

// All fixtures stay at or below 50 points so the reference trace is cheap.
inline std::vector<PointFixture> oracle_fixtures() {
    std::vector<PointFixture> out;

    {
        PointFixture f{"two_blobs_noise", {}, 5, 3};
        Rng rng(101);
        const auto a = random_direction(rng, 6);
        auto b = random_direction(rng, 6);
        for (int i = 0; i < 18; ++i) f.points.push_back(jittered(a, 0.08, rng));
        for (int i = 0; i < 18; ++i) f.points.push_back(jittered(b, 0.08, rng));
        for (int i = 0; i < 5; ++i) f.points.push_back(random_direction(rng, 6));
        out.push_back(std::move(f));
    }
    {
        PointFixture f{"identical_ten", {}, 5, 3};
        std::vector<double> p{0.3, -0.4, 0.85, 0.11};
        for (int i = 0; i < 10; ++i) f.points.push_back(p);
        out.push_back(std::move(f));
    }
    {
        PointFixture f{"three_points", {}, 5, 2};
        Rng rng(103);
        for (int i = 0; i < 3; ++i) f.points.push_back(random_direction(rng, 4));
        out.push_back(std::move(f));
    }
    {
        PointFixture f{"uniform_cloud_30", {}, 5, 3};
        Rng rng(104);
        for (int i = 0; i < 30; ++i) f.points.push_back(random_direction(rng, 5));
        out.push_back(std::move(f));
    }
    {
        PointFixture f{"uniform_cloud_50", {}, 6, 4};
        Rng rng(105);
        for (int i = 0; i < 50; ++i) f.points.push_back(random_direction(rng, 3));
        out.push_back(std::move(f));
    }
    {
        PointFixture f{"nested_blobs", {}, 4, 3};
        Rng rng(106);
        const auto a = random_direction(rng, 6);
        for (int i = 0; i < 22; ++i) f.points.push_back(jittered(a, 0.05, rng));
        for (int i = 0; i < 14; ++i) f.points.push_back(jittered(a, 0.4, rng));
        for (int i = 0; i < 8; ++i) f.points.push_back(random_direction(rng, 6));
        out.push_back(std::move(f));
    }
    {
        PointFixture f{"arc_chain", {}, 5, 3};
        Rng rng(107);
        for (int i = 0; i < 21; ++i) {
            const double t = 0.03 * i * i / 21.0 + 0.08 * i;
            f.points.push_back({std::cos(t) + 0.001 * rng.next_gaussian(),
                                std::sin(t) + 0.001 * rng.next_gaussian(),
                                0.05 * rng.next_gaussian()});
        }
        out.push_back(std::move(f));
    }
    {
        PointFixture f{"close_blobs", {}, 5, 3};
        Rng rng(108);
        const auto a = random_direction(rng, 8);
        auto b = a;
        b[0] += 0.9;
        double norm = 0.0;
        for (const double x : b) norm += x * x;
        norm = std::sqrt(norm);
        for (auto& x : b) x /= norm;
        for (int i = 0; i < 20; ++i) f.points.push_back(jittered(a, 0.12, rng));
        for (int i = 0; i < 20; ++i) f.points.push_back(jittered(b, 0.12, rng));
        out.push_back(std::move(f));
    }
    return out;
}

// A 60-term coarse cluster holding a tight 12-term sub-blob (anchor
// included) inside a wide cloud; the refinement target.
struct SubBlobFixture {
    semshift::EmbeddingSpace space;
    semshift::ClusterAssignment coarse;
    std::string anchor;
    std::vector<std::string> planted;  // the 12 sub-blob terms, sorted
};

inline SubBlobFixture sub_blob_fixture() {
    const int dim = 8;
    Rng rng(201);
    const auto wide_center = random_direction(rng, dim);
    auto tight_center = wide_center;
    tight_center[0] += 1.0;  // roughly 45 degrees away
    {
        double norm = 0.0;
        for (const double x : tight_center) norm += x * x;
        norm = std::sqrt(norm);
        for (auto& x : tight_center) x /= norm;
    }

    std::vector<std::string> terms;
    std::vector<std::uint64_t> freqs;
    std::vector<float> vectors;
    std::vector<std::string> planted;
    auto add = [&](const std::string& t, const std::vector<double>& v) {
        terms.push_back(t);
        freqs.push_back(1000 - terms.size());  // distinct, descending
        for (const double x : v) vectors.push_back(static_cast<float>(x));
    };
    add("anchor", jittered(tight_center, 0.04, rng));
    planted.push_back("anchor");
    for (int i = 0; i < 11; ++i) {
        const std::string t = "sub" + std::to_string(i);
        add(t, jittered(tight_center, 0.04, rng));
        planted.push_back(t);
    }
    for (int i = 0; i < 48; ++i)
        add("wide" + std::to_string(i), jittered(wide_center, 0.22, rng));

    SubBlobFixture f{semshift::EmbeddingSpace("t", dim, terms, freqs, vectors), {}, "anchor", {}};
    for (const auto& t : terms) f.coarse.labels[t] = 0;
    f.coarse.centroids.push_back(std::vector<float>(dim, 0.0f));
    std::sort(planted.begin(), planted.end());
    f.planted = std::move(planted);
    return f;
}

}  // namespace fixtures
