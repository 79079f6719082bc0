#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "semshift/clustering.hpp"
#include "semshift/error.hpp"
#include "semshift/io.hpp"
#include "semshift/vec.hpp"

namespace semshift {

// Pairwise change in concept-centroid cosine similarity across a transition.
// Positive delta = the two concepts moved together, negative = apart. A pair
// is significant when |delta| exceeds one standard deviation of all
// off-diagonal deltas.
struct DriftMatrix {
    std::vector<std::string> anchors;  // sorted
    std::vector<double> sim_source;    // k*k row-major, symmetric
    std::vector<double> sim_target;
    std::vector<double> delta;
    std::vector<char> mask;
    double sd = 0.0;
    std::vector<std::string> warnings;  // concepts excluded for missing a period

    double at(const std::vector<double>& m, std::size_t i, std::size_t j) const {
        return m[i * anchors.size() + j];
    }
};

inline DriftMatrix drift_matrix(const std::map<std::string, SemanticObject>& source_objects,
                                const std::map<std::string, SemanticObject>& target_objects) {
    DriftMatrix out;
    for (const auto& [anchor, obj] : source_objects) {
        if (target_objects.count(anchor)) {
            out.anchors.push_back(anchor);
        } else {
            out.warnings.push_back(anchor + " missing from the target period");
        }
    }
    for (const auto& [anchor, obj] : target_objects)
        if (!source_objects.count(anchor))
            out.warnings.push_back(anchor + " missing from the source period");

    const std::size_t k = out.anchors.size();
    out.sim_source.assign(k * k, 0.0);
    out.sim_target.assign(k * k, 0.0);
    out.delta.assign(k * k, 0.0);
    out.mask.assign(k * k, 0);

    std::vector<double> offdiag;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            const auto& sa = source_objects.at(out.anchors[i]);
            const auto& sb = source_objects.at(out.anchors[j]);
            const auto& ta = target_objects.at(out.anchors[i]);
            const auto& tb = target_objects.at(out.anchors[j]);
            const double ss = cosine(sa.centroid, sb.centroid);
            const double st = cosine(ta.centroid, tb.centroid);
            const double d = st - ss;
            out.sim_source[i * k + j] = out.sim_source[j * k + i] = ss;
            out.sim_target[i * k + j] = out.sim_target[j * k + i] = st;
            out.delta[i * k + j] = out.delta[j * k + i] = d;
            offdiag.push_back(d);
        }
    }
    if (!offdiag.empty()) {
        double mean = 0.0;
        for (const double d : offdiag) mean += d;
        mean /= static_cast<double>(offdiag.size());
        double var = 0.0;
        for (const double d : offdiag) var += (d - mean) * (d - mean);
        out.sd = std::sqrt(var / static_cast<double>(offdiag.size()));
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (i != j && std::abs(out.delta[i * k + j]) > out.sd) out.mask[i * k + j] = 1;
    return out;
}

// Long-form CSV, one row per unordered pair; plots directly as a heatmap.
inline void save_drift(const fs::path& path, const DriftMatrix& m) {
    std::string out = "concept_a,concept_b,sim_source,sim_target,delta,significant\n";
    const std::size_t k = m.anchors.size();
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            out += m.anchors[i] + ',' + m.anchors[j] + ',' +
                   fmt_double(m.at(m.sim_source, i, j)) + ',' +
                   fmt_double(m.at(m.sim_target, i, j)) + ',' + fmt_double(m.at(m.delta, i, j)) +
                   ',' + (m.mask[i * k + j] ? "1" : "0") + '\n';
        }
    }
    atomic_write(path, out);
}

}  // namespace semshift
