#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "semshift/clustering.hpp"
#include "semshift/embedding.hpp"
#include "semshift/error.hpp"
#include "semshift/io.hpp"

namespace semshift {

// Orthogonal map from a source period's space into a target period's space,
// estimated over the shared vocabulary.
struct AlignmentMap {
    std::string source_period;
    std::string target_period;
    std::vector<std::string> shared_vocab;  // descending joint frequency
    int dim = 0;
    std::vector<double> rotation;  // dim x dim, row-major; x_target = x_source * R
    double residual = 0.0;         // Frobenius norm of X*R - Y over unit rows

    void apply(std::span<const float> in, std::span<float> out) const {
        for (int j = 0; j < dim; ++j) {
            double s = 0.0;
            for (int i = 0; i < dim; ++i)
                s += static_cast<double>(in[i]) * rotation[static_cast<std::size_t>(i) * dim + j];
            out[j] = static_cast<float>(s);
        }
    }
};

// Least-squares orthogonal Procrustes: rows are the unit-normalized vectors
// of the shared vocabulary, R = U V^T from the SVD of X^T Y. Reflections are
// allowed (det(R) may be -1).
inline AlignmentMap procrustes(const EmbeddingSpace& source, const EmbeddingSpace& target) {
    if (source.dim() != target.dim())
        throw ConfigError("procrustes: dimension mismatch between spaces");
    const int dim = source.dim();

    // Shared vocabulary, ordered by descending summed frequency, ties by term.
    std::vector<std::pair<std::string, std::uint64_t>> shared;
    for (std::size_t i = 0; i < source.size(); ++i) {
        const auto& t = source.term(i);
        if (!target.contains(t)) continue;
        shared.emplace_back(t, source.freq(i) + target.freq(target.index_of(t)));
    }
    if (shared.size() < static_cast<std::size_t>(dim))
        throw Error("procrustes: shared vocabulary (" + std::to_string(shared.size()) +
                    ") is smaller than the embedding dimension (" + std::to_string(dim) + ")");
    std::sort(shared.begin(), shared.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    const std::size_t m = shared.size();
    Eigen::MatrixXd x(m, dim), y(m, dim);
    std::vector<float> buf(dim);
    for (std::size_t r = 0; r < m; ++r) {
        const auto& term = shared[r].first;
        auto vs = source.vector(term);
        std::copy(vs.begin(), vs.end(), buf.begin());
        normalize_in_place(buf);
        for (int c = 0; c < dim; ++c) x(r, c) = buf[c];
        auto vt = target.vector(term);
        std::copy(vt.begin(), vt.end(), buf.begin());
        normalize_in_place(buf);
        for (int c = 0; c < dim; ++c) y(r, c) = buf[c];
    }

    const Eigen::MatrixXd m_cross = x.transpose() * y;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m_cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::MatrixXd rot = svd.matrixU() * svd.matrixV().transpose();

    const Eigen::MatrixXd ortho = rot.transpose() * rot;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            if (std::abs(ortho(i, j) - (i == j ? 1.0 : 0.0)) > 1e-6)
                throw NumericError("procrustes: SVD produced a non-orthogonal rotation");

    AlignmentMap map;
    map.source_period = source.period();
    map.target_period = target.period();
    map.dim = dim;
    map.shared_vocab.reserve(m);
    for (const auto& [t, f] : shared) map.shared_vocab.push_back(t);
    map.rotation.resize(static_cast<std::size_t>(dim) * dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) map.rotation[static_cast<std::size_t>(i) * dim + j] = rot(i, j);
    map.residual = (x * rot - y).norm();
    return map;
}

// The source-period neighborhood carried into target coordinates: same
// members, vectors rotated. Members missing from the target vocabulary keep
// their projected vectors (this is a projection, not a lookup).
struct ShadowObject {
    std::string anchor;
    std::string target_period;
    std::vector<std::string> members;
    std::unordered_map<std::string, std::vector<float>> vectors;
};

inline ShadowObject shadow(const SemanticObject& object, const AlignmentMap& map,
                           const EmbeddingSpace& source) {
    if (map.source_period != object.period)
        throw ConfigError("shadow: object period " + object.period +
                          " does not match alignment source " + map.source_period);
    ShadowObject sh;
    sh.anchor = object.anchor;
    sh.target_period = map.target_period;
    sh.members = object.members;
    sh.vectors.reserve(object.members.size());
    std::vector<float> out(map.dim);
    for (const auto& m : object.members) {
        map.apply(source.vector(m), out);
        sh.vectors.emplace(m, out);
    }
    return sh;
}

// ---- alignment files --------------------------------------------------------

inline void save_alignment(const fs::path& path, const AlignmentMap& map) {
    std::string out = "semshift-alignment v1 " + map.source_period + ' ' + map.target_period +
                      ' ' + std::to_string(map.dim) + ' ' + std::to_string(map.shared_vocab.size()) +
                      ' ' + fmt_double(map.residual) + '\n';
    for (int i = 0; i < map.dim; ++i) {
        std::string row;
        for (int j = 0; j < map.dim; ++j) {
            if (j) row += ' ';
            row += fmt_double(map.rotation[static_cast<std::size_t>(i) * map.dim + j]);
        }
        out += row + '\n';
    }
    out += join(map.shared_vocab, "\n") + '\n';
    atomic_write(path, out);
}

inline AlignmentMap load_alignment(const fs::path& path) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw IoError("empty alignment file " + path.string());
    const auto header = split(lines[0], ' ');
    if (header.size() != 7 || header[0] != "semshift-alignment" || header[1] != "v1")
        throw IoError("bad alignment header in " + path.string());
    AlignmentMap map;
    map.source_period = header[2];
    map.target_period = header[3];
    map.dim = std::stoi(header[4]);
    const std::size_t vocab = std::stoul(header[5]);
    map.residual = std::stod(header[6]);
    if (lines.size() != 1 + static_cast<std::size_t>(map.dim) + vocab)
        throw IoError("alignment header disagrees with body in " + path.string());
    map.rotation.resize(static_cast<std::size_t>(map.dim) * map.dim);
    for (int i = 0; i < map.dim; ++i) {
        const auto cols = split(lines[1 + i], ' ');
        if (cols.size() != static_cast<std::size_t>(map.dim))
            throw IoError("bad rotation row in " + path.string());
        for (int j = 0; j < map.dim; ++j)
            map.rotation[static_cast<std::size_t>(i) * map.dim + j] = std::stod(cols[j]);
    }
    for (std::size_t i = 0; i < vocab; ++i)
        map.shared_vocab.push_back(lines[1 + map.dim + i]);
    return map;
}

}  // namespace semshift
