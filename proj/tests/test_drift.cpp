#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "semshift/drift.hpp"

using namespace semshift;

namespace {

SemanticObject centroid_object(const std::string& anchor, std::vector<float> centroid) {
    SemanticObject obj;
    obj.anchor = anchor;
    obj.period = "x";
    obj.members = {anchor};
    obj.centroid = std::move(centroid);
    obj.depth = 1;
    obj.trail = {1};
    return obj;
}

double cos2d(const std::vector<float>& a, const std::vector<float>& b) {
    const double num = static_cast<double>(a[0]) * b[0] + static_cast<double>(a[1]) * b[1];
    const double na = std::sqrt(static_cast<double>(a[0]) * a[0] + static_cast<double>(a[1]) * a[1]);
    const double nb = std::sqrt(static_cast<double>(b[0]) * b[0] + static_cast<double>(b[1]) * b[1]);
    return num / (na * nb);
}

}  // namespace

TEST_CASE("self-transition yields zero deltas and an empty mask") {
    std::map<std::string, SemanticObject> objs;
    objs.emplace("a", centroid_object("a", {1.0f, 0.0f}));
    objs.emplace("b", centroid_object("b", {0.6f, 0.8f}));
    objs.emplace("c", centroid_object("c", {0.0f, 1.0f}));
    const auto m = drift_matrix(objs, objs);
    REQUIRE(m.anchors.size() == 3);
    for (const double d : m.delta) CHECK(d == 0.0);
    for (const char s : m.mask) CHECK(s == 0);
    CHECK(m.sd == 0.0);
}

TEST_CASE("three-concept fixture matches the closed form") {
    std::map<std::string, SemanticObject> src, tgt;
    const std::vector<float> a1{1.0f, 0.0f}, b1{0.8f, 0.6f}, c1{0.0f, 1.0f};
    const std::vector<float> a2{1.0f, 0.0f}, b2{0.6f, 0.8f}, c2{0.1f, 0.995f};
    src.emplace("a", centroid_object("a", a1));
    src.emplace("b", centroid_object("b", b1));
    src.emplace("c", centroid_object("c", c1));
    tgt.emplace("a", centroid_object("a", a2));
    tgt.emplace("b", centroid_object("b", b2));
    tgt.emplace("c", centroid_object("c", c2));

    const auto m = drift_matrix(src, tgt);
    REQUIRE(m.anchors == std::vector<std::string>{"a", "b", "c"});
    const std::size_t k = 3;
    CHECK(m.delta[0 * k + 1] == Catch::Approx(cos2d(a2, b2) - cos2d(a1, b1)).margin(1e-12));
    CHECK(m.delta[0 * k + 2] == Catch::Approx(cos2d(a2, c2) - cos2d(a1, c1)).margin(1e-12));
    CHECK(m.delta[1 * k + 2] == Catch::Approx(cos2d(b2, c2) - cos2d(b1, c1)).margin(1e-12));
    // symmetry
    CHECK(m.delta[1 * k + 0] == m.delta[0 * k + 1]);
    CHECK(m.delta[2 * k + 0] == m.delta[0 * k + 2]);
    // diagonal zero and unmasked
    for (std::size_t i = 0; i < k; ++i) {
        CHECK(m.delta[i * k + i] == 0.0);
        CHECK(m.mask[i * k + i] == 0);
    }
}

TEST_CASE("a planted convergence is masked significant and positive") {
    std::map<std::string, SemanticObject> src, tgt;
    // four concepts; in the target, a and b rotate together while the others stay
    src.emplace("a", centroid_object("a", {1.0f, 0.0f}));
    src.emplace("b", centroid_object("b", {0.0f, 1.0f}));
    src.emplace("c", centroid_object("c", {0.7071f, 0.7071f}));
    src.emplace("d", centroid_object("d", {-0.7071f, 0.7071f}));
    tgt.emplace("a", centroid_object("a", {1.0f, 0.0f}));
    tgt.emplace("b", centroid_object("b", {0.9659f, 0.2588f}));  // moved next to a
    tgt.emplace("c", centroid_object("c", {0.7071f, 0.7071f}));
    tgt.emplace("d", centroid_object("d", {-0.7071f, 0.7071f}));

    const auto m = drift_matrix(src, tgt);
    const std::size_t k = m.anchors.size();
    const auto idx_of = [&](const std::string& t) {
        return std::find(m.anchors.begin(), m.anchors.end(), t) - m.anchors.begin();
    };
    const std::size_t ia = idx_of("a"), ib = idx_of("b");
    CHECK(m.delta[ia * k + ib] > 0.0);
    CHECK(m.mask[ia * k + ib] == 1);
}

TEST_CASE("drift is antisymmetric under period swap") {
    std::map<std::string, SemanticObject> src, tgt;
    src.emplace("a", centroid_object("a", {1.0f, 0.0f}));
    src.emplace("b", centroid_object("b", {0.8f, 0.6f}));
    src.emplace("c", centroid_object("c", {0.2f, 0.98f}));
    tgt.emplace("a", centroid_object("a", {0.9f, 0.1f}));
    tgt.emplace("b", centroid_object("b", {0.5f, 0.85f}));
    tgt.emplace("c", centroid_object("c", {0.0f, 1.0f}));
    const auto fwd = drift_matrix(src, tgt);
    const auto rev = drift_matrix(tgt, src);
    REQUIRE(fwd.delta.size() == rev.delta.size());
    for (std::size_t i = 0; i < fwd.delta.size(); ++i)
        CHECK(fwd.delta[i] == Catch::Approx(-rev.delta[i]).margin(1e-15));
}

TEST_CASE("concepts missing a period are excluded with a warning") {
    std::map<std::string, SemanticObject> src, tgt;
    src.emplace("a", centroid_object("a", {1.0f, 0.0f}));
    src.emplace("b", centroid_object("b", {0.0f, 1.0f}));
    src.emplace("gone", centroid_object("gone", {0.5f, 0.5f}));
    tgt.emplace("a", centroid_object("a", {1.0f, 0.0f}));
    tgt.emplace("b", centroid_object("b", {0.0f, 1.0f}));
    const auto m = drift_matrix(src, tgt);
    CHECK(m.anchors == std::vector<std::string>{"a", "b"});
    REQUIRE(m.warnings.size() == 1);
    CHECK(m.warnings[0].find("gone") != std::string::npos);
}

TEST_CASE("the mask is recomputable from the emitted matrix") {
    std::map<std::string, SemanticObject> src, tgt;
    src.emplace("a", centroid_object("a", {1.0f, 0.0f}));
    src.emplace("b", centroid_object("b", {0.0f, 1.0f}));
    src.emplace("c", centroid_object("c", {0.7071f, 0.7071f}));
    src.emplace("d", centroid_object("d", {0.3f, 0.954f}));
    tgt.emplace("a", centroid_object("a", {1.0f, 0.0f}));
    tgt.emplace("b", centroid_object("b", {0.8f, 0.6f}));
    tgt.emplace("c", centroid_object("c", {0.6f, 0.8f}));
    tgt.emplace("d", centroid_object("d", {0.3f, 0.954f}));
    const auto m = drift_matrix(src, tgt);

    const auto path = fs::temp_directory_path() / "semshift_drift_test.csv";
    save_drift(path, m);
    const auto lines = read_lines(path);
    REQUIRE(lines.size() >= 2);
    CHECK(lines[0] == "concept_a,concept_b,sim_source,sim_target,delta,significant");

    std::vector<double> deltas;
    std::vector<int> significant;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cols = split(lines[i], ',');
        REQUIRE(cols.size() == 6);
        deltas.push_back(std::stod(cols[4]));
        significant.push_back(std::stoi(cols[5]));
    }
    double mean = 0.0;
    for (const double d : deltas) mean += d;
    mean /= static_cast<double>(deltas.size());
    double var = 0.0;
    for (const double d : deltas) var += (d - mean) * (d - mean);
    const double sd = std::sqrt(var / static_cast<double>(deltas.size()));
    for (std::size_t i = 0; i < deltas.size(); ++i)
        CHECK(significant[i] == (std::abs(deltas[i]) > sd ? 1 : 0));
    fs::remove(path);
}
