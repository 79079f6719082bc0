#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "semshift/error.hpp"

namespace semshift {

inline double dot(std::span<const float> a, std::span<const float> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * b[i];
    return s;
}

inline double l2_norm(std::span<const float> v) {
    return std::sqrt(dot(v, v));
}

inline void normalize_in_place(std::span<float> v) {
    const double n = l2_norm(v);
    if (n == 0.0) throw NumericError("cannot normalize a zero vector");
    for (auto& x : v) x = static_cast<float>(x / n);
}

// Cosine similarity in [-1, 1]. Throws NumericError on a zero vector.
inline double cosine(std::span<const float> a, std::span<const float> b) {
    const double na = l2_norm(a);
    const double nb = l2_norm(b);
    if (na == 0.0 || nb == 0.0) throw NumericError("cosine of a zero vector is undefined");
    double c = dot(a, b) / (na * nb);
    if (c > 1.0) c = 1.0;
    if (c < -1.0) c = -1.0;
    return c;
}

inline double cosine_distance(std::span<const float> a, std::span<const float> b) {
    return 1.0 - cosine(a, b);
}

}  // namespace semshift
