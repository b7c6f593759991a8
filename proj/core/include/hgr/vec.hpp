#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace hgr::vec {

inline double dot(std::span<const float> a, std::span<const float> b) {
    double s = 0.0;
    std::size_t n = a.size() < b.size() ? a.size() : b.size();
    for (std::size_t i = 0; i < n; ++i)
        s += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    return s;
}

inline double norm(std::span<const float> a) {
    return std::sqrt(dot(a, a));
}

// Cosine similarity; 0 when either vector is all-zero.
inline double cosine(std::span<const float> a, std::span<const float> b) {
    double na = norm(a);
    double nb = norm(b);
    if (na == 0.0 || nb == 0.0)
        return 0.0;
    double c = dot(a, b) / (na * nb);
    if (c > 1.0)
        c = 1.0;
    if (c < -1.0)
        c = -1.0;
    return c;
}

inline std::vector<float> concat(std::span<const float> a, std::span<const float> b) {
    std::vector<float> out;
    out.reserve(a.size() + b.size());
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

} // namespace hgr::vec
