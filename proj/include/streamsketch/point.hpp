#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "streamsketch/errors.hpp"

namespace streamsketch {

/// Dense vector with 32-bit coordinates. Distances are accumulated in double.
struct Point {
    std::vector<float> coords;

    Point() = default;
    explicit Point(std::vector<float> c) : coords(std::move(c)) {}
    Point(std::initializer_list<float> c) : coords(c) {}

    std::size_t dim() const { return coords.size(); }
    float operator[](std::size_t i) const { return coords[i]; }
    float& operator[](std::size_t i) { return coords[i]; }
    const float* data() const { return coords.data(); }

    bool operator==(const Point& other) const { return coords == other.coords; }
};

/// A point with its stream identifier.
struct IdPoint {
    std::uint64_t id = 0;
    Point point;
};

/// A referenced point together with its distance to some query.
struct Neighbor {
    std::uint64_t id = 0;
    double distance = 0.0;

    bool operator==(const Neighbor& other) const {
        return id == other.id && distance == other.distance;
    }
};

inline void require_same_dim(const Point& a, const Point& b) {
    if (a.dim() != b.dim())
        throw ShapeError("dimension mismatch between points");
}

inline double squared_distance(const Point& a, const Point& b) {
    require_same_dim(a, b);
    double acc = 0.0;
    const float* pa = a.data();
    const float* pb = b.data();
    for (std::size_t i = 0; i < a.dim(); ++i) {
        double d = static_cast<double>(pa[i]) - static_cast<double>(pb[i]);
        acc += d * d;
    }
    return acc;
}

inline double euclidean_distance(const Point& a, const Point& b) {
    return std::sqrt(squared_distance(a, b));
}

inline double dot(const Point& a, const Point& b) {
    require_same_dim(a, b);
    double acc = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        acc += static_cast<double>(a.coords[i]) * static_cast<double>(b.coords[i]);
    return acc;
}

inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }

inline bool all_finite(const Point& p) {
    for (float v : p.coords)
        if (!std::isfinite(v)) return false;
    return true;
}

} // namespace streamsketch
