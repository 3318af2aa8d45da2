#ifndef STARMETRIC_POINT_HPP
#define STARMETRIC_POINT_HPP

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "starmetric/errors.hpp"

namespace starmetric {

/// A point of a space: a fixed-length coordinate tuple (length 1 for scalar
/// spaces). Equality is exact coordinate equality.
struct Point {
    std::vector<double> coords;

    Point() = default;
    explicit Point(std::vector<double> c) : coords(std::move(c)) {}
    Point(std::initializer_list<double> c) : coords(c) {}

    std::size_t arity() const { return coords.size(); }
    double operator[](std::size_t i) const { return coords[i]; }

    friend bool operator==(const Point& a, const Point& b) { return a.coords == b.coords; }
    friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
};

using PointSet = std::vector<Point>;

inline Point scalar_point(double x) { return Point{{x}}; }

inline std::string format_point(const Point& p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.coords.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(p.coords[i]);
    }
    s += ")";
    return s;
}

inline void require_finite(const Point& p) {
    for (double c : p.coords)
        if (!std::isfinite(c))
            throw domain_error("point " + format_point(p) + " has a non-finite coordinate");
}

}  // namespace starmetric

#endif  // STARMETRIC_POINT_HPP
