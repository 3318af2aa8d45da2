// Test-only oracles, independent of the implementation paths they check.
#ifndef STARMETRIC_TESTS_ORACLE_HPP
#define STARMETRIC_TESTS_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "starmetric/point.hpp"
#include "starmetric/rng.hpp"
#include "starmetric/tdefiner.hpp"

namespace oracle {

/// Grid inf-search for the residuum: the smallest c on a uniform grid over
/// [0, b] with c (*) a >= b. Accurate to one grid step; b itself is always
/// feasible, so the search cannot come up empty.
inline double residuum_grid(const starmetric::TDefiner& star, double a, double b,
                            std::size_t steps = 200000) {
    for (std::size_t i = 0; i < steps; ++i) {
        const double c = b * static_cast<double>(i) / static_cast<double>(steps);
        if (star.op(c, a) >= b) return c;
    }
    return b;
}

inline double residuum_grid_step(double b, std::size_t steps = 200000) {
    return b / static_cast<double>(steps);
}

/// Reference formulas for the built-in residuums, written directly from the
/// per-operator algebra rather than through any library path.
inline double reference_residuum_L(double a, double b) { return a >= b ? 0.0 : b - a; }
inline double reference_residuum_max(double a, double b) { return a >= b ? 0.0 : b; }
inline double reference_residuum_s(double a, double b) {
    return a >= b ? 0.0 : std::sqrt(b * b - a * a);
}
inline double reference_residuum_p(double a, double b) {
    if (a >= b) return 0.0;
    const double r = std::sqrt(b) - std::sqrt(a);
    return r * r;
}

inline starmetric::PointSet random_scalar_points(std::uint64_t seed, std::size_t count,
                                                 double lo, double hi) {
    starmetric::Rng rng(seed);
    starmetric::PointSet points;
    points.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        points.push_back(starmetric::scalar_point(rng.uniform(lo, hi)));
    return points;
}

inline starmetric::PointSet random_points(std::uint64_t seed, std::size_t count,
                                          std::size_t arity, double lo, double hi) {
    starmetric::Rng rng(seed);
    starmetric::PointSet points;
    points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<double> coords(arity);
        for (auto& c : coords) c = rng.uniform(lo, hi);
        points.push_back(starmetric::Point{std::move(coords)});
    }
    return points;
}

}  // namespace oracle

#endif  // STARMETRIC_TESTS_ORACLE_HPP
