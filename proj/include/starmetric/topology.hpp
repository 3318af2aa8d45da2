#ifndef STARMETRIC_TOPOLOGY_HPP
#define STARMETRIC_TOPOLOGY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "starmetric/errors.hpp"
#include "starmetric/law_report.hpp"
#include "starmetric/point.hpp"
#include "starmetric/space.hpp"
#include "starmetric/tdefiner.hpp"

namespace starmetric {

/// Open ball N_r(a) = {b : d(a,b) < r}. Membership is strict; every tolerance
/// back-off in this module is applied when a radius is constructed, never
/// when membership is tested, so the strict comparison is the single source
/// of truth. The ball references its space; the space must outlive the ball.
struct Ball {
    const StarMetricSpace* space = nullptr;
    Point center;
    double radius = 0.0;
};

inline void validate_ball(const Ball& ball) {
    if (!ball.space) throw usage_error("ball has no space");
    if (!(ball.radius > 0.0)) throw usage_error("ball radius must be positive");
    validate_point(*ball.space, ball.center);
}

inline bool ball_contains(const Ball& ball, const Point& p) {
    return ball.space->dist(ball.center, p) < ball.radius;
}

inline PointSet ball_members(const Ball& ball, const PointSet& candidates) {
    validate_ball(ball);
    validate_points(*ball.space, candidates);
    PointSet members;
    for (const auto& p : candidates)
        if (ball_contains(ball, p)) members.push_back(p);
    return members;
}

namespace detail {

// Near-maximal c with g(c) < threshold, for nondecreasing g with
// g(0) < threshold <= g(hi). Bisection keeps the strict side as the returned
// endpoint, so no separate back-off step is needed; the halving loop at the
// end covers the degenerate case where the crossover sits below the bracket
// tolerance.
template <typename G>
double largest_below_threshold(G&& g, double threshold, double hi,
                               const ToleranceConfig& cfg) {
    double lo = 0.0;
    for (int iter = 0; iter < cfg.max_bisection_iters && hi - lo > cfg.numeric_residuum_tol;
         ++iter) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        if (g(mid) >= threshold) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if (lo > 0.0) return lo;
    double c = 0.5 * hi;
    for (int iter = 0; iter < cfg.max_bisection_iters && c > 0.0; ++iter) {
        if (g(c) < threshold) return c;
        c *= 0.5;
    }
    throw numeric_error("no positive value below threshold found", 0.0, hi);
}

}  // namespace detail

/// The interior-point radius from the openness argument:
///   eps = d(center, y) -o radius.
/// Every z with d(y, z) < eps satisfies d(center, z) < radius, because
/// d(y,z) < d(x,y) -o r  <=>  d(y,z) (*) d(x,y) < r  >=  d(x,z).
/// eps > 0 whenever y is strictly inside the ball. The numeric-residuum path
/// under-approximates the true residuum, which only shrinks the witness ball
/// and keeps the guarantee.
inline double interior_witness(const Ball& ball, const Point& y,
                               const ToleranceConfig& cfg = {}) {
    validate_ball(ball);
    validate_point(*ball.space, y);
    const double d = ball.space->dist(ball.center, y);
    if (!(d < ball.radius))
        throw usage_error("interior_witness: point " + format_point(y) +
                          " is not inside the ball (d = " + std::to_string(d) +
                          ", r = " + std::to_string(ball.radius) + ")");
    const TDefiner& star = ball.space->star;
    const double eps = residuum(star, d, ball.radius, cfg);
    if (eps > 0.0) return eps;
    // Numeric residuum can collapse to 0 when the true value is below the
    // bracket tolerance; recover a positive sound witness by halving.
    return detail::largest_below_threshold(
        [&](double c) { return apply(star, c, d); }, ball.radius, ball.radius, cfg);
}

/// A radius s with s (*) s < d(a, b): balls of radius s around a and b are
/// disjoint (the Hausdorff separation argument). Bisection on the continuous
/// nondecreasing map s -> s (*) s over [0, d(a,b)] returns a near-maximal
/// valid s, making the disjointness as sharp as the sample allows.
inline double separation_radius(const StarMetricSpace& space, const Point& a, const Point& b,
                                const ToleranceConfig& cfg = {}) {
    validate_point(space, a);
    validate_point(space, b);
    const double d = space.dist(a, b);
    if (!(d > 0.0))
        throw usage_error("separation_radius: points " + format_point(a) + " and " +
                          format_point(b) + " are indiscernible (d = 0)");
    const TDefiner& star = space.star;
    return detail::largest_below_threshold([&](double s) { return apply(star, s, s); }, d, d,
                                           cfg);
}

struct NormalSeparation {
    std::vector<Ball> u_balls;  // around points of A
    std::vector<Ball> v_balls;  // around points of B
};

/// The constructive step of the normality proof for finite closed sets: for
/// each a in A take r_a just under the least distance to B, then s_a with
/// s_a (*) s_a < r_a; symmetrically for B. The unions of the resulting balls
/// are disjoint open sets containing A and B.
inline NormalSeparation normal_separation(const StarMetricSpace& space, const PointSet& A,
                                          const PointSet& B, const ToleranceConfig& cfg = {}) {
    if (A.empty() || B.empty()) throw usage_error("normal_separation: A and B must be nonempty");
    validate_points(space, A);
    validate_points(space, B);
    for (const auto& a : A)
        for (const auto& b : B)
            if (a == b)
                throw usage_error("normal_separation: A and B overlap at " + format_point(a));

    auto build_side = [&](const PointSet& from, const PointSet& other) {
        std::vector<Ball> balls;
        balls.reserve(from.size());
        for (const auto& p : from) {
            double r = std::numeric_limits<double>::infinity();
            for (const auto& q : other) r = std::min(r, space.dist(p, q));
            if (!(r > 0.0))
                throw usage_error("normal_separation: cross-distance is zero at " +
                                  format_point(p));
            // One tolerance step below the least cross-distance, kept positive.
            r -= std::min(cfg.abs_tol, 0.5 * r);
            const double s = detail::largest_below_threshold(
                [&](double x) { return apply(space.star, x, x); }, r, r, cfg);
            balls.push_back(Ball{&space, p, s});
        }
        return balls;
    };

    NormalSeparation result;
    result.u_balls = build_side(A, B);
    result.v_balls = build_side(B, A);
    return result;
}

/// Verify the product ball-inclusion chain
///   N_r^T  <=  N_r^max  <=  N_{r (*) ... (*) r}^T   (n-fold)
/// pointwise over a candidate set. The report's metadata carries the region
/// sizes.
inline LawReport product_ball_inclusion_check(const std::vector<StarMetricSpace>& factors,
                                              const TDefiner& star, const Point& center,
                                              double r, const PointSet& candidates,
                                              const ToleranceConfig& cfg = {}) {
    if (!(r > 0.0)) throw usage_error("product_ball_inclusion_check: radius must be positive");
    for (const auto& f : factors)
        if (f.star.name != star.name)
            throw usage_error("product_ball_inclusion_check: factor \"" + f.name +
                              "\" does not use t-definer \"" + star.name + "\"");
    const StarMetricSpace max_space = product_max(factors);
    const StarMetricSpace t_space = product_T(factors);
    validate_point(t_space, center);
    validate_points(t_space, candidates);

    double folded = r;
    for (std::size_t i = 1; i < factors.size(); ++i) folded = apply(star, folded, r);

    LawReport report;
    report.suite = "product-ball-inclusion(" + t_space.name + ")";
    report.abs_tol = cfg.abs_tol;
    report.numeric_residuum_tol = cfg.numeric_residuum_tol;

    LawCheck t_in_max{"N_r^T within N_r^max"};
    LawCheck max_in_folded{"N_r^max within N_folded^T"};
    std::size_t count_t = 0, count_max = 0, count_folded = 0;
    for (const auto& p : candidates) {
        const double dt = t_space.dist(center, p);
        const double dm = max_space.dist(center, p);
        const bool in_t = dt < r;
        const bool in_max = dm < r;
        const bool in_folded = dt < folded;
        count_t += in_t;
        count_max += in_max;
        count_folded += in_folded;
        ++t_in_max.samples_tested;
        if (in_t && !in_max && t_in_max.pass) {
            t_in_max.pass = false;
            t_in_max.witness = {{"p", p.coords}, {"d_T", dt}, {"d_max", dm}, {"r", r}};
        }
        ++max_in_folded.samples_tested;
        if (in_max && !in_folded && max_in_folded.pass) {
            max_in_folded.pass = false;
            max_in_folded.witness = {
                {"p", p.coords}, {"d_max", dm}, {"d_T", dt}, {"folded_radius", folded}};
        }
    }
    report.metadata = {{"count_T", count_t},
                       {"count_max", count_max},
                       {"count_T_folded", count_folded},
                       {"folded_radius", folded},
                       {"candidates", candidates.size()}};
    report.checks = {std::move(t_in_max), std::move(max_in_folded)};
    return report;
}

// ---------------------------------------------------------------------------
// Ball-membership rasters.
// ---------------------------------------------------------------------------

struct Window {
    double xmin = -1.0, xmax = 1.0;
    double ymin = -1.0, ymax = 1.0;
};

enum class CellState : std::uint8_t { outside = 0, inside = 1, boundary = 2 };

/// resolution x resolution raster of ball membership over a window. Rows run
/// top to bottom (y from ymax down), columns left to right. Cells whose
/// distance sits within abs_tol of the radius are marked boundary-ambiguous
/// instead of in/out, so downstream comparisons do not hinge on raster luck.
/// Cells outside the space's domain are marked outside.
struct MembershipGrid {
    std::size_t resolution = 0;
    Window window;
    std::vector<std::uint8_t> cells;  // row-major

    std::uint8_t at(std::size_t row, std::size_t col) const {
        return cells[row * resolution + col];
    }
    double x_at(std::size_t col) const {
        return window.xmin + (window.xmax - window.xmin) * static_cast<double>(col) /
                                 static_cast<double>(resolution - 1);
    }
    double y_at(std::size_t row) const {
        return window.ymax - (window.ymax - window.ymin) * static_cast<double>(row) /
                                 static_cast<double>(resolution - 1);
    }
};

inline MembershipGrid ball_grid(const StarMetricSpace& space, const Point& center, double r,
                                const Window& window, std::size_t resolution,
                                const ToleranceConfig& cfg = {}) {
    if (space.arity != 2)
        throw usage_error("ball_grid requires a 2-dimensional space; got arity " +
                          std::to_string(space.arity));
    if (resolution < 2) throw usage_error("ball_grid resolution must be at least 2");
    if (!(r > 0.0)) throw usage_error("ball_grid radius must be positive");
    if (!(window.xmax > window.xmin) || !(window.ymax > window.ymin))
        throw usage_error("ball_grid window is empty");
    validate_point(space, center);

    MembershipGrid grid;
    grid.resolution = resolution;
    grid.window = window;
    grid.cells.resize(resolution * resolution);
    for (std::size_t row = 0; row < resolution; ++row) {
        const double y = grid.y_at(row);
        for (std::size_t col = 0; col < resolution; ++col) {
            const Point p{{grid.x_at(col), y}};
            CellState state = CellState::outside;
            if (space.contains(p)) {
                const double d = space.dist(center, p);
                state = std::abs(d - r) < cfg.abs_tol ? CellState::boundary
                        : d < r                       ? CellState::inside
                                                      : CellState::outside;
            }
            grid.cells[row * resolution + col] = static_cast<std::uint8_t>(state);
        }
    }
    return grid;
}

}  // namespace starmetric

#endif  // STARMETRIC_TOPOLOGY_HPP
