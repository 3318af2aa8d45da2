// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Everything is seeded and runs at desk scale.
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "starmetric/starmetric.hpp"

using namespace starmetric;

namespace {

struct Harness {
    int failures = 0;

    void criterion(int id, const std::string& label, const std::function<bool(std::string&)>& fn) {
        std::string detail;
        bool ok = false;
        try {
            ok = fn(detail);
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", id, label.c_str(),
                    detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
};

std::vector<std::array<double, 3>> law_triples() {
    auto triples = grid_triples(0.0, 10.0, 20);
    for (auto& t : sample_triples(20240501, 10000, 0.0, 10.0)) triples.push_back(t);
    return triples;
}

// The six residuum laws against a pluggable residuum evaluator.
bool residuum_laws_hold(const TDefiner& star,
                        const std::function<double(double, double)>& R, double tol,
                        std::string& detail) {
    for (const auto& [a, b, c] : law_triples()) {
        const double r_ab = R(a, b);

        // (1) the minimum is attained and no sampled feasible value beats it
        if (!(apply(star, r_ab, a) >= b - tol)) {
            detail = star.name + ": law 1 (attainment) at a=" + std::to_string(a) +
                     " b=" + std::to_string(b);
            return false;
        }
        for (double x : {a, b, c}) {
            if (apply(star, x, a) >= b && !(r_ab <= x + tol)) {
                detail = star.name + ": law 1 (minimality on samples)";
                return false;
            }
        }
        // (2) 0 -o a = a
        if (!(std::abs(R(0.0, a) - a) <= tol)) {
            detail = star.name + ": law 2 (identity) at a=" + std::to_string(a);
            return false;
        }
        // (3) a -o b = 0 iff a >= b
        if (a >= b && !(r_ab <= tol)) {
            detail = star.name + ": law 3 (vanishing, forward)";
            return false;
        }
        if (b > a + 0.01 && !(r_ab > 0.0)) {
            detail = star.name + ": law 3 (vanishing, converse)";
            return false;
        }
        // (4) a * (a -o b) = max(a, b)
        if (!(std::abs(apply(star, a, r_ab) - std::max(a, b)) <= tol)) {
            detail = star.name + ": law 4 (absorption) at a=" + std::to_string(a) +
                     " b=" + std::to_string(b);
            return false;
        }
        // (5) a -o b >= (c -o a) -o (c -o b)
        if (!(r_ab >= R(R(c, a), R(c, b)) - tol)) {
            detail = star.name + ": law 5 (co-transitivity)";
            return false;
        }
        // (6) a -o b <= (a -o c) * (c -o b)
        if (!(r_ab <= apply(star, R(a, c), R(c, b)) + tol)) {
            detail = star.name + ": law 6 (triangle)";
            return false;
        }
    }
    return true;
}

PointSet seeded_points(std::uint64_t seed, std::size_t count, std::size_t arity) {
    Rng rng(seed);
    PointSet points;
    points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<double> coords(arity);
        for (auto& c : coords) c = rng.uniform(0.0, 100.0);
        points.push_back(Point{std::move(coords)});
    }
    return points;
}

// Full-M1 checking only makes sense for data in general position: the checker
// reports coordinate-distinct pairs inside the tolerance band as ambiguous
// instead of passing them, and d_p compresses near-equal coordinates
// quadratically. A Chebyshev gap of 0.01 keeps every built-in pair distance
// above 2.5e-7, well clear of the 1e-9 band.
PointSet seeded_points_general_position(std::uint64_t seed, std::size_t count,
                                        std::size_t arity, double min_sep) {
    Rng rng(seed);
    PointSet points;
    points.reserve(count);
    while (points.size() < count) {
        std::vector<double> coords(arity);
        for (auto& c : coords) c = rng.uniform(0.0, 100.0);
        bool separated = true;
        for (const auto& q : points) {
            double cheb = 0.0;
            for (std::size_t i = 0; i < arity; ++i)
                cheb = std::max(cheb, std::abs(coords[i] - q.coords[i]));
            if (cheb < min_sep) {
                separated = false;
                break;
            }
        }
        if (separated) points.push_back(Point{std::move(coords)});
    }
    return points;
}

bool distance_multisets_equal(const std::vector<Neighbor>& a, const std::vector<Neighbor>& b) {
    if (a.size() != b.size()) return false;
    std::vector<double> da, db;
    for (const auto& nb : a) da.push_back(nb.distance);
    for (const auto& nb : b) db.push_back(nb.distance);
    std::sort(da.begin(), da.end());
    std::sort(db.begin(), db.end());
    return da == db;  // bitwise
}

}  // namespace

int main() {
    Harness harness;
    const ToleranceConfig cfg;

    harness.criterion(1, "d_p regression on {1,16,25}: star-triangle holds, plain fails", [&](std::string& detail) {
        const auto dp = induced_metric(p_tdefiner());
        const double d_1_25 = dp.dist(scalar_point(1), scalar_point(25));
        const double d_1_16 = dp.dist(scalar_point(1), scalar_point(16));
        const double d_16_25 = dp.dist(scalar_point(16), scalar_point(25));
        if (d_1_25 != 16.0 || d_1_16 != 9.0 || d_16_25 != 1.0) {
            detail = "closed-form distances off";
            return false;
        }
        const PointSet pts{scalar_point(1), scalar_point(16), scalar_point(25)};
        if (!check_star_metric_axioms(dp, pts, cfg).passed()) {
            detail = "M3* failed under the p t-definer";
            return false;
        }
        MetricCheckOptions forced;
        forced.override_star = &lukasiewicz_tdefiner();
        const LawReport report = check_star_metric_axioms(dp, pts, cfg, forced);
        const LawCheck* m3 = report.find("M3* star-triangle");
        if (!m3 || m3->pass) {
            detail = "plain triangle inequality unexpectedly held";
            return false;
        }
        const double margin = m3->witness.at("margin").get<double>();
        if (margin != 6.0) {
            detail = "margin " + std::to_string(margin) + " != 6";
            return false;
        }
        detail = "16 > 9 + 1 with margin 6";
        return true;
    });

    harness.criterion(2, "six residuum laws, closed 1e-9 / numeric 1e-6",
                      [&](std::string& detail) {
        for (const auto& star : builtin_tdefiners()) {
            auto closed = [&](double a, double b) { return residuum(star, a, b, cfg); };
            if (!residuum_laws_hold(star, closed, 1e-9, detail)) return false;

            // Bisection bracket chosen so worst-case slope amplification
            // (law 4 near the zero boundary) stays inside the 1e-6 gate.
            ToleranceConfig numeric_cfg = cfg;
            numeric_cfg.numeric_residuum_tol = 1e-15;
            auto numeric = [&](double a, double b) {
                return residuum_numeric(star, a, b, numeric_cfg);
            };
            if (!residuum_laws_hold(star, numeric, 1e-6, detail)) return false;
        }
        detail = "4 t-definers x " + std::to_string(law_triples().size()) + " triples x 2 modes";
        return true;
    });

    harness.criterion(3, "residuation biconditional, one-sided 1e-6", [&](std::string& detail) {
        std::size_t checked = 0;
        for (const auto& star : builtin_tdefiners()) {
            for (const auto& [a, b, c] : sample_triples(777, 10000, 0.0, 10.0)) {
                const double r = residuum(star, a, b, cfg);
                if (c >= r && !(apply(star, c, a) >= b - 1e-6)) {
                    detail = star.name + ": forward direction";
                    return false;
                }
                if (apply(star, c, a) >= b && !(c >= r - 1e-6)) {
                    detail = star.name + ": reverse direction";
                    return false;
                }
                ++checked;
            }
        }
        detail = std::to_string(checked) + " triples";
        return true;
    });

    harness.criterion(4, "closed-form vs bisection residuum <= 1e-6 on 100x100 grid",
                      [&](std::string& detail) {
        double worst = 0.0;
        for (const auto& star : builtin_tdefiners())
            for (auto [a, b] : grid_pairs(0.0, 10.0, 100))
                worst = std::max(worst, std::abs(residuum(star, a, b, cfg) -
                                                 residuum_numeric(star, a, b, cfg)));
        std::ostringstream s;
        s << "largest discrepancy " << worst;
        detail = s.str();
        return worst <= 1e-6;
    });

    harness.criterion(5, "ordering chain max <= s <= lukasiewicz <= p", [&](std::string& detail) {
        const auto grid = grid_pairs(0.0, 10.0, 100);
        const std::vector<std::pair<const TDefiner*, const TDefiner*>> chain{
            {&max_tdefiner(), &s_tdefiner()},
            {&s_tdefiner(), &lukasiewicz_tdefiner()},
            {&lukasiewicz_tdefiner(), &p_tdefiner()}};
        for (const auto& [weaker, stronger] : chain) {
            const ComparisonResult result = compare(*weaker, *stronger, grid, cfg);
            if (result.le_violation) {
                detail = weaker->name + " !<= " + stronger->name;
                return false;
            }
            if (result.verdict != Ordering::weaker_or_equal) {
                detail = weaker->name + " vs " + stronger->name + ": verdict " +
                         to_string(result.verdict);
                return false;
            }
        }
        detail = "zero violations on " + std::to_string(grid.size()) + " pairs per link";
        return true;
    });

    harness.criterion(6, "star-metric axioms for induced and product spaces",
                      [&](std::string& detail) {
        std::size_t suites = 0;
        std::uint64_t seed = 6000;
        for (const auto& star : builtin_tdefiners()) {
            MetricCheckOptions options;
            options.triple_budget = 1'000'000;
            options.seed = seed;

            const auto scalar_points = seeded_points_general_position(seed++, 200, 1, 0.01);
            if (!check_star_metric_axioms(induced_metric(star, cfg), scalar_points, cfg, options)
                     .passed()) {
                detail = "induced(" + star.name + ")";
                return false;
            }
            ++suites;
            for (std::size_t arity : {2, 3}) {
                const std::vector<StarMetricSpace> factors(arity, induced_metric(star, cfg));
                const auto points = seeded_points_general_position(seed++, 200, arity, 0.01);
                for (const auto& space : {product_max(factors), product_T(factors)}) {
                    options.seed = seed;
                    if (!check_star_metric_axioms(space, points, cfg, options).passed()) {
                        detail = space.name;
                        return false;
                    }
                    ++suites;
                }
            }
        }
        detail = std::to_string(suites) + " suites, 200 points each, budget 10^6";
        return true;
    });

    harness.criterion(7, "index oracle equivalence (bitwise distance multisets)",
                      [&](std::string& detail) {
        std::vector<StarMetricSpace> configs;
        for (const auto& star : builtin_tdefiners()) configs.push_back(induced_metric(star, cfg));
        const std::vector<StarMetricSpace> p_factors{induced_metric(p_tdefiner(), cfg),
                                                     induced_metric(p_tdefiner(), cfg)};
        configs.push_back(product_max(p_factors));
        configs.push_back(product_T(p_factors));

        std::size_t queries_run = 0;
        std::uint64_t seed = 7000;
        for (const auto& space : configs) {
            const PointSet points = seeded_points(seed++, 2000, space.arity);
            const VpTree tree(points, space, 16, seed++);
            Rng rng(seed++);
            for (int q = 0; q < 100; ++q) {
                std::vector<double> coords(space.arity);
                for (auto& c : coords) c = rng.uniform(0.0, 100.0);
                const Point query{std::move(coords)};
                for (std::size_t k : {1, 5, 20}) {
                    const KnnResult got = tree.knn(query, k);
                    const KnnResult expected = brute_force(points, space, query, k);
                    if (!distance_multisets_equal(got.neighbors, expected.neighbors)) {
                        detail = space.name + ": knn k=" + std::to_string(k) + " mismatch";
                        return false;
                    }
                }
                const double radius = rng.uniform(1.0, 40.0);
                if (!distance_multisets_equal(tree.range_query(query, radius),
                                              brute_force_range(points, space, query, radius))) {
                    detail = space.name + ": range mismatch";
                    return false;
                }
                ++queries_run;
            }
        }
        detail = std::to_string(configs.size()) + " spaces, n=2000, " +
                 std::to_string(queries_run) + " query points, k in {1,5,20} plus range";
        return true;
    });

    harness.criterion(8, "lukasiewicz pruning bounds reduce to D-mu / mu-D",
                      [&](std::string& detail) {
        Rng rng(8080);
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const double D = rng.uniform(0.0, 100.0);
            const double mu = rng.uniform(0.0, 100.0);
            worst = std::max(worst, std::abs(inner_lower_bound(lukasiewicz_tdefiner(), mu, D) -
                                             std::max(0.0, D - mu)));
            worst = std::max(worst, std::abs(outer_lower_bound(lukasiewicz_tdefiner(), D, mu) -
                                             std::max(0.0, mu - D)));
        }
        std::ostringstream s;
        s << "largest deviation " << worst << " on 10^4 samples";
        detail = s.str();
        return worst <= 1e-12;
    });

    harness.criterion(9, "topology procedures: witness, separation, normality, inclusion",
                      [&](std::string& detail) {
        Rng rng(9090);
        for (const auto& star : builtin_tdefiners()) {
            const auto space = induced_metric(star, cfg);

            // Interior-witness soundness, 10^4 sampled z per witness.
            for (int trial = 0; trial < 25; ++trial) {
                const Point center = scalar_point(rng.uniform(0.0, 100.0));
                const double radius = rng.uniform(0.5, 50.0);
                const Ball ball{&space, center, radius};
                Point y = center;
                for (int attempt = 0; attempt < 64; ++attempt) {
                    const Point candidate = scalar_point(rng.uniform(0.0, 100.0));
                    if (ball_contains(ball, candidate)) {
                        y = candidate;
                        break;
                    }
                }
                const double eps = interior_witness(ball, y, cfg);
                if (!(eps > 0.0)) {
                    detail = star.name + ": nonpositive interior witness";
                    return false;
                }
                const double spread = std::min(2.0 * eps, 200.0);
                for (int i = 0; i < 10000; ++i) {
                    const Point z =
                        scalar_point(std::max(0.0, y[0] + rng.uniform(-spread, spread)));
                    if (space.dist(y, z) < eps && !(space.dist(center, z) < radius)) {
                        detail = star.name + ": interior witness violated";
                        return false;
                    }
                }
            }

            // Hausdorff separation on random pairs.
            const PointSet candidates = seeded_points(501 + star.name.size(), 300, 1);
            for (int trial = 0; trial < 250; ++trial) {
                const Point a = scalar_point(rng.uniform(0.0, 100.0));
                const Point b = scalar_point(rng.uniform(0.0, 100.0));
                if (space.dist(a, b) <= 0.0) continue;
                const double s = separation_radius(space, a, b, cfg);
                if (!(apply(star, s, s) < space.dist(a, b))) {
                    detail = star.name + ": s*s not below d(a,b)";
                    return false;
                }
                const Ball ball_a{&space, a, s};
                const Ball ball_b{&space, b, s};
                for (const auto& c : candidates) {
                    if (ball_contains(ball_a, c) && ball_contains(ball_b, c)) {
                        detail = star.name + ": separation balls intersect";
                        return false;
                    }
                }
            }

            // Normal separation of random finite sets over 10^4 candidates.
            const PointSet grid10k = seeded_points(601 + star.name.size(), 10000, 1);
            for (int trial = 0; trial < 25; ++trial) {
                PointSet A, B;
                const std::size_t na = 1 + rng.index(4), nb = 1 + rng.index(4);
                for (std::size_t i = 0; i < na; ++i)
                    A.push_back(scalar_point(rng.uniform(0.0, 45.0)));
                for (std::size_t i = 0; i < nb; ++i)
                    B.push_back(scalar_point(rng.uniform(55.0, 100.0)));
                const NormalSeparation sep = normal_separation(space, A, B, cfg);
                for (const auto& c : grid10k) {
                    bool in_u = false, in_v = false;
                    for (const auto& ball : sep.u_balls) in_u = in_u || ball_contains(ball, c);
                    for (const auto& ball : sep.v_balls) in_v = in_v || ball_contains(ball, c);
                    if (in_u && in_v) {
                        detail = star.name + ": U and V intersect";
                        return false;
                    }
                }
            }

            // Ball-inclusion chain for n = 1, 2, 3 over 10^4 candidates each.
            for (std::size_t n = 1; n <= 3; ++n) {
                const std::vector<StarMetricSpace> factors(n, space);
                const PointSet chain_candidates = seeded_points(701 + n, 10000, n);
                for (int rep = 0; rep < 2; ++rep) {
                    std::vector<double> coords(n);
                    for (auto& c : coords) c = rng.uniform(0.0, 100.0);
                    const double r = rng.uniform(0.5, 30.0);
                    const LawReport chain = product_ball_inclusion_check(
                        factors, star, Point{std::move(coords)}, r, chain_candidates, cfg);
                    if (!chain.passed()) {
                        detail = star.name + ": inclusion chain broken at n=" +
                                 std::to_string(n);
                        return false;
                    }
                }
            }
        }
        detail = "zero violations across all four built-ins";
        return true;
    });

    harness.criterion(10, "membership rasters: square, disc, diamond at r=1",
                      [&](std::string& detail) {
        const auto line = signed_line_space(lukasiewicz_tdefiner());
        const std::vector<StarMetricSpace> factors{line, line};
        const Window window{-1.5, 1.5, -1.5, 1.5};
        const double r = 1.0;

        struct Shape {
            StarMetricSpace space;
            std::function<double(double, double)> dist_from_origin;
            const char* name;
        };
        const std::vector<Shape> shapes{
            {product_max(factors),
             [](double x, double y) { return std::max(std::abs(x), std::abs(y)); }, "square"},
            {euclidean_product_L(factors),
             [](double x, double y) { return std::sqrt(x * x + y * y); }, "disc"},
            {product_T(factors),
             [](double x, double y) { return std::abs(x) + std::abs(y); }, "diamond"},
        };

        std::size_t compared = 0, excluded = 0;
        for (const auto& shape : shapes) {
            const MembershipGrid grid =
                ball_grid(shape.space, Point{0, 0}, r, window, 301, cfg);
            for (std::size_t row = 0; row < grid.resolution; ++row) {
                for (std::size_t col = 0; col < grid.resolution; ++col) {
                    const double x = grid.x_at(col);
                    const double y = grid.y_at(row);
                    const double reference = shape.dist_from_origin(x, y);
                    const std::uint8_t cell = grid.at(row, col);
                    if (cell == 2 || std::abs(reference - r) < cfg.abs_tol) {
                        ++excluded;
                        continue;
                    }
                    const bool expected = reference < r;
                    if ((cell == 1) != expected) {
                        std::ostringstream s;
                        s << shape.name << " mismatch at (" << x << ", " << y << ")";
                        detail = s.str();
                        return false;
                    }
                    ++compared;
                }
            }
        }
        std::ostringstream s;
        s << compared << " cells matched, " << excluded << " boundary-ambiguous excluded";
        detail = s.str();
        return true;
    });

    std::printf("%d/10 criteria passed\n", 10 - harness.failures);
    return harness.failures == 0 ? 0 : 1;
}
