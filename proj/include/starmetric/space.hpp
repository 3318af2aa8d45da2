#ifndef STARMETRIC_SPACE_HPP
#define STARMETRIC_SPACE_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "starmetric/errors.hpp"
#include "starmetric/law_report.hpp"
#include "starmetric/point.hpp"
#include "starmetric/rng.hpp"
#include "starmetric/tdefiner.hpp"

namespace starmetric {

/// A point domain, a distance function, and the t-definer governing its
/// triangle inequality: d(x,y) <= d(x,z) (*) d(z,y). Immutable after
/// construction; distance evaluations are pure and safe to share across
/// concurrent readers.
struct StarMetricSpace {
    std::string name;
    TDefiner star;
    std::size_t arity = 1;
    std::function<double(const Point&, const Point&)> dist;
    std::function<bool(const Point&)> domain_constraint;  // empty = all finite points
    bool pseudometric = false;  // distinct points may sit at distance zero

    double distance(const Point& x, const Point& y) const { return dist(x, y); }

    bool contains(const Point& p) const {
        if (p.arity() != arity) return false;
        for (double c : p.coords)
            if (!std::isfinite(c)) return false;
        return !domain_constraint || domain_constraint(p);
    }
};

inline void validate_point(const StarMetricSpace& space, const Point& p) {
    if (!space.contains(p))
        throw domain_error("point " + format_point(p) + " is outside the domain of space \"" +
                           space.name + "\"");
}

inline void validate_points(const StarMetricSpace& space, const PointSet& points) {
    for (const auto& p : points) validate_point(space, p);
}

// ---------------------------------------------------------------------------
// Constructions.
// ---------------------------------------------------------------------------

/// The metric a t-definer induces on [0, inf):
///   d(a, b) = (a -o b) (*) (b -o a).
/// For the built-ins this reproduces d_L = |b-a|, d_max (0 on the diagonal,
/// max elsewhere), d_s = sqrt(|b^2-a^2|), d_p = (sqrt(b)-sqrt(a))^2.
inline StarMetricSpace induced_metric(const TDefiner& star, const ToleranceConfig& cfg = {}) {
    StarMetricSpace space;
    space.name = "induced(" + star.name + ")";
    space.star = star;
    space.arity = 1;
    space.dist = [star, cfg](const Point& x, const Point& y) {
        const double a = x[0];
        const double b = y[0];
        return apply(star, residuum(star, a, b, cfg), residuum(star, b, a, cfg));
    };
    space.domain_constraint = [](const Point& p) { return p[0] >= 0.0; };
    return space;
}

/// d_L or d_s extended from [0, inf) to the whole real line. Only these two
/// extensions are supported. The d_s extension identifies x and -x
/// (sqrt(|b^2 - a^2|) vanishes at b = -a), so that space is registered as a
/// pseudometric.
inline StarMetricSpace signed_line_space(const TDefiner& star) {
    StarMetricSpace space;
    space.star = star;
    space.arity = 1;
    if (star.name == "lukasiewicz") {
        space.name = "signed_line(lukasiewicz)";
        space.dist = [](const Point& x, const Point& y) { return std::abs(y[0] - x[0]); };
    } else if (star.name == "s") {
        space.name = "signed_line(s)";
        space.dist = [](const Point& x, const Point& y) {
            const double a = x[0];
            const double b = y[0];
            return std::sqrt(std::abs((b - a) * (b + a)));
        };
        space.pseudometric = true;
    } else {
        throw usage_error("signed_line_space supports only the lukasiewicz and s "
                          "t-definers; got \"" + star.name + "\"");
    }
    return space;
}

namespace detail {

struct FactorLayout {
    std::vector<StarMetricSpace> factors;
    std::vector<std::size_t> offsets;
    std::size_t total_arity = 0;
};

inline FactorLayout make_layout(std::vector<StarMetricSpace> factors, const char* op_name) {
    if (factors.empty())
        throw usage_error(std::string(op_name) + " requires at least one factor");
    const std::string& star_name = factors.front().star.name;
    for (const auto& f : factors)
        if (f.star.name != star_name)
            throw usage_error(std::string(op_name) +
                              ": all factors must share one t-definer (found \"" + star_name +
                              "\" and \"" + f.star.name + "\")");
    FactorLayout layout;
    layout.offsets.reserve(factors.size());
    for (const auto& f : factors) {
        layout.offsets.push_back(layout.total_arity);
        layout.total_arity += f.arity;
    }
    layout.factors = std::move(factors);
    return layout;
}

inline Point slice(const Point& p, std::size_t offset, std::size_t arity) {
    return Point{std::vector<double>(p.coords.begin() + static_cast<std::ptrdiff_t>(offset),
                                     p.coords.begin() +
                                         static_cast<std::ptrdiff_t>(offset + arity))};
}

inline std::function<bool(const Point&)> product_domain(
    std::shared_ptr<const FactorLayout> layout) {
    return [layout](const Point& p) {
        for (std::size_t i = 0; i < layout->factors.size(); ++i) {
            const auto& f = layout->factors[i];
            if (!f.contains(slice(p, layout->offsets[i], f.arity))) return false;
        }
        return true;
    };
}

inline bool any_pseudometric(const FactorLayout& layout) {
    for (const auto& f : layout.factors)
        if (f.pseudometric) return true;
    return false;
}

inline std::string product_name(const char* op_name, const FactorLayout& layout) {
    std::string s = std::string(op_name) + "(";
    for (std::size_t i = 0; i < layout.factors.size(); ++i) {
        if (i) s += ", ";
        s += layout.factors[i].name;
    }
    return s + ")";
}

}  // namespace detail

/// Coordinatewise-max product of spaces sharing one t-definer.
inline StarMetricSpace product_max(std::vector<StarMetricSpace> factors) {
    auto layout = std::make_shared<const detail::FactorLayout>(
        detail::make_layout(std::move(factors), "product_max"));
    StarMetricSpace space;
    space.name = detail::product_name("product_max", *layout);
    space.star = layout->factors.front().star;
    space.arity = layout->total_arity;
    space.pseudometric = detail::any_pseudometric(*layout);
    space.dist = [layout](const Point& x, const Point& y) {
        double best = 0.0;
        for (std::size_t i = 0; i < layout->factors.size(); ++i) {
            const auto& f = layout->factors[i];
            const double d = f.dist(detail::slice(x, layout->offsets[i], f.arity),
                                    detail::slice(y, layout->offsets[i], f.arity));
            best = std::max(best, d);
        }
        return best;
    };
    space.domain_constraint = detail::product_domain(layout);
    return space;
}

/// Star-fold product: d_T(x, y) = d_1 (*) d_2 (*) ... (*) d_n. A left fold in
/// factor order; T1/T2 make the order semantically irrelevant, fixing it pins
/// down the floating-point rounding order. Under the lukasiewicz t-definer
/// this is the Taxicab metric.
inline StarMetricSpace product_T(std::vector<StarMetricSpace> factors) {
    auto layout = std::make_shared<const detail::FactorLayout>(
        detail::make_layout(std::move(factors), "product_T"));
    StarMetricSpace space;
    space.name = detail::product_name("product_T", *layout);
    space.star = layout->factors.front().star;
    space.arity = layout->total_arity;
    space.pseudometric = detail::any_pseudometric(*layout);
    const TDefiner star = space.star;
    space.dist = [layout, star](const Point& x, const Point& y) {
        double acc = 0.0;
        bool first = true;
        for (std::size_t i = 0; i < layout->factors.size(); ++i) {
            const auto& f = layout->factors[i];
            const double d = f.dist(detail::slice(x, layout->offsets[i], f.arity),
                                    detail::slice(y, layout->offsets[i], f.arity));
            acc = first ? d : star.op(acc, d);
            first = false;
        }
        return acc;
    };
    space.domain_constraint = detail::product_domain(layout);
    return space;
}

/// sqrt(sum d_i^2) over lukasiewicz factors only: the classical Euclidean
/// product of ordinary metrics. The general-t-definer analogue has no
/// supporting theory, so anything else is rejected.
inline StarMetricSpace euclidean_product_L(std::vector<StarMetricSpace> factors) {
    auto layout = std::make_shared<const detail::FactorLayout>(
        detail::make_layout(std::move(factors), "euclidean_product_L"));
    if (layout->factors.front().star.name != "lukasiewicz")
        throw usage_error("euclidean_product_L supports only lukasiewicz factors; got \"" +
                          layout->factors.front().star.name + "\"");
    StarMetricSpace space;
    space.name = detail::product_name("euclidean_L", *layout);
    space.star = layout->factors.front().star;
    space.arity = layout->total_arity;
    space.pseudometric = detail::any_pseudometric(*layout);
    space.dist = [layout](const Point& x, const Point& y) {
        double sum = 0.0;
        for (std::size_t i = 0; i < layout->factors.size(); ++i) {
            const auto& f = layout->factors[i];
            const double d = f.dist(detail::slice(x, layout->offsets[i], f.arity),
                                    detail::slice(y, layout->offsets[i], f.arity));
            sum += d * d;
        }
        return std::sqrt(sum);
    };
    space.domain_constraint = detail::product_domain(layout);
    return space;
}

// ---------------------------------------------------------------------------
// Axiom checker.
// ---------------------------------------------------------------------------

struct MetricCheckOptions {
    bool pseudometric_mode = false;        // check M1' instead of full M1
    std::size_t triple_budget = 1'000'000; // sample triples beyond this
    std::uint64_t seed = 0;                // seed for triple sampling
    const TDefiner* override_star = nullptr;  // check M3* against a different t-definer
};

/// Check M1 (or M1'), M2 on all N^2 ordered pairs, and M3* on all N^3 ordered
/// triples (uniformly sampled with a recorded seed once N^3 exceeds the
/// budget). Counterexamples carry the points and the violated margin.
inline LawReport check_star_metric_axioms(const StarMetricSpace& space, const PointSet& points,
                                          const ToleranceConfig& cfg = {},
                                          const MetricCheckOptions& options = {}) {
    validate_points(space, points);
    const std::size_t n = points.size();
    const TDefiner& star = options.override_star ? *options.override_star : space.star;

    LawReport report;
    report.suite = "star-metric-axioms(" + space.name +
                   (options.override_star ? ", checked against " + star.name : std::string()) +
                   ")";
    report.abs_tol = cfg.abs_tol;
    report.numeric_residuum_tol = cfg.numeric_residuum_tol;

    auto point_json = [&](const Point& p) { return nlohmann::json(p.coords); };

    // Distance matrix makes every later check a lookup; fall back to direct
    // evaluation when the matrix would not fit comfortably in memory.
    const bool use_matrix = n <= 2048;
    std::vector<double> d;
    if (use_matrix) {
        d.resize(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d[i * n + j] = space.dist(points[i], points[j]);
    }
    auto dist = [&](std::size_t i, std::size_t j) {
        return use_matrix ? d[i * n + j] : space.dist(points[i], points[j]);
    };

    LawCheck m1{options.pseudometric_mode ? "M1' reflexivity" : "M1 identity of indiscernibles"};
    for (std::size_t i = 0; i < n; ++i) {
        ++m1.samples_tested;
        if (std::abs(dist(i, i)) > cfg.abs_tol && m1.pass) {
            m1.pass = false;
            m1.witness = {{"x", point_json(points[i])}, {"d(x,x)", dist(i, i)}};
        }
    }
    if (!options.pseudometric_mode) {
        for (std::size_t i = 0; i < n && m1.pass; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j || points[i] == points[j]) continue;
                ++m1.samples_tested;
                const double dij = dist(i, j);
                if (dij <= cfg.abs_tol) {
                    m1.pass = false;
                    m1.witness = {{"x", point_json(points[i])},
                                  {"y", point_json(points[j])},
                                  {"d(x,y)", dij}};
                    // Separate true degeneracy from values inside the tolerance band.
                    if (dij > 0.0) m1.note = "tolerance-ambiguous";
                    break;
                }
            }
        }
    }

    LawCheck m2{"M2 symmetry"};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            ++m2.samples_tested;
            if (std::abs(dist(i, j) - dist(j, i)) > cfg.abs_tol && m2.pass) {
                m2.pass = false;
                m2.witness = {{"x", point_json(points[i])},
                              {"y", point_json(points[j])},
                              {"d(x,y)", dist(i, j)},
                              {"d(y,x)", dist(j, i)}};
            }
        }
    }

    LawCheck m3{"M3* star-triangle"};
    auto check_triple = [&](std::size_t i, std::size_t j, std::size_t k) {
        ++m3.samples_tested;
        const double lhs = dist(i, j);
        const double rhs = apply(star, dist(i, k), dist(k, j));
        if (lhs > rhs + cfg.abs_tol && m3.pass) {
            m3.pass = false;
            m3.witness = {{"x", point_json(points[i])}, {"y", point_json(points[j])},
                          {"z", point_json(points[k])}, {"d(x,y)", lhs},
                          {"d(x,z)*d(z,y)", rhs},      {"margin", lhs - rhs}};
        }
    };

    const double total_triples = static_cast<double>(n) * static_cast<double>(n) *
                                 static_cast<double>(n);
    if (total_triples <= static_cast<double>(options.triple_budget)) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) check_triple(i, j, k);
    } else {
        report.sampling_seed = options.seed;
        Rng rng(options.seed);
        for (std::size_t t = 0; t < options.triple_budget; ++t)
            check_triple(rng.index(n), rng.index(n), rng.index(n));
    }

    report.checks = {std::move(m1), std::move(m2), std::move(m3)};
    return report;
}

}  // namespace starmetric

#endif  // STARMETRIC_SPACE_HPP
