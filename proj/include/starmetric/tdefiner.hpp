#ifndef STARMETRIC_TDEFINER_HPP
#define STARMETRIC_TDEFINER_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "starmetric/errors.hpp"
#include "starmetric/law_report.hpp"
#include "starmetric/rng.hpp"

namespace starmetric {

/// Tolerances shared by the numeric routines. Comparisons of distances and
/// operator values use absolute tolerance: the interesting values live near
/// zero, where relative error degenerates.
struct ToleranceConfig {
    double abs_tol = 1e-9;
    double numeric_residuum_tol = 1e-10;
    int max_bisection_iters = 200;
};

/// A t-definer: a commutative, associative, monotone, continuous binary
/// operator on [0, inf) with identity 0. It generalizes the "+" in the
/// triangle inequality. `residuum_closed_form` is optional; when absent every
/// residuum evaluation falls back to bisection, which costs one monotone
/// root-find per call (see residuum_numeric).
struct TDefiner {
    std::string name;
    std::function<double(double, double)> op;
    std::function<double(double, double)> residuum_closed_form;  // may be empty
    std::string description;

    bool has_closed_residuum() const { return static_cast<bool>(residuum_closed_form); }
};

namespace detail {

inline void require_non_negative_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw domain_error(std::string(what) + " must be finite");
    if (x < 0.0) throw domain_error(std::string(what) + " must be non-negative");
}

}  // namespace detail

/// Evaluate a (*) b. Inputs must be finite and non-negative.
inline double apply(const TDefiner& star, double a, double b) {
    detail::require_non_negative_finite(a, "a");
    detail::require_non_negative_finite(b, "b");
    return star.op(a, b);
}

/// Smallest c with c (*) a >= b, found by bisection on [0, b]. The bracket is
/// always valid: b (*) a >= b (*) 0 = b, and the map c -> c (*) a is
/// nondecreasing. Returns the left endpoint of the final bracket, so the
/// result under-approximates the true minimum by at most
/// cfg.numeric_residuum_tol; callers that need a sound lower bound (pruning,
/// interior witnesses) rely on exactly that one-sidedness.
inline double residuum_numeric(const TDefiner& star, double a, double b,
                               const ToleranceConfig& cfg = {}) {
    detail::require_non_negative_finite(a, "a");
    detail::require_non_negative_finite(b, "b");
    if (star.op(0.0, a) >= b) return 0.0;
    double lo = 0.0;
    double hi = b;
    for (int iter = 0; iter < cfg.max_bisection_iters; ++iter) {
        if (hi - lo <= cfg.numeric_residuum_tol) return lo;
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) return lo;  // bracket at floating-point resolution
        if (star.op(mid, a) >= b) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if (hi - lo <= cfg.numeric_residuum_tol) return lo;
    throw numeric_error("residuum bisection did not converge within " +
                            std::to_string(cfg.max_bisection_iters) + " iterations",
                        lo, hi);
}

/// The residuum a -o b = min{c : c (*) a >= b}, the subtraction-like adjoint
/// of the operator. Uses the registered closed form when present, otherwise
/// bisection.
inline double residuum(const TDefiner& star, double a, double b,
                       const ToleranceConfig& cfg = {}) {
    if (star.has_closed_residuum()) {
        detail::require_non_negative_finite(a, "a");
        detail::require_non_negative_finite(b, "b");
        return star.residuum_closed_form(a, b);
    }
    return residuum_numeric(star, a, b, cfg);
}

// ---------------------------------------------------------------------------
// Built-in t-definers. The names form a stable string namespace used by the
// CLI configuration: "lukasiewicz", "max", "s", "p".
// ---------------------------------------------------------------------------

inline const TDefiner& lukasiewicz_tdefiner() {
    static const TDefiner star{
        "lukasiewicz",
        [](double a, double b) { return a + b; },
        [](double a, double b) { return a >= b ? 0.0 : b - a; },
        "a + b; its metrics are ordinary metrics",
    };
    return star;
}

inline const TDefiner& max_tdefiner() {
    static const TDefiner star{
        "max",
        [](double a, double b) { return std::max(a, b); },
        [](double a, double b) { return a >= b ? 0.0 : b; },
        "max(a, b); the weakest t-definer, its metrics are ultrametrics",
    };
    return star;
}

inline const TDefiner& s_tdefiner() {
    static const TDefiner star{
        "s",
        [](double a, double b) { return std::sqrt(a * a + b * b); },
        // sqrt(b^2 - a^2), written as a product to avoid cancellation
        [](double a, double b) { return a >= b ? 0.0 : std::sqrt((b - a) * (b + a)); },
        "sqrt(a^2 + b^2)",
    };
    return star;
}

inline const TDefiner& p_tdefiner() {
    static const TDefiner star{
        "p",
        [](double a, double b) {
            const double r = std::sqrt(a) + std::sqrt(b);
            return r * r;
        },
        [](double a, double b) {
            if (a >= b) return 0.0;
            const double r = std::sqrt(b) - std::sqrt(a);
            return r * r;
        },
        "(sqrt(a) + sqrt(b))^2; stronger than addition",
    };
    return star;
}

inline const std::vector<TDefiner>& builtin_tdefiners() {
    static const std::vector<TDefiner> all{
        lukasiewicz_tdefiner(), max_tdefiner(), s_tdefiner(), p_tdefiner()};
    return all;
}

inline const TDefiner& find_tdefiner(std::string_view name) {
    for (const auto& star : builtin_tdefiners())
        if (star.name == name) return star;
    throw usage_error("unknown t-definer \"" + std::string(name) +
                      "\" (built-ins: lukasiewicz, max, s, p)");
}

// ---------------------------------------------------------------------------
// Pointwise order between t-definers.
// ---------------------------------------------------------------------------

enum class Ordering {
    weaker_or_equal,    // star1 <= star2 on every sample
    stronger_or_equal,  // star1 >= star2 on every sample
    equal,
    incomparable_on_samples,
};

inline const char* to_string(Ordering o) {
    switch (o) {
        case Ordering::weaker_or_equal: return "weaker-or-equal";
        case Ordering::stronger_or_equal: return "stronger-or-equal";
        case Ordering::equal: return "equal";
        case Ordering::incomparable_on_samples: return "incomparable-on-samples";
    }
    return "?";
}

struct OrderViolation {
    double a = 0.0, b = 0.0;  // sample pair
    double lhs = 0.0, rhs = 0.0;
};

struct ComparisonResult {
    Ordering verdict = Ordering::equal;
    // First counterexample for each violated direction.
    std::optional<OrderViolation> le_violation;  // breaks star1 <= star2
    std::optional<OrderViolation> ge_violation;  // breaks star1 >= star2
};

/// Sample-based pointwise comparison. The verdict speaks only about the given
/// samples; no t-definer is a global maximum of this order, so no maximality
/// claim is ever produced.
inline ComparisonResult compare(const TDefiner& star1, const TDefiner& star2,
                                const std::vector<std::pair<double, double>>& samples,
                                const ToleranceConfig& cfg = {}) {
    if (samples.empty()) throw usage_error("compare requires a non-empty sample list");
    ComparisonResult result;
    for (const auto& [a, b] : samples) {
        const double v1 = apply(star1, a, b);
        const double v2 = apply(star2, a, b);
        if (v1 > v2 + cfg.abs_tol && !result.le_violation)
            result.le_violation = OrderViolation{a, b, v1, v2};
        if (v2 > v1 + cfg.abs_tol && !result.ge_violation)
            result.ge_violation = OrderViolation{a, b, v1, v2};
    }
    const bool le = !result.le_violation;
    const bool ge = !result.ge_violation;
    result.verdict = le && ge  ? Ordering::equal
                     : le      ? Ordering::weaker_or_equal
                     : ge      ? Ordering::stronger_or_equal
                               : Ordering::incomparable_on_samples;
    return result;
}

// ---------------------------------------------------------------------------
// Sample generators shared by the axiom checkers, the CLI, and the tests.
// ---------------------------------------------------------------------------

inline std::vector<std::array<double, 3>> sample_triples(std::uint64_t seed,
                                                         std::size_t count, double lo,
                                                         double hi) {
    Rng rng(seed);
    std::vector<std::array<double, 3>> triples;
    triples.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        triples.push_back({rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)});
    return triples;
}

inline std::vector<std::array<double, 3>> grid_triples(double lo, double hi,
                                                       std::size_t steps_per_axis) {
    std::vector<std::array<double, 3>> triples;
    triples.reserve(steps_per_axis * steps_per_axis * steps_per_axis);
    const double span = hi - lo;
    auto tick = [&](std::size_t i) {
        return steps_per_axis == 1 ? lo
                                   : lo + span * static_cast<double>(i) /
                                              static_cast<double>(steps_per_axis - 1);
    };
    for (std::size_t i = 0; i < steps_per_axis; ++i)
        for (std::size_t j = 0; j < steps_per_axis; ++j)
            for (std::size_t k = 0; k < steps_per_axis; ++k)
                triples.push_back({tick(i), tick(j), tick(k)});
    return triples;
}

inline std::vector<std::pair<double, double>> grid_pairs(double lo, double hi,
                                                         std::size_t steps_per_axis) {
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(steps_per_axis * steps_per_axis);
    const double span = hi - lo;
    auto tick = [&](std::size_t i) {
        return steps_per_axis == 1 ? lo
                                   : lo + span * static_cast<double>(i) /
                                              static_cast<double>(steps_per_axis - 1);
    };
    for (std::size_t i = 0; i < steps_per_axis; ++i)
        for (std::size_t j = 0; j < steps_per_axis; ++j)
            pairs.emplace_back(tick(i), tick(j));
    return pairs;
}

// ---------------------------------------------------------------------------
// Axiom suite.
// ---------------------------------------------------------------------------

namespace detail {

// Continuity cannot be certified by finite sampling. The checker walks a
// decreasing delta ladder and requires the increment gap to keep shrinking;
// a jump discontinuity keeps the gap constant and fails the decay test.
inline constexpr std::array<double, 3> kContinuityLadder = {1e-2, 1e-4, 1e-6};
inline constexpr double kContinuityDecay = 0.5;   // required shrink factor per rung
inline constexpr double kContinuitySlackFactor = 10.0;  // of abs_tol, per rung

}  // namespace detail

/// Check T1-T4 exactly (within abs_tol) and T5 approximately on the given
/// triples. The T5 row reports "consistent with continuity" at best; exact
/// continuity is untestable from samples.
inline LawReport check_tdefiner_axioms(const TDefiner& star,
                                       const std::vector<std::array<double, 3>>& samples,
                                       const ToleranceConfig& cfg = {}) {
    if (samples.empty())
        throw usage_error("check_tdefiner_axioms requires a non-empty sample list");

    LawReport report;
    report.suite = "tdefiner-axioms(" + star.name + ")";
    report.abs_tol = cfg.abs_tol;
    report.numeric_residuum_tol = cfg.numeric_residuum_tol;

    LawCheck t1{"T1 commutativity"};
    LawCheck t2{"T2 associativity"};
    LawCheck t3{"T3 monotonicity"};
    LawCheck t4{"T4 identity"};
    LawCheck t5{"T5 continuity"};
    t5.note = "sampled delta ladder; passing means consistent with continuity";

    auto fail = [](LawCheck& check, nlohmann::json witness) {
        if (check.pass) {
            check.pass = false;
            check.witness = std::move(witness);
        }
    };

    for (const auto& [a, b, c] : samples) {
        ++t1.samples_tested;
        const double ab = apply(star, a, b);
        const double ba = apply(star, b, a);
        if (std::abs(ab - ba) > cfg.abs_tol)
            fail(t1, {{"a", a}, {"b", b}, {"a*b", ab}, {"b*a", ba}});

        ++t2.samples_tested;
        const double left = apply(star, a, apply(star, b, c));
        const double right = apply(star, apply(star, a, b), c);
        if (std::abs(left - right) > cfg.abs_tol)
            fail(t2, {{"a", a}, {"b", b}, {"c", c}, {"a*(b*c)", left}, {"(a*b)*c", right}});

        ++t3.samples_tested;
        const double x = std::min(a, b);
        const double y = std::max(a, b);
        const double xc = apply(star, x, c);
        const double yc = apply(star, y, c);
        if (xc > yc + cfg.abs_tol)
            fail(t3, {{"x", x}, {"y", y}, {"c", c}, {"x*c", xc}, {"y*c", yc}});

        ++t4.samples_tested;
        const double a0 = apply(star, a, 0.0);
        if (std::abs(a0 - a) > cfg.abs_tol) fail(t4, {{"a", a}, {"a*0", a0}});

        ++t5.samples_tested;
        double previous_gap = std::numeric_limits<double>::infinity();
        for (const double delta : detail::kContinuityLadder) {
            const double gap = std::abs(apply(star, a + delta, b) - apply(star, a, b));
            const bool first_rung = !std::isfinite(previous_gap);
            if (!first_rung &&
                gap > detail::kContinuityDecay * previous_gap +
                          detail::kContinuitySlackFactor * cfg.abs_tol) {
                fail(t5, {{"a", a},
                          {"b", b},
                          {"delta", delta},
                          {"gap", gap},
                          {"previous_gap", previous_gap}});
                break;
            }
            previous_gap = gap;
        }
    }

    report.checks = {std::move(t1), std::move(t2), std::move(t3), std::move(t4),
                     std::move(t5)};
    return report;
}

}  // namespace starmetric

#endif  // STARMETRIC_TDEFINER_HPP
