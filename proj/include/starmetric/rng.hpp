#ifndef STARMETRIC_RNG_HPP
#define STARMETRIC_RNG_HPP

#include <cstdint>
#include <cstddef>
#include <random>

namespace starmetric {

/// Seeded generator with explicit output mapping. std::mt19937_64 output is
/// specified by the standard, but std::uniform_*_distribution is not, so the
/// mappings below are done by hand to keep --seed runs reproducible across
/// standard libraries. Statistical perfection does not matter here,
/// reproducibility does.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform index in [0, n). Modulo bias is negligible for n << 2^64.
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

private:
    std::mt19937_64 gen_;
};

}  // namespace starmetric

#endif  // STARMETRIC_RNG_HPP
