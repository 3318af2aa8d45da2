#ifndef STARMETRIC_ERRORS_HPP
#define STARMETRIC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace starmetric {

/// Input outside the mathematical domain of an operation (negative or
/// non-finite reals, points outside a space's domain constraint).
class domain_error : public std::invalid_argument {
public:
    explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

/// API misuse: empty sample lists, mixed t-definers in a product,
/// querying a witness for a point outside its ball, and similar.
class usage_error : public std::invalid_argument {
public:
    explicit usage_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A numeric routine failed to converge. Carries the last bracketing
/// interval so the caller can diagnose or retry with a larger budget.
class numeric_error : public std::runtime_error {
public:
    numeric_error(const std::string& what, double bracket_lo, double bracket_hi)
        : std::runtime_error(what), bracket_lo_(bracket_lo), bracket_hi_(bracket_hi) {}

    double bracket_lo() const noexcept { return bracket_lo_; }
    double bracket_hi() const noexcept { return bracket_hi_; }

private:
    double bracket_lo_;
    double bracket_hi_;
};

}  // namespace starmetric

#endif  // STARMETRIC_ERRORS_HPP
