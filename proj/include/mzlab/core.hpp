#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mzlab {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kE = std::numbers::e;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad parameters, wrong lengths, non-finite data.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Evaluation point outside a model's domain.
class DomainError : public Error {
public:
    using Error::Error;
};

class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed to converge or bracket.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Closed interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    [[nodiscard]] double length() const { return hi - lo; }
    [[nodiscard]] bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Integration domain of a function family: one period, or a compact interval.
struct Domain {
    Interval span{0.0, kTwoPi};
    bool periodic = true;

    [[nodiscard]] double measure() const { return span.length(); }
    friend bool operator==(const Domain&, const Domain&) = default;

    static Domain torus() { return {{0.0, kTwoPi}, true}; }
    static Domain unit_period() { return {{0.0, 1.0}, true}; }
    static Domain interval(double lo, double hi) { return {{lo, hi}, false}; }
};

inline void require(bool condition, const std::string& message)
{
    if (!condition)
        throw ValidationError(message);
}

/// Relative error with an absolute floor of one.
inline double rel_diff(double a, double b)
{
    return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

} // namespace mzlab
