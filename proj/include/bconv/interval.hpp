#pragma once

// Closed real intervals with outward rounding.
//
// Rounding direction is recovered from error-free transformations (TwoSum,
// fma residuals), so exactly representable results stay degenerate: 0.5/0.5
// is [1, 1], not [1 - ulp, 1 + ulp]. Transcendental functions are widened by
// one ulp on each side unless the input makes the result exact.

#include <cmath>
#include <iosfwd>
#include <limits>

namespace bconv {

class Interval {
public:
    constexpr Interval() = default;
    constexpr Interval(double value) : lo_(value), hi_(value) {}  // NOLINT(google-explicit-constructor)
    Interval(double lo, double hi);

    static Interval hull(double a, double b);
    static Interval entire();

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double mid() const;
    double width() const { return hi_ - lo_; }
    double mag() const { return std::fmax(std::fabs(lo_), std::fabs(hi_)); }

    bool is_point() const { return lo_ == hi_; }
    bool contains(double x) const { return lo_ <= x && x <= hi_; }
    bool contains(const Interval& other) const { return lo_ <= other.lo_ && other.hi_ <= hi_; }
    bool finite() const { return std::isfinite(lo_) && std::isfinite(hi_); }

    // Certified order relations against a scalar.
    bool certainly_gt(double x) const { return lo_ > x; }
    bool certainly_ge(double x) const { return lo_ >= x; }
    bool certainly_lt(double x) const { return hi_ < x; }
    bool certainly_le(double x) const { return hi_ <= x; }

    Interval& operator+=(const Interval& rhs);
    Interval& operator-=(const Interval& rhs);
    Interval& operator*=(const Interval& rhs);
    Interval& operator/=(const Interval& rhs);

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    double lo_ = 0.0;
    double hi_ = 0.0;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);

Interval sqrt(const Interval& x);
Interval exp(const Interval& x);
Interval log(const Interval& x);
Interval square(const Interval& x);
Interval pow(const Interval& base, long exponent);
Interval pow(const Interval& base, const Interval& exponent);
Interval ldexp(const Interval& x, int e);
Interval max(const Interval& a, const Interval& b);
Interval min(const Interval& a, const Interval& b);
// [max(lo, 0), max(hi, 0)]
Interval clamp_nonnegative(const Interval& x);

std::ostream& operator<<(std::ostream& os, const Interval& x);

}  // namespace bconv
