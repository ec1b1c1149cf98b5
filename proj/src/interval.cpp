#include "bconv/interval.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace bconv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double next_down(double x) { return std::nextafter(x, -kInf); }
double next_up(double x) { return std::nextafter(x, kInf); }

// Bracket of the exact value approximated by `value` given the sign of its
// rounding error (true = value + error).
std::pair<double, double> bracket(double value, double error)
{
    if (!std::isfinite(value)) {
        return {value, value};
    }
    if (error > 0.0) {
        return {value, next_up(value)};
    }
    if (error < 0.0) {
        return {next_down(value), value};
    }
    return {value, value};
}

std::pair<double, double> exact_sum(double a, double b)
{
    const double s = a + b;
    if (!std::isfinite(s)) {
        return {s, s};
    }
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return bracket(s, err);
}

std::pair<double, double> exact_product(double a, double b)
{
    const double p = a * b;
    if (!std::isfinite(p)) {
        return {p, p};
    }
    return bracket(p, std::fma(a, b, -p));
}

std::pair<double, double> exact_quotient(double a, double b)
{
    const double q = a / b;
    if (!std::isfinite(q)) {
        return {q, q};
    }
    const double r = std::fma(-q, b, a);
    // true quotient = q + r / b
    const double sign = (b > 0.0) ? r : -r;
    return bracket(q, sign);
}

}  // namespace

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi)
{
    if (!(lo <= hi)) {
        throw std::invalid_argument("Interval: lower bound exceeds upper bound");
    }
}

Interval Interval::hull(double a, double b) { return {std::fmin(a, b), std::fmax(a, b)}; }

Interval Interval::entire() { return {-kInf, kInf}; }

double Interval::mid() const
{
    if (lo_ == hi_) {
        return lo_;
    }
    if (!finite()) {
        return std::isfinite(lo_) ? lo_ : hi_;
    }
    return lo_ + 0.5 * (hi_ - lo_);
}

Interval& Interval::operator+=(const Interval& rhs) { return *this = *this + rhs; }
Interval& Interval::operator-=(const Interval& rhs) { return *this = *this - rhs; }
Interval& Interval::operator*=(const Interval& rhs) { return *this = *this * rhs; }
Interval& Interval::operator/=(const Interval& rhs) { return *this = *this / rhs; }

Interval operator+(const Interval& a, const Interval& b)
{
    return {exact_sum(a.lo(), b.lo()).first, exact_sum(a.hi(), b.hi()).second};
}

Interval operator-(const Interval& a) { return {-a.hi(), -a.lo()}; }

Interval operator-(const Interval& a, const Interval& b) { return a + (-b); }

Interval operator*(const Interval& a, const Interval& b)
{
    if ((a.is_point() && a.lo() == 0.0) || (b.is_point() && b.lo() == 0.0)) {
        return 0.0;
    }
    const double cands[4][2] = {{a.lo(), b.lo()}, {a.lo(), b.hi()}, {a.hi(), b.lo()}, {a.hi(), b.hi()}};
    double lo = kInf;
    double hi = -kInf;
    for (const auto& c : cands) {
        const auto [l, h] = exact_product(c[0], c[1]);
        lo = std::fmin(lo, l);
        hi = std::fmax(hi, h);
    }
    return {lo, hi};
}

Interval operator/(const Interval& a, const Interval& b)
{
    if (b.lo() <= 0.0 && b.hi() >= 0.0) {
        if (a.is_point() && a.lo() == 0.0 && !(b.is_point() && b.lo() == 0.0)) {
            return 0.0;
        }
        // Positive numerator over [0, hi]: the quotient is unbounded above only.
        if (b.lo() == 0.0 && b.hi() > 0.0 && a.lo() >= 0.0) {
            return {exact_quotient(a.lo(), b.hi()).first, kInf};
        }
        return Interval::entire();
    }
    const double cands[4][2] = {{a.lo(), b.lo()}, {a.lo(), b.hi()}, {a.hi(), b.lo()}, {a.hi(), b.hi()}};
    double lo = kInf;
    double hi = -kInf;
    for (const auto& c : cands) {
        const auto [l, h] = exact_quotient(c[0], c[1]);
        lo = std::fmin(lo, l);
        hi = std::fmax(hi, h);
    }
    return {lo, hi};
}

Interval sqrt(const Interval& x)
{
    auto root_down = [](double v) {
        if (v <= 0.0) {
            return 0.0;
        }
        const double s = std::sqrt(v);
        return bracket(s, std::fma(-s, s, v)).first;
    };
    auto root_up = [](double v) {
        if (v <= 0.0) {
            return 0.0;
        }
        if (!std::isfinite(v)) {
            return v;
        }
        const double s = std::sqrt(v);
        return bracket(s, std::fma(-s, s, v)).second;
    };
    return {root_down(x.lo()), root_up(x.hi())};
}

Interval exp(const Interval& x)
{
    const double lo = (x.lo() == 0.0) ? 1.0 : std::fmax(0.0, next_down(std::exp(x.lo())));
    const double hi = (x.hi() == 0.0) ? 1.0 : next_up(std::exp(x.hi()));
    return {lo, hi};
}

Interval log(const Interval& x)
{
    const double lo = (x.lo() == 1.0) ? 0.0 : (x.lo() <= 0.0 ? -kInf : next_down(std::log(x.lo())));
    const double hi = (x.hi() == 1.0) ? 0.0 : (x.hi() <= 0.0 ? -kInf : next_up(std::log(x.hi())));
    return {lo, hi};
}

Interval square(const Interval& x)
{
    if (x.lo() >= 0.0) {
        return {exact_product(x.lo(), x.lo()).first, exact_product(x.hi(), x.hi()).second};
    }
    if (x.hi() <= 0.0) {
        return {exact_product(x.hi(), x.hi()).first, exact_product(x.lo(), x.lo()).second};
    }
    const double m = x.mag();
    return {0.0, exact_product(m, m).second};
}

Interval pow(const Interval& base, long exponent)
{
    if (exponent < 0) {
        return Interval(1.0) / pow(base, -exponent);
    }
    Interval result = 1.0;
    Interval factor = base;
    while (exponent > 0) {
        if (exponent & 1) {
            result = result * factor;
        }
        exponent >>= 1;
        if (exponent > 0) {
            factor = factor * factor;
        }
    }
    return result;
}

Interval pow(const Interval& base, const Interval& exponent)
{
    if (exponent.is_point() && std::floor(exponent.lo()) == exponent.lo() && std::fabs(exponent.lo()) < 1e9) {
        return pow(base, static_cast<long>(exponent.lo()));
    }
    if (base.lo() <= 0.0) {
        throw std::domain_error("Interval pow: non-positive base with real exponent");
    }
    return exp(exponent * log(base));
}

Interval ldexp(const Interval& x, int e) { return {std::ldexp(x.lo(), e), std::ldexp(x.hi(), e)}; }

Interval max(const Interval& a, const Interval& b)
{
    return {std::fmax(a.lo(), b.lo()), std::fmax(a.hi(), b.hi())};
}

Interval min(const Interval& a, const Interval& b)
{
    return {std::fmin(a.lo(), b.lo()), std::fmin(a.hi(), b.hi())};
}

Interval clamp_nonnegative(const Interval& x) { return {std::fmax(x.lo(), 0.0), std::fmax(x.hi(), 0.0)}; }

std::ostream& operator<<(std::ostream& os, const Interval& x)
{
    return os << '[' << x.lo() << ", " << x.hi() << ']';
}

}  // namespace bconv
