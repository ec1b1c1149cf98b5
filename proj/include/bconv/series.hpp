#pragma once

// Certified convergence engine for nonnegative series and infinite products.
//
// A series is described symbolically: an exact term evaluator plus an
// asymptotic description of the terms from some index on. Only the tail
// description decides Converges/Diverges; numeric partial sums are evidence.

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bconv/interval.hpp"

namespace bconv {

// Decaying reference family g(k) > 0, k >= 1.
struct Decay {
    enum class Kind { None, Power, Geometric };

    Kind kind = Kind::None;
    // Exponent s > 0 for Power (g = k^-s), ratio q in (0,1) for Geometric (g = q^k).
    double rate = 0.0;

    static Decay none() { return {}; }
    static Decay power(double exponent) { return {Kind::Power, exponent}; }
    static Decay geometric(double ratio) { return {Kind::Geometric, ratio}; }

    bool is_none() const { return kind == Kind::None; }
    Interval at(long k) const;
    double value(long k) const;
    // Bounds on sum_{k > n} g(k); upper bound is +inf when not summable.
    Interval tail_sum(long n) const;
    bool summable() const;
    Decay squared() const;
    // True when g decays no faster than `other` (k^-s beats q^k, smaller s beats larger).
    bool dominates(const Decay& other) const;
    std::string describe() const;

    friend bool operator==(const Decay&, const Decay&) = default;
};

// lo * g(k) <= t_k - base <= hi * g(k) style bound component.
struct DecayBound {
    Decay g;
    double lo = 0.0;
    double hi = 0.0;
};

// Tail shapes recognised by the engine, valid for k >= TermSeries::start.
struct ComparisonTail {
    // t_k in [sum lo_i g_i(k), sum hi_i g_i(k)]; empty list means t_k == 0.
    std::vector<DecayBound> parts;
};
struct PositiveLimitTail {
    // liminf t_k >= limit > 0
    double limit = 0.0;
};
struct OpaqueTail {
    std::string reason;
};

using TailForm = std::variant<ComparisonTail, PositiveLimitTail, OpaqueTail>;

struct TermSeries {
    std::string name;
    std::function<Interval(long)> term;  // t_k, k >= 1, nonnegative
    long start = 1;
    TailForm tail = OpaqueTail{};

    Interval partial_sum(long n) const;  // sum_{k=1}^{n} t_k
};

TermSeries zero_series(std::string name);
// Term-wise sum of nonnegative series.
TermSeries sum_series(std::string name, const std::vector<TermSeries>& parts);
// t_k scaled into [lo, hi] * t_k; `term` is the exact replacement evaluator.
TermSeries rescaled_series(std::string name, const TermSeries& base, double lo, double hi,
                           std::function<Interval(long)> term);

struct SeriesOptions {
    long horizon = 10000;      // numeric evidence only
    long min_partial = 1000;   // partial-sum length used for certified bounds
};

struct SeriesVerdict {
    enum class Outcome { Converges, Diverges, Unknown };

    Outcome outcome = Outcome::Unknown;
    Interval sum_bound = 0.0;  // Converges only
    double partial_sum = 0.0;
    long terms_examined = 0;
    std::string rule;

    bool certified() const { return outcome != Outcome::Unknown; }
};

SeriesVerdict series_verdict(const TermSeries& terms, const SeriesOptions& options = {});

// Bounds on sum_{k > n} t_k when the series is certified convergent.
std::optional<Interval> series_tail(const TermSeries& terms, long n);
// Upper bound on sup_{k > n} t_k from the tail description.
std::optional<double> tail_supremum(const TermSeries& terms, long n);

struct ProductVerdict {
    enum class Outcome { PositiveLimit, ZeroLimit, Unknown };

    Outcome outcome = Outcome::Unknown;
    double lower_bound = 0.0;      // PositiveLimit: certified lower bound on the product
    double upper_bound = 1.0;      // partial product (upper bound, factors <= 1)
    double partial_product = 1.0;
    long factors_examined = 0;
    SeriesVerdict deficit;         // verdict on sum (1 - t_k)

    bool certified() const { return outcome != Outcome::Unknown; }
};

// Product of t_k = 1 - d_k where `deficits` describes d_k in [0, 1).
ProductVerdict product_verdict(const TermSeries& deficits, const SeriesOptions& options = {});

const char* to_string(SeriesVerdict::Outcome outcome);
const char* to_string(ProductVerdict::Outcome outcome);

}  // namespace bconv
