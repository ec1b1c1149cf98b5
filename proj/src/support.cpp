#include "bconv/support.hpp"

#include <algorithm>
#include <climits>
#include <cmath>

#include "bconv/errors.hpp"

namespace bconv {

const char* const kAsPrintedWarning =
    "as-printed dimension formula (no logarithm on delta+1) disagrees with box counting; "
    "the log-corrected variant is the default";

SupportApprox cylinders(const ConvolutionSpec& spec, int n, int max_level)
{
    if (n < 0) {
        throw DomainError("cylinders: level must be >= 0");
    }
    if (n > max_level) {
        throw LevelTooLargeError("cylinders: level " + std::to_string(n) + " exceeds " + std::to_string(max_level));
    }
    std::vector<Interval> sums{Interval(0.0)};
    for (long k = 1; k <= n; ++k) {
        const bool zero_ok = spec.digits.p0(k) > 0.0;
        const bool one_ok = spec.digits.p1(k) > 0.0;
        const Interval a = spec.scales.term(k);
        std::vector<Interval> next;
        next.reserve(sums.size() * ((zero_ok ? 1 : 0) + (one_ok ? 1 : 0)));
        if (zero_ok) {
            next.insert(next.end(), sums.begin(), sums.end());
        }
        if (one_ok) {
            for (const auto& s : sums) {
                next.push_back(s + a);
            }
        }
        sums.swap(next);
    }
    const Interval r = spec.scales.tail_sum(n);

    SupportApprox out;
    out.level = n;
    out.cylinder_count = sums.size();
    out.cylinder_length = r;
    std::sort(sums.begin(), sums.end(), [](const Interval& x, const Interval& y) { return x.lo() < y.lo(); });

    // outer segment [s.lo, s.hi + r.hi]; inner [s.hi, s.lo + r.lo] may be empty
    double inner_total = 0.0;
    double outer_total = 0.0;
    double inner_lo = 0.0;
    double inner_hi = 0.0;
    auto flush = [&](const Segment& seg) {
        out.intervals.push_back(seg);
        outer_total += seg.length();
        inner_total += std::max(0.0, inner_hi - inner_lo);
    };
    Segment cur{};
    bool open = false;
    for (const auto& s : sums) {
        const Segment seg{s.lo(), (s + Interval(r.hi())).hi()};
        const double ilo = s.hi();
        const double ihi = (Interval(s.lo()) + Interval(r.lo())).lo();
        if (open && seg.lo <= cur.hi) {
            cur.hi = std::max(cur.hi, seg.hi);
            inner_hi = std::max(inner_hi, ihi);
        } else {
            if (open) {
                flush(cur);
            }
            cur = seg;
            inner_lo = ilo;
            inner_hi = ihi;
            open = true;
        }
    }
    if (open) {
        flush(cur);
    }
    out.total_length = Interval(std::min(inner_total, outer_total), outer_total);
    out.gap_count = out.intervals.empty() ? 0 : out.intervals.size() - 1;
    return out;
}

NowhereDenseVerdict nowhere_dense_verdict(const ConvolutionSpec& spec)
{
    const Certainty mono = spec.scales.nonincreasing();
    if (mono == Certainty::No) {
        throw HypothesisViolationError("nowhere density criterion needs nonincreasing scales a_k");
    }
    const Certainty positive = spec.digits.all_positive();
    if (positive == Certainty::No) {
        throw HypothesisViolationError("nowhere density criterion needs p_0k > 0 and p_1k > 0 for every k");
    }
    NowhereDenseVerdict v;
    if (mono == Certainty::Unknown) {
        v.reason = "monotonicity of the scales cannot be certified";
        return v;
    }
    if (positive == Certainty::Unknown) {
        v.reason = "positivity of the digit probabilities cannot be certified";
        return v;
    }
    switch (spec.scales.delta_gt_one_infinitely_often()) {
        case Certainty::Yes:
            v.outcome = NowhereDenseVerdict::Outcome::NowhereDense;
            v.reason = "delta_k > 1 for infinitely many k";
            break;
        case Certainty::No:
            v.outcome = NowhereDenseVerdict::Outcome::ContainsInterval;
            v.reason = "delta_k <= 1 for all large k";
            break;
        case Certainty::Unknown:
            v.reason = "cannot decide whether delta_k > 1 infinitely often";
            break;
    }
    return v;
}

SupportMeasure support_measure(const ConvolutionSpec& spec, const SeriesOptions& options)
{
    const Certainty gaps = spec.scales.all_delta_gt_one();
    if (gaps == Certainty::No) {
        throw HypothesisViolationError("support measure criterion needs delta_k > 1 for all k");
    }
    SupportMeasure m;
    if (gaps == Certainty::Unknown) {
        m.reason = "delta_k > 1 cannot be certified for all k";
        return m;
    }
    const TermSeries excess = spec.scales.delta_excess_series();
    m.criterion = series_verdict(excess, options);
    switch (m.criterion.outcome) {
        case SeriesVerdict::Outcome::Diverges:
            m.outcome = SupportMeasure::Outcome::Zero;
            m.value = 0.0;
            m.reason = "sum (delta_k - 1) diverges";
            return m;
        case SeriesVerdict::Outcome::Unknown:
            m.reason = "sum (delta_k - 1) not certified: " + m.criterion.rule;
            return m;
        case SeriesVerdict::Outcome::Converges:
            break;
    }
    // 2^n r_n decreases to the limit; 2^n r_n exp(-T_n / 2) bounds it below.
    long n = 64;
    std::optional<Interval> tail = series_tail(excess, n);
    while (n < 512 && tail && tail->hi() > 1e-17) {
        n *= 2;
        tail = series_tail(excess, n);
    }
    const Interval scaled = ldexp(spec.scales.tail_sum(n), static_cast<int>(n));
    const double upper = scaled.hi();
    const double lower = (Interval(scaled.lo()) * exp(-ldexp(Interval(tail->hi()), -1))).lo();
    m.outcome = SupportMeasure::Outcome::Positive;
    m.value = Interval(std::min(lower, upper), upper);
    m.terms_used = n;
    m.reason = "sum (delta_k - 1) converges";
    return m;
}

std::vector<double> dimension_sequence(const ConvolutionSpec& spec, DimensionVariant variant, long horizon)
{
    std::vector<double> seq;
    seq.reserve(static_cast<std::size_t>(std::max(0L, horizon)));
    long double sum = 0.0L;
    const long double ln2 = std::log(2.0L);
    for (long k = 1; k <= horizon; ++k) {
        const Interval dk = spec.scales.delta(k);
        const double d = dk.finite() ? dk.mid() : dk.lo();
        sum += variant == DimensionVariant::AsPrinted ? static_cast<long double>(d) + 1.0L
                                                       : std::log1p(static_cast<long double>(d));
        seq.push_back(static_cast<double>(static_cast<long double>(k) * ln2 / sum));
    }
    return seq;
}

DimensionEstimate dimension_estimate(const ConvolutionSpec& spec, DimensionVariant variant, long horizon)
{
    if (horizon < 1) {
        throw DomainError("dimension_estimate: horizon must be >= 1");
    }
    DimensionEstimate e;
    e.variant = variant;
    if (variant == DimensionVariant::AsPrinted) {
        e.warnings.emplace_back(kAsPrintedWarning);
    }
    const Certainty gaps = spec.scales.all_delta_gt_one();
    if (gaps == Certainty::No) {
        throw HypothesisViolationError("dimension formula needs delta_k > 1 for all k");
    }
    const auto asym = spec.scales.delta_asymptotics();
    if (gaps == Certainty::Unknown) {
        const long known = spec.scales.known_terms();
        if (asym.known || known == LONG_MAX) {
            throw HypothesisViolationError("delta_k > 1 cannot be certified for all k");
        }
        // explicit prefix with an undetermined tail: use the certified prefix only
        for (long k = 1; k <= known; ++k) {
            if (!spec.scales.delta(k).certainly_gt(1.0)) {
                throw HypothesisViolationError("delta_" + std::to_string(k) + " > 1 cannot be certified");
            }
        }
        if (horizon > known) {
            horizon = known;
            e.warnings.emplace_back("horizon clipped to the " + std::to_string(known) +
                                    " explicitly known scales; the tail is undetermined");
        }
    }
    const auto seq = dimension_sequence(spec, variant, horizon);
    const auto first = seq.begin() + (horizon / 2 > 0 ? horizon / 2 - 1 : 0);
    const auto [lo, hi] = std::minmax_element(first, seq.end());
    e.liminf_value = *lo;
    e.limsup_value = *hi;
    e.terms_used = horizon;
    if (asym.known && asym.limit.finite()) {
        const double L = asym.limit.mid();
        e.limit = variant == DimensionVariant::AsPrinted ? std::log(2.0) / (L + 1.0) : std::log(2.0) / std::log1p(L);
    }
    return e;
}

UniquenessVerdict unique_representation(const ConvolutionSpec& spec)
{
    UniquenessVerdict v;
    if (spec.scales.all_delta_gt_one() == Certainty::Yes) {
        v.outcome = UniquenessVerdict::Outcome::Unique;
        v.reason = "delta_k > 1 for all k";
    } else if (spec.scales.delta_lt_one_eventually() == Certainty::Yes) {
        v.outcome = UniquenessVerdict::Outcome::NotUnique;
        v.reason = "delta_k < 1 for all large k (overlapping cylinders)";
    } else {
        v.reason = "neither delta_k > 1 for all k nor delta_k < 1 eventually is certified";
    }
    return v;
}

const char* to_string(NowhereDenseVerdict::Outcome outcome)
{
    switch (outcome) {
        case NowhereDenseVerdict::Outcome::NowhereDense:
            return "NowhereDense";
        case NowhereDenseVerdict::Outcome::ContainsInterval:
            return "ContainsInterval";
        case NowhereDenseVerdict::Outcome::Indeterminate:
            return "Indeterminate";
    }
    return "Indeterminate";
}

const char* to_string(SupportMeasure::Outcome outcome)
{
    switch (outcome) {
        case SupportMeasure::Outcome::Zero:
            return "Zero";
        case SupportMeasure::Outcome::Positive:
            return "Positive";
        case SupportMeasure::Outcome::Indeterminate:
            return "Indeterminate";
    }
    return "Indeterminate";
}

const char* to_string(DimensionVariant variant)
{
    return variant == DimensionVariant::AsPrinted ? "as-printed" : "log-corrected";
}

const char* to_string(UniquenessVerdict::Outcome outcome)
{
    switch (outcome) {
        case UniquenessVerdict::Outcome::Unique:
            return "Unique";
        case UniquenessVerdict::Outcome::NotUnique:
            return "NotUnique";
        case UniquenessVerdict::Outcome::Indeterminate:
            return "Indeterminate";
    }
    return "Indeterminate";
}

}  // namespace bconv
