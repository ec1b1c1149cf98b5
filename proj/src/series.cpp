#include "bconv/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bconv/errors.hpp"

namespace bconv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool active(const DecayBound& part) { return !part.g.is_none() && part.hi > 0.0; }

std::vector<DecayBound> active_parts(const ComparisonTail& tail)
{
    std::vector<DecayBound> out;
    for (const auto& p : tail.parts) {
        if (active(p)) {
            out.push_back(p);
        }
    }
    return out;
}

std::string comparison_rule(const std::vector<DecayBound>& parts)
{
    std::ostringstream os;
    os << "comparison:";
    for (const auto& p : parts) {
        os << ' ' << p.g.describe();
    }
    return os.str();
}

}  // namespace

Interval Decay::at(long k) const
{
    switch (kind) {
        case Kind::None:
            return 0.0;
        case Kind::Power:
            return pow(Interval(static_cast<double>(k)), Interval(-rate));
        case Kind::Geometric:
            return pow(Interval(rate), k);
    }
    return 0.0;
}

double Decay::value(long k) const
{
    switch (kind) {
        case Kind::None:
            return 0.0;
        case Kind::Power:
            return std::pow(static_cast<double>(k), -rate);
        case Kind::Geometric:
            return std::pow(rate, static_cast<double>(k));
    }
    return 0.0;
}

Interval Decay::tail_sum(long n) const
{
    switch (kind) {
        case Kind::None:
            return 0.0;
        case Kind::Power: {
            if (rate <= 1.0) {
                return {0.0, kInf};
            }
            const Interval sm1 = Interval(rate) - Interval(1.0);
            const Interval expo = Interval(1.0) - Interval(rate);
            if (n <= 0) {
                const Interval base = Interval(1.0) / sm1;
                return {base.lo(), (Interval(1.0) + base).hi()};
            }
            const Interval lower = pow(Interval(static_cast<double>(n + 1)), expo) / sm1;
            const Interval upper = pow(Interval(static_cast<double>(n)), expo) / sm1;
            return {lower.lo(), upper.hi()};
        }
        case Kind::Geometric: {
            const Interval q(rate);
            return pow(q, n + 1) / (Interval(1.0) - q);
        }
    }
    return 0.0;
}

bool Decay::summable() const
{
    switch (kind) {
        case Kind::None:
        case Kind::Geometric:
            return true;
        case Kind::Power:
            return rate > 1.0;
    }
    return false;
}

Decay Decay::squared() const
{
    switch (kind) {
        case Kind::None:
            return *this;
        case Kind::Power:
            return power(2.0 * rate);
        case Kind::Geometric:
            return geometric(rate * rate);
    }
    return *this;
}

bool Decay::dominates(const Decay& other) const
{
    if (other.kind == Kind::None) {
        return true;
    }
    if (kind == Kind::None) {
        return false;
    }
    if (kind != other.kind) {
        return kind == Kind::Power;
    }
    return kind == Kind::Power ? rate <= other.rate : rate >= other.rate;
}

std::string Decay::describe() const
{
    std::ostringstream os;
    switch (kind) {
        case Kind::None:
            os << "zero";
            break;
        case Kind::Power:
            os << "k^-" << rate;
            break;
        case Kind::Geometric:
            os << rate << "^k";
            break;
    }
    return os.str();
}

Interval TermSeries::partial_sum(long n) const
{
    Interval s = 0.0;
    for (long k = 1; k <= n; ++k) {
        s += term(k);
    }
    return s;
}

TermSeries zero_series(std::string name)
{
    TermSeries s;
    s.name = std::move(name);
    s.term = [](long) { return Interval(0.0); };
    s.start = 1;
    s.tail = ComparisonTail{};
    return s;
}

TermSeries sum_series(std::string name, const std::vector<TermSeries>& parts)
{
    TermSeries out;
    out.name = std::move(name);
    out.term = [parts](long k) {
        Interval s = 0.0;
        for (const auto& p : parts) {
            s += p.term(k);
        }
        return s;
    };
    out.start = 1;
    ComparisonTail combined;
    double positive_limit = 0.0;
    std::string opaque;
    for (const auto& p : parts) {
        out.start = std::max(out.start, p.start);
        if (const auto* c = std::get_if<ComparisonTail>(&p.tail)) {
            combined.parts.insert(combined.parts.end(), c->parts.begin(), c->parts.end());
        } else if (const auto* l = std::get_if<PositiveLimitTail>(&p.tail)) {
            positive_limit = std::max(positive_limit, l->limit);
        } else if (const auto* o = std::get_if<OpaqueTail>(&p.tail)) {
            opaque = o->reason.empty() ? p.name : o->reason;
        }
    }
    // A single non-vanishing component forces divergence of the sum.
    if (positive_limit > 0.0) {
        out.tail = PositiveLimitTail{positive_limit};
    } else if (!opaque.empty()) {
        out.tail = OpaqueTail{opaque};
    } else {
        out.tail = combined;
    }
    return out;
}

TermSeries rescaled_series(std::string name, const TermSeries& base, double lo, double hi,
                           std::function<Interval(long)> term)
{
    TermSeries out;
    out.name = std::move(name);
    out.term = std::move(term);
    out.start = base.start;
    if (const auto* c = std::get_if<ComparisonTail>(&base.tail)) {
        ComparisonTail scaled;
        for (auto p : c->parts) {
            p.lo = (Interval(p.lo) * Interval(lo)).lo();
            p.hi = (Interval(p.hi) * Interval(hi)).hi();
            scaled.parts.push_back(p);
        }
        out.tail = scaled;
    } else if (const auto* l = std::get_if<PositiveLimitTail>(&base.tail)) {
        out.tail = PositiveLimitTail{(Interval(l->limit) * Interval(lo)).lo()};
    } else {
        out.tail = base.tail;
    }
    return out;
}

SeriesVerdict series_verdict(const TermSeries& terms, const SeriesOptions& options)
{
    SeriesVerdict v;
    if (const auto* c = std::get_if<ComparisonTail>(&terms.tail)) {
        const auto parts = active_parts(*c);
        if (parts.empty()) {
            const long n = std::max(0L, terms.start - 1);
            const Interval s = terms.partial_sum(n);
            v.outcome = SeriesVerdict::Outcome::Converges;
            v.sum_bound = clamp_nonnegative(s);
            v.partial_sum = s.mid();
            v.terms_examined = n;
            v.rule = "finitely supported";
            return v;
        }
        const bool all_summable =
            std::all_of(parts.begin(), parts.end(), [](const DecayBound& p) { return p.g.summable(); });
        if (all_summable) {
            const long n = std::max(terms.start - 1, options.min_partial);
            const Interval head = terms.partial_sum(n);
            const Interval tail = *series_tail(terms, n);
            v.outcome = SeriesVerdict::Outcome::Converges;
            v.sum_bound = clamp_nonnegative(head + tail);
            v.partial_sum = head.mid();
            v.terms_examined = n;
            v.rule = comparison_rule(parts);
            return v;
        }
        const bool forced_divergence = std::any_of(parts.begin(), parts.end(), [](const DecayBound& p) {
            return !p.g.summable() && p.lo > 0.0;
        });
        const long n = std::max(terms.start - 1, std::min(options.horizon, options.min_partial));
        v.partial_sum = terms.partial_sum(n).mid();
        v.terms_examined = n;
        if (forced_divergence) {
            v.outcome = SeriesVerdict::Outcome::Diverges;
            v.rule = comparison_rule(parts) + " (lower bound not summable)";
        } else {
            v.outcome = SeriesVerdict::Outcome::Unknown;
            v.rule = "upper comparison not summable and no lower bound";
        }
        return v;
    }
    if (const auto* l = std::get_if<PositiveLimitTail>(&terms.tail)) {
        const long n = std::max(terms.start - 1, std::min(options.horizon, options.min_partial));
        v.outcome = SeriesVerdict::Outcome::Diverges;
        v.partial_sum = terms.partial_sum(n).mid();
        v.terms_examined = n;
        std::ostringstream os;
        os << "terms do not tend to zero (liminf >= " << l->limit << ")";
        v.rule = os.str();
        return v;
    }
    const auto& o = std::get<OpaqueTail>(terms.tail);
    v.outcome = SeriesVerdict::Outcome::Unknown;
    v.partial_sum = terms.partial_sum(options.horizon).mid();
    v.terms_examined = options.horizon;
    v.rule = o.reason.empty() ? "no analytic rule applies" : o.reason;
    return v;
}

std::optional<Interval> series_tail(const TermSeries& terms, long n)
{
    const auto* c = std::get_if<ComparisonTail>(&terms.tail);
    if (c == nullptr) {
        return std::nullopt;
    }
    Interval head = 0.0;
    const long from = std::max(n, terms.start - 1);
    for (long k = n + 1; k <= from; ++k) {
        head += terms.term(k);
    }
    Interval tail = 0.0;
    for (const auto& p : active_parts(*c)) {
        if (!p.g.summable()) {
            return std::nullopt;
        }
        const Interval g = p.g.tail_sum(from);
        tail += Interval((Interval(std::max(p.lo, 0.0)) * Interval(g.lo())).lo(),
                         (Interval(p.hi) * Interval(g.hi())).hi());
    }
    return clamp_nonnegative(head + tail);
}

std::optional<double> tail_supremum(const TermSeries& terms, long n)
{
    const auto* c = std::get_if<ComparisonTail>(&terms.tail);
    if (c == nullptr) {
        return std::nullopt;
    }
    double sup = 0.0;
    const long from = std::max(n, terms.start - 1);
    for (long k = n + 1; k <= from; ++k) {
        sup = std::max(sup, terms.term(k).hi());
    }
    Interval bound = 0.0;
    for (const auto& p : active_parts(*c)) {
        // Every reference family is nonincreasing in k.
        bound += Interval(p.hi) * p.g.at(from + 1);
    }
    return std::max(sup, bound.hi());
}

ProductVerdict product_verdict(const TermSeries& deficits, const SeriesOptions& options)
{
    ProductVerdict v;
    v.deficit = series_verdict(deficits, options);

    auto factor = [&](long k) {
        const Interval d = deficits.term(k);
        if (d.lo() >= 1.0 || d.hi() < 0.0 || !d.finite()) {
            std::ostringstream os;
            os << deficits.name << ": factor at k=" << k << " outside (0,1]";
            throw FactorOutOfRangeError(os.str());
        }
        return clamp_nonnegative(Interval(1.0) - clamp_nonnegative(d));
    };
    auto partial = [&](long n) {
        Interval p = 1.0;
        for (long k = 1; k <= n; ++k) {
            p *= factor(k);
        }
        return p;
    };

    switch (v.deficit.outcome) {
        case SeriesVerdict::Outcome::Converges: {
            long n = std::max(deficits.start - 1, options.min_partial);
            double sup = tail_supremum(deficits, n).value_or(kInf);
            while (sup > 0.5 && n < 1'000'000) {
                n *= 2;
                sup = tail_supremum(deficits, n).value_or(kInf);
            }
            const Interval head = partial(n);
            v.partial_product = head.mid();
            v.upper_bound = std::min(1.0, head.hi());
            v.factors_examined = n;
            if (!(sup < 1.0)) {
                v.outcome = ProductVerdict::Outcome::Unknown;
                return v;
            }
            const auto tail = series_tail(deficits, n);
            // -log(1 - x) <= x / (1 - sup) for 0 <= x <= sup < 1
            const Interval exponent = -(Interval(tail->hi()) / (Interval(1.0) - Interval(sup)));
            v.lower_bound = (Interval(head.lo()) * exp(Interval(exponent.lo()))).lo();
            v.outcome = v.lower_bound > 0.0 ? ProductVerdict::Outcome::PositiveLimit
                                            : ProductVerdict::Outcome::Unknown;
            return v;
        }
        case SeriesVerdict::Outcome::Diverges: {
            const long n = std::max(v.deficit.terms_examined, 1L);
            const Interval head = partial(n);
            v.outcome = ProductVerdict::Outcome::ZeroLimit;
            v.partial_product = head.mid();
            v.upper_bound = head.hi();
            v.lower_bound = 0.0;
            v.factors_examined = n;
            return v;
        }
        case SeriesVerdict::Outcome::Unknown: {
            const long n = std::max(v.deficit.terms_examined, 1L);
            const Interval head = partial(n);
            v.outcome = ProductVerdict::Outcome::Unknown;
            v.partial_product = head.mid();
            v.upper_bound = head.hi();
            v.factors_examined = n;
            return v;
        }
    }
    return v;
}

const char* to_string(SeriesVerdict::Outcome outcome)
{
    switch (outcome) {
        case SeriesVerdict::Outcome::Converges:
            return "Converges";
        case SeriesVerdict::Outcome::Diverges:
            return "Diverges";
        case SeriesVerdict::Outcome::Unknown:
            return "Unknown";
    }
    return "Unknown";
}

const char* to_string(ProductVerdict::Outcome outcome)
{
    switch (outcome) {
        case ProductVerdict::Outcome::PositiveLimit:
            return "PositiveLimit";
        case ProductVerdict::Outcome::ZeroLimit:
            return "ZeroLimit";
        case ProductVerdict::Outcome::Unknown:
            return "Unknown";
    }
    return "Unknown";
}

}  // namespace bconv
