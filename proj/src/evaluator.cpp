#include "bconv/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bconv/errors.hpp"
#include "bconv/series.hpp"

namespace bconv {

namespace {

constexpr double kEps = 0x1.0p-52;

void require_expansion_regime(const ConvolutionSpec& spec)
{
    if (spec.scales.all_delta_ge_one() != Certainty::Yes) {
        throw HypothesisViolationError("digit expansions need delta_k >= 1 for all k (unique representation)");
    }
}

void require_in_range(const ConvolutionSpec& spec, double x)
{
    const double total = spec.scales.total();
    if (!(x >= 0.0 && x <= total)) {
        throw DomainError("x must lie in [0, r_0] = [0, " + std::to_string(total) + "]");
    }
}

struct GreedyStep {
    enum class Kind { One, Zero, Gap };
    Kind kind;
};

// One greedy step on the remainder; updates it for digit 1.
GreedyStep::Kind greedy_step(double& rest, double a, double r, double tol)
{
    if (rest >= a - tol) {
        rest = std::max(0.0, rest - a);
        return GreedyStep::Kind::One;
    }
    if (rest <= r + tol) {
        return GreedyStep::Kind::Zero;
    }
    return GreedyStep::Kind::Gap;
}

// prod_{i >= from} p0(i) as a bracket.
Interval all_zero_tail_mass(const ConvolutionSpec& spec, long from)
{
    const DigitLaw& d = spec.digits;
    const auto& a = d.asymptotics();
    TermSeries deficits;
    deficits.name = "sum p1";
    deficits.term = [d, from](long j) { return Interval(1.0) - Interval(d.p0(j + from - 1)); };
    deficits.start = std::max(1L, a.start - from + 1);
    if (a.limit < 1.0) {
        deficits.tail = PositiveLimitTail{(Interval(1.0) - Interval(a.limit)).lo()};
    } else if (a.coef == 0.0 || a.g.is_none()) {
        deficits.tail = ComparisonTail{};
    } else {
        // g is nonincreasing, so g(j + from - 1) <= g(j)
        const double c = std::fabs(a.coef);
        deficits.tail = ComparisonTail{{DecayBound{a.g, 0.0, c}}};
    }
    ProductVerdict v;
    try {
        v = product_verdict(deficits, SeriesOptions{2000, 200});
    } catch (const FactorOutOfRangeError&) {
        return 0.0;  // some p0(i) = 0
    }
    switch (v.outcome) {
        case ProductVerdict::Outcome::ZeroLimit:
            return 0.0;
        case ProductVerdict::Outcome::PositiveLimit:
            return {v.lower_bound, std::min(1.0, v.upper_bound)};
        case ProductVerdict::Outcome::Unknown:
            break;
    }
    return {0.0, std::min(1.0, v.upper_bound)};
}

// The remainder carries an absolute rounding error of order tol, so digits
// below that scale are not determined.
bool below_resolution(const ConvolutionSpec& spec, long k, double tol)
{
    return spec.scales.tail_sum(k - 1).hi() <= 4.0 * tol;
}

Interval clamp_unit(const Interval& x) { return {std::clamp(x.lo(), 0.0, 1.0), std::clamp(x.hi(), 0.0, 1.0)}; }

double unit_from_bits(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

}  // namespace

DigitExpansion digits_of(const ConvolutionSpec& spec, double x, long horizon)
{
    require_expansion_regime(spec);
    require_in_range(spec, x);
    const double tol = 8.0 * kEps * spec.scales.total();
    DigitExpansion e;
    double rest = x;
    for (long k = 1; k <= horizon; ++k) {
        if (rest == 0.0) {
            e.terminal = DigitExpansion::Terminal::Exact;
            e.index = k - 1;
            return e;
        }
        if (below_resolution(spec, k, tol)) {
            e.index = k - 1;
            return e;
        }
        const double a = spec.scales.term(k).mid();
        const double r = spec.scales.tail_sum(k).mid();
        switch (greedy_step(rest, a, r, tol)) {
            case GreedyStep::Kind::One:
                e.digits.push_back(1);
                break;
            case GreedyStep::Kind::Zero:
                e.digits.push_back(0);
                break;
            case GreedyStep::Kind::Gap:
                e.terminal = DigitExpansion::Terminal::GapHit;
                e.index = k;
                return e;
        }
    }
    if (rest == 0.0) {
        e.terminal = DigitExpansion::Terminal::Exact;
        e.index = horizon;
        return e;
    }
    e.terminal = DigitExpansion::Terminal::Exhausted;
    e.index = horizon;
    return e;
}

Interval cdf(const ConvolutionSpec& spec, double x, long horizon)
{
    require_expansion_regime(spec);
    require_in_range(spec, x);
    if (x >= spec.scales.tail_sum(0).hi()) {
        return 1.0;
    }
    const double tol = 8.0 * kEps * spec.scales.total();
    Interval acc = 0.0;
    Interval mass = 1.0;
    double rest = x;
    for (long k = 1; k <= horizon; ++k) {
        if (rest == 0.0) {
            // x is the left end of the current cylinder
            return clamp_unit(acc + mass * all_zero_tail_mass(spec, k));
        }
        if (below_resolution(spec, k, tol)) {
            break;
        }
        const Interval p0(spec.digits.p0(k));
        const Interval p1 = Interval(1.0) - p0;
        const double a = spec.scales.term(k).mid();
        const double r = spec.scales.tail_sum(k).mid();
        switch (greedy_step(rest, a, r, tol)) {
            case GreedyStep::Kind::One:
                acc += mass * p0;
                mass *= p1;
                break;
            case GreedyStep::Kind::Zero:
                mass *= p0;
                break;
            case GreedyStep::Kind::Gap:
                return clamp_unit(acc + mass * p0);
        }
        if (mass.hi() == 0.0) {
            return clamp_unit(acc);
        }
    }
    if (rest == 0.0) {
        return clamp_unit(acc + mass * all_zero_tail_mass(spec, horizon + 1));
    }
    return clamp_unit(Interval(acc.lo(), (acc + mass).hi()));
}

ComplexBall char_fn(const ConvolutionSpec& spec, double t, double tol)
{
    if (!(tol > 0.0)) {
        throw DomainError("char_fn: tol must be positive");
    }
    ComplexBall out;
    out.center = 1.0;
    if (t == 0.0) {
        return out;
    }
    const double at = std::fabs(t);
    long n = 0;
    while (at * spec.scales.tail_sum(n).hi() > tol) {
        ++n;
        if (n > 1'000'000) {
            throw RangeError("char_fn: truncation level exceeds 10^6 factors");
        }
    }
    std::complex<long double> prod = 1.0L;
    for (long k = 1; k <= n; ++k) {
        const long double p0 = spec.digits.p0(k);
        const long double phase = static_cast<long double>(t) * static_cast<long double>(spec.scales.term(k).mid());
        prod *= std::complex<long double>(p0 + (1.0L - p0) * std::cos(phase), (1.0L - p0) * std::sin(phase));
    }
    out.center = std::complex<double>(static_cast<double>(prod.real()), static_cast<double>(prod.imag()));
    // truncation: |E e^{itT} - 1| <= |t| E T <= |t| r_n; plus rounding of n factors
    out.radius = tol + 4.0 * static_cast<double>(n + 1) * kEps * (1.0 + at * spec.scales.total());
    out.factors = n;
    return out;
}

Moments moments(const ConvolutionSpec& spec)
{
    const double total = spec.scales.total();
    Interval mean = 0.0;
    Interval var = 0.0;
    long n = 0;
    const long cap = 100000;
    while (n < cap && spec.scales.tail_sum(n).hi() > 1e-17 * total) {
        ++n;
        const Interval a = spec.scales.term(n);
        const Interval p0(spec.digits.p0(n));
        const Interval p1 = Interval(1.0) - p0;
        mean += p1 * a;
        var += p0 * p1 * square(a);
    }
    const double r = spec.scales.tail_sum(n).hi();
    Moments m;
    m.mean = Interval(mean.lo(), (mean + Interval(r)).hi());
    // sum_{k>n} a_k^2 <= r_n^2 and p0 p1 <= 1/4
    m.variance = Interval(std::max(0.0, var.lo()), (var + ldexp(square(Interval(r)), -2)).hi());
    m.terms = n;
    return m;
}

long horizon_for_resolution(const ConvolutionSpec& spec, double resolution, long max_horizon)
{
    long n = 0;
    while (n < max_horizon && spec.scales.tail_sum(n).hi() > resolution) {
        ++n;
    }
    return n;
}

std::vector<double> sample(const ConvolutionSpec& spec, std::size_t count, std::uint64_t seed, long horizon)
{
    std::vector<double> a(static_cast<std::size_t>(std::max(0L, horizon)));
    std::vector<double> p1(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        a[k] = spec.scales.term(static_cast<long>(k) + 1).mid();
        p1[k] = spec.digits.p1(static_cast<long>(k) + 1);
    }
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto idx = static_cast<std::uint64_t>(i);
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32)};
        std::mt19937_64 rng(seq);
        long double value = 0.0L;
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (unit_from_bits(rng()) < p1[k]) {
                value += a[k];
            }
        }
        out[i] = static_cast<double>(value);
    }
    return out;
}

TruncatedDistribution::TruncatedDistribution(int level, std::vector<Atom> atoms, double tail_radius)
    : level_(level), atoms_(std::move(atoms)), tail_radius_(tail_radius)
{
    cumulative_.reserve(atoms_.size());
    long double acc = 0.0L;
    for (const auto& a : atoms_) {
        acc += a.probability;
        cumulative_.push_back(static_cast<double>(acc));
    }
}

double TruncatedDistribution::cdf(double x) const
{
    const auto it =
        std::upper_bound(atoms_.begin(), atoms_.end(), x, [](double v, const Atom& a) { return v < a.value; });
    if (it == atoms_.begin()) {
        return 0.0;
    }
    return cumulative_[static_cast<std::size_t>(it - atoms_.begin()) - 1];
}

TruncatedDistribution truncated_distribution(const ConvolutionSpec& spec, int n)
{
    if (n < 0) {
        throw DomainError("truncated_distribution: level must be >= 0");
    }
    if (n > kMaxTruncationLevel) {
        throw LevelTooLargeError("truncated_distribution: level " + std::to_string(n) + " exceeds " +
                                 std::to_string(kMaxTruncationLevel));
    }
    std::vector<Atom> atoms{{0.0, 1.0}};
    std::vector<Atom> zeros;
    std::vector<Atom> ones;
    std::vector<Atom> merged;
    for (long k = 1; k <= n; ++k) {
        const double a = spec.scales.term(k).mid();
        const double p0 = spec.digits.p0(k);
        const double p1 = spec.digits.p1(k);
        zeros.clear();
        ones.clear();
        if (p0 > 0.0) {
            for (const auto& at : atoms) {
                zeros.push_back({at.value, at.probability * p0});
            }
        }
        if (p1 > 0.0) {
            for (const auto& at : atoms) {
                ones.push_back({at.value + a, at.probability * p1});
            }
        }
        merged.resize(zeros.size() + ones.size());
        std::merge(zeros.begin(), zeros.end(), ones.begin(), ones.end(), merged.begin(),
                   [](const Atom& x, const Atom& y) { return x.value < y.value; });
        atoms.clear();
        for (const auto& at : merged) {
            if (!atoms.empty() && at.value - atoms.back().value <= kAtomMergeTolerance) {
                atoms.back().probability += at.probability;
            } else {
                atoms.push_back(at);
            }
        }
    }
    return {n, std::move(atoms), spec.scales.tail_sum(n).hi()};
}

}  // namespace bconv
