#include "bconv/product_measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "bconv/errors.hpp"

namespace bconv {

namespace {

constexpr double kSumTolerance = 1e-12;
constexpr double kBoundSlack = 1e-12;
constexpr long kSearchCap = 1L << 50;

void require(bool ok, const std::string& field, const std::string& message)
{
    if (!ok) {
        throw SpecValidationError(field, message);
    }
}

std::string indexed(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

void validate_probability(const ProbVector& p, std::size_t m, const std::string& field)
{
    require(p.size() == m, field, "expected " + std::to_string(m) + " entries");
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        require(std::isfinite(p[i]) && p[i] >= 0.0, indexed(field, i), "must be finite and >= 0");
        sum += p[i];
    }
    require(std::fabs(sum - 1.0) <= kSumTolerance, field, "entries must sum to 1");
}

// Smallest k >= from with pred(k) true, for pred monotone (false..false, true..).
template <class Pred>
long first_index(long from, Pred pred)
{
    if (pred(from)) {
        return from;
    }
    long lo = from;  // pred(lo) false
    long step = 1;
    long hi = from + step;
    while (!pred(hi)) {
        lo = hi;
        step *= 2;
        if (step > kSearchCap) {
            throw RangeError("index search did not terminate");
        }
        hi = from + step;
    }
    while (hi - lo > 1) {
        const long mid = lo + (hi - lo) / 2;
        (pred(mid) ? hi : lo) = mid;
    }
    return hi;
}

Decay sqrt_decay(const Decay& g)
{
    switch (g.kind) {
        case Decay::Kind::None:
            return g;
        case Decay::Kind::Power:
            return Decay::power(g.rate / 2.0);
        case Decay::Kind::Geometric:
            return Decay::geometric(std::sqrt(g.rate));
    }
    return g;
}

struct Component {
    Decay g;
    double coef = 0.0;  // coef * g(k)
};

Component normalized(Component c)
{
    if (c.g.is_none() || c.coef == 0.0) {
        return {Decay::none(), 0.0};
    }
    return c;
}

// |a(k) - b(k)| in [lo, hi] * h(k) for k >= start.
struct DifferenceBound {
    Decay h;
    double lo = 0.0;
    double hi = 0.0;
    long start = 1;
};

DifferenceBound difference_bound(Component a, Component b, long from)
{
    a = normalized(a);
    b = normalized(b);
    if (a.coef == 0.0 && b.coef == 0.0) {
        return {Decay::none(), 0.0, 0.0, from};
    }
    if (b.coef == 0.0 || a.coef == 0.0) {
        const Component& c = a.coef == 0.0 ? b : a;
        return {c.g, std::fabs(c.coef), std::fabs(c.coef), from};
    }
    if (a.g == b.g) {
        const double d = std::fabs(a.coef - b.coef);
        return {d == 0.0 ? Decay::none() : a.g, d, d, from};
    }
    const Component& dom = a.g.dominates(b.g) ? a : b;
    const Component& sub = a.g.dominates(b.g) ? b : a;
    long k1 = from;
    // k^s q^k decreases once k > s / ln(1/q)
    const Decay& p = dom.g.kind == Decay::Kind::Power ? dom.g : sub.g;
    const Decay& q = dom.g.kind == Decay::Kind::Geometric ? dom.g : sub.g;
    if (p.kind == Decay::Kind::Power && q.kind == Decay::Kind::Geometric) {
        k1 = std::max(k1, static_cast<long>(std::ceil(p.rate / -std::log(q.rate))) + 1);
    }
    const double half = 0.5 * std::fabs(dom.coef);
    const long start = first_index(
        k1, [&](long k) { return std::fabs(sub.coef) * sub.g.value(k) <= half * dom.g.value(k) * (1.0 - 1e-9); });
    return {dom.g, half, 3.0 * half, start};
}

double sum_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

std::vector<double> effective_direction(const CoordinateTail& t)
{
    if (t.g.is_none()) {
        return std::vector<double>(t.limit.size(), 0.0);
    }
    return t.direction;
}

std::size_t argmax(const ProbVector& p)
{
    // lowest index wins ties
    return static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

}  // namespace

// ---------------------------------------------------------------------------
// CoordinateLawSeq

CoordinateLawSeq::CoordinateLawSeq(std::vector<ProbVector> prefix, CoordinateTail tail)
    : prefix_(std::move(prefix)), tail_(std::move(tail))
{
}

CoordinateLawSeq CoordinateLawSeq::make(std::vector<ProbVector> prefix, CoordinateTail tail)
{
    const std::size_t m = tail.limit.size();
    require(m >= 2, "coordinate.tail.limit", "alphabet size must be >= 2");
    validate_probability(tail.limit, m, "coordinate.tail.limit");
    if (tail.g.is_none() || tail.direction.empty()) {
        tail.direction.assign(m, 0.0);
    }
    require(tail.direction.size() == m, "coordinate.tail.direction", "expected " + std::to_string(m) + " entries");
    for (std::size_t i = 0; i < m; ++i) {
        require(std::isfinite(tail.direction[i]), indexed("coordinate.tail.direction", i), "must be finite");
    }
    require(std::fabs(sum_of(tail.direction)) <= kSumTolerance, "coordinate.tail.direction", "entries must sum to 0");
    for (std::size_t k = 0; k < prefix.size(); ++k) {
        validate_probability(prefix[k], m, indexed("coordinate.prefix", k));
    }
    // g decreases, so law(k) lies between the limit and law(start).
    const long start = static_cast<long>(prefix.size()) + 1;
    const double g0 = tail.g.value(start);
    for (std::size_t i = 0; i < m; ++i) {
        require(tail.limit[i] + g0 * tail.direction[i] >= -kSumTolerance, indexed("coordinate.tail.direction", i),
                "makes a probability negative at the first tail index");
    }
    return {std::move(prefix), std::move(tail)};
}

CoordinateLawSeq CoordinateLawSeq::constant(ProbVector law)
{
    const std::size_t m = law.size();
    return make({}, CoordinateTail{std::move(law), std::vector<double>(m, 0.0), Decay::none()});
}

CoordinateLawSeq CoordinateLawSeq::from_digits(const DigitLaw& digits)
{
    const auto& a = digits.asymptotics();
    std::vector<ProbVector> prefix;
    for (long k = 1; k < a.start; ++k) {
        prefix.push_back({digits.p0(k), digits.p1(k)});
    }
    const double coef = a.g.is_none() ? 0.0 : a.coef;
    return make(std::move(prefix), CoordinateTail{{a.limit, 1.0 - a.limit}, {coef, -coef}, a.g});
}

ProbVector CoordinateLawSeq::law(long k) const
{
    if (k < 1) {
        throw DomainError("coordinate index must be >= 1");
    }
    if (k < tail_start()) {
        return prefix_[static_cast<std::size_t>(k - 1)];
    }
    ProbVector p = tail_.limit;
    if (!tail_.g.is_none()) {
        const double g = tail_.g.value(k);
        for (std::size_t i = 0; i < p.size(); ++i) {
            p[i] = std::max(0.0, p[i] + g * tail_.direction[i]);
        }
    }
    return p;
}

// ---------------------------------------------------------------------------
// Hellinger factors

double hellinger_factor(const ProbVector& mu, const ProbVector& nu)
{
    if (mu.size() != nu.size()) {
        throw DimensionMismatchError("hellinger_factor: vectors of length " + std::to_string(mu.size()) + " and " +
                                     std::to_string(nu.size()));
    }
    long double acc = 0.0L;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        acc += std::sqrt(static_cast<long double>(mu[i]) * static_cast<long double>(nu[i]));
    }
    return std::min(1.0, static_cast<double>(acc));
}

Interval hellinger_deficit(const ProbVector& mu, const ProbVector& nu)
{
    if (mu.size() != nu.size()) {
        throw DimensionMismatchError("hellinger_deficit: vectors of length " + std::to_string(mu.size()) + " and " +
                                     std::to_string(nu.size()));
    }
    Interval acc = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (mu[i] != nu[i]) {
            acc += square(sqrt(Interval(mu[i])) - sqrt(Interval(nu[i])));
        }
    }
    return ldexp(acc, -1);
}

void check_domination(const CoordinateLawSeq& mu, const CoordinateLawSeq& nu)
{
    const std::size_t m = mu.alphabet_size();
    if (nu.alphabet_size() != m) {
        throw DimensionMismatchError("coordinate laws have different alphabet sizes");
    }
    auto check_at = [&](long k) {
        const ProbVector a = mu.law(k);
        const ProbVector b = nu.law(k);
        for (std::size_t i = 0; i < m; ++i) {
            if (a[i] == 0.0 && b[i] > 0.0) {
                throw DominationViolationError("nu_k gives mass " + std::to_string(b[i]) + " to symbol " +
                                               std::to_string(i) + " where mu_k gives none (k=" + std::to_string(k) +
                                               ")");
            }
        }
    };
    const long joint = std::max(mu.tail_start(), nu.tail_start());
    for (long k = 1; k <= joint; ++k) {
        check_at(k);
    }
    const auto dm = effective_direction(mu.tail());
    const auto dn = effective_direction(nu.tail());
    for (std::size_t i = 0; i < m; ++i) {
        const double lm = mu.tail().limit[i];
        if (lm == 0.0 && dm[i] == 0.0) {
            if (nu.tail().limit[i] != 0.0 || dn[i] != 0.0) {
                throw DominationViolationError("mu_k vanishes on symbol " + std::to_string(i) +
                                               " for all large k but nu_k does not");
            }
        } else if (lm > 0.0 && dm[i] < 0.0) {
            // the only index where mu_k(i) can hit zero
            const long k = first_index(joint, [&](long j) { return -dm[i] * mu.tail().g.value(j) <= lm; });
            check_at(k);
        }
    }
}

TermSeries hellinger_deficit_series(const CoordinateLawSeq& mu, const CoordinateLawSeq& nu)
{
    const std::size_t m = mu.alphabet_size();
    if (nu.alphabet_size() != m) {
        throw DimensionMismatchError("coordinate laws have different alphabet sizes");
    }
    TermSeries s;
    s.name = "sum(1 - rho_k)";
    s.term = [mu, nu](long k) { return hellinger_deficit(mu.law(k), nu.law(k)); };
    const long joint = std::max(mu.tail_start(), nu.tail_start());
    s.start = joint;

    const auto& lm = mu.tail().limit;
    const auto& ln = nu.tail().limit;
    if (lm != ln) {
        const double limit = hellinger_deficit(lm, ln).lo();
        if (limit > 0.0) {
            s.tail = PositiveLimitTail{limit};
            return s;
        }
        s.tail = OpaqueTail{"limit laws differ below floating resolution"};
        return s;
    }

    const auto dm = effective_direction(mu.tail());
    const auto dn = effective_direction(nu.tail());
    ComparisonTail tail;
    long start = joint;
    for (std::size_t i = 0; i < m; ++i) {
        const double li = lm[i];
        if (li > 0.0) {
            const Component a{mu.tail().g, dm[i]};
            const Component b{nu.tail().g, dn[i]};
            const long k0 = first_index(joint, [&](long k) {
                return std::fabs(dm[i]) * mu.tail().g.value(k) + std::fabs(dn[i]) * nu.tail().g.value(k) <= li;
            });
            const DifferenceBound d = difference_bound(a, b, k0);
            if (d.hi > 0.0) {
                // (x-y)^2 / (sqrt x + sqrt y)^2 with x + y in [l, 3l]
                tail.parts.push_back(DecayBound{d.h.squared(), 0.5 * d.lo * d.lo / (6.0 * li) * (1.0 - kBoundSlack),
                                                0.5 * d.hi * d.hi / li * (1.0 + kBoundSlack)});
            }
            start = std::max(start, d.start);
        } else {
            const Component a{sqrt_decay(mu.tail().g), std::sqrt(std::max(0.0, dm[i]))};
            const Component b{sqrt_decay(nu.tail().g), std::sqrt(std::max(0.0, dn[i]))};
            const DifferenceBound d = difference_bound(a, b, joint);
            if (d.hi > 0.0) {
                tail.parts.push_back(DecayBound{d.h.squared(), 0.5 * d.lo * d.lo * (1.0 - kBoundSlack),
                                                0.5 * d.hi * d.hi * (1.0 + kBoundSlack)});
            }
            start = std::max(start, d.start);
        }
    }
    s.start = start;
    s.tail = tail;
    return s;
}

DichotomyVerdict kakutani_dichotomy(const CoordinateLawSeq& mu, const CoordinateLawSeq& nu,
                                    const SeriesOptions& options, long products_shown)
{
    check_domination(mu, nu);
    DichotomyVerdict v;
    v.criterion = product_verdict(hellinger_deficit_series(mu, nu), options);
    switch (v.criterion.outcome) {
        case ProductVerdict::Outcome::PositiveLimit:
            v.outcome = DichotomyVerdict::Outcome::AbsolutelyContinuous;
            break;
        case ProductVerdict::Outcome::ZeroLimit:
            v.outcome = DichotomyVerdict::Outcome::Singular;
            break;
        case ProductVerdict::Outcome::Unknown:
            v.outcome = DichotomyVerdict::Outcome::Indeterminate;
            break;
    }
    double prod = 1.0;
    for (long k = 1; k <= products_shown; ++k) {
        prod *= hellinger_factor(mu.law(k), nu.law(k));
        v.hellinger_products.push_back(prod);
    }
    return v;
}

// ---------------------------------------------------------------------------
// Discreteness

int AtomDescriptor::symbol(long k) const
{
    if (k >= 1 && k <= static_cast<long>(prefix.size())) {
        return prefix[static_cast<std::size_t>(k - 1)];
    }
    return tail_symbol;
}

std::string AtomDescriptor::describe() const
{
    std::ostringstream os;
    os << '(';
    for (int s : prefix) {
        os << s << ',';
    }
    os << tail_symbol << ",...)";
    return os.str();
}

DiscretenessResult discreteness_test(const CoordinateLawSeq& mu, const SeriesOptions& options)
{
    TermSeries d;
    d.name = "sum(1 - max_w mu_k(w))";
    d.term = [mu](long k) {
        const ProbVector p = mu.law(k);
        return Interval(1.0) - Interval(*std::max_element(p.begin(), p.end()));
    };
    const auto& limit = mu.tail().limit;
    const std::size_t j = argmax(limit);
    const auto dir = effective_direction(mu.tail());
    long start = mu.tail_start();
    if (limit[j] < 1.0) {
        d.tail = PositiveLimitTail{(Interval(1.0) - Interval(limit[j])).lo()};
    } else if (dir[j] == 0.0) {
        d.tail = ComparisonTail{};
    } else {
        // symbol j keeps more than half the mass from `start` on
        const double c = std::fabs(dir[j]);
        start = first_index(start, [&](long k) { return c * mu.tail().g.value(k) < 0.5; });
        d.tail = ComparisonTail{{DecayBound{mu.tail().g, c, c}}};
    }
    d.start = start;

    DiscretenessResult r;
    r.criterion = product_verdict(d, options);
    switch (r.criterion.outcome) {
        case ProductVerdict::Outcome::PositiveLimit:
            r.outcome = DiscretenessResult::Outcome::Discrete;
            break;
        case ProductVerdict::Outcome::ZeroLimit:
            r.outcome = DiscretenessResult::Outcome::NotDiscrete;
            break;
        case ProductVerdict::Outcome::Unknown:
            r.outcome = DiscretenessResult::Outcome::Indeterminate;
            break;
    }
    if (r.outcome == DiscretenessResult::Outcome::Discrete) {
        r.atom.tail_symbol = static_cast<int>(j);
        for (long k = 1; k < start; ++k) {
            r.atom.prefix.push_back(static_cast<int>(argmax(mu.law(k))));
        }
        while (!r.atom.prefix.empty() && r.atom.prefix.back() == r.atom.tail_symbol) {
            r.atom.prefix.pop_back();
        }
        r.mass_lower_bound = r.criterion.lower_bound;
    }
    return r;
}

const char* to_string(DichotomyVerdict::Outcome outcome)
{
    switch (outcome) {
        case DichotomyVerdict::Outcome::AbsolutelyContinuous:
            return "AbsolutelyContinuous";
        case DichotomyVerdict::Outcome::Singular:
            return "Singular";
        case DichotomyVerdict::Outcome::Indeterminate:
            return "Indeterminate";
    }
    return "Indeterminate";
}

const char* to_string(DiscretenessResult::Outcome outcome)
{
    switch (outcome) {
        case DiscretenessResult::Outcome::Discrete:
            return "Discrete";
        case DiscretenessResult::Outcome::NotDiscrete:
            return "NotDiscrete";
        case DiscretenessResult::Outcome::Indeterminate:
            return "Indeterminate";
    }
    return "Indeterminate";
}

}  // namespace bconv
