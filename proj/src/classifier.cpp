#include "bconv/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bconv/errors.hpp"
#include "bconv/evaluator.hpp"

namespace bconv {

namespace {

using Outcome = ClassificationVerdict::Outcome;

Certificate series_certificate(std::string name, const SeriesVerdict& v)
{
    Certificate c;
    c.criterion = std::move(name);
    c.series = v;
    c.certified = v.certified();
    return c;
}

Certificate unevaluated(std::string name, std::string why)
{
    Certificate c;
    c.criterion = std::move(name);
    c.series.rule = std::move(why);
    return c;
}

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

}  // namespace

ClassificationVerdict classify(const ConvolutionSpec& spec, const ClassifyOptions& options)
{
    ClassificationVerdict v;
    v.purity = std::string("the law has pure type (Jessen-Wintner theorem, ") + kCitedMarker + ")";
    auto& h = v.hypotheses;
    h.gaps_strict = spec.scales.all_delta_gt_one();
    h.gaps_weak = h.gaps_strict == Certainty::Yes ? Certainty::Yes : spec.scales.all_delta_ge_one();
    h.boundary = h.gaps_strict != Certainty::Yes && h.gaps_weak == Certainty::Yes;
    const bool in_regime = h.gaps_weak == Certainty::Yes;
    if (!in_regime && options.strict) {
        throw HypothesisViolationError("classification needs delta_k > 1 for all k (certainty: " +
                                       std::string(to_string(h.gaps_strict)) + ")");
    }
    if (h.boundary) {
        h.notes.emplace_back("delta_k >= 1 with equality for some k: outside the strict-gap trichotomy; "
                             "verdict extends it and should be cross-checked against the distribution function");
    } else if (!in_regime) {
        h.notes.emplace_back("delta_k > 1 not certified for all k; only the discreteness criterion applies");
    }

    const DiscretenessResult atom = discreteness_test(CoordinateLawSeq::from_digits(spec.digits), options.series);
    Certificate c13;
    c13.criterion = kDiscretenessCriterion;
    c13.series = atom.criterion.deficit;
    c13.product = atom.criterion;
    c13.certified = atom.outcome != DiscretenessResult::Outcome::Indeterminate;
    v.discreteness = atom;

    Certificate c14 = in_regime
                          ? series_certificate(kGapExcessCriterion,
                                               series_verdict(spec.scales.delta_excess_series(), options.series))
                          : unevaluated(kGapExcessCriterion, "not evaluated: delta_k >= 1 not certified");
    Certificate c15 =
        series_certificate(kDigitBalanceCriterion, series_verdict(spec.digits.squared_deviation(0.5), options.series));

    if (atom.outcome == DiscretenessResult::Outcome::Discrete) {
        // an atom of the product measure is an atom of its image
        v.outcome = Outcome::Discrete;
    } else if (atom.outcome == DiscretenessResult::Outcome::NotDiscrete && in_regime) {
        const auto o14 = c14.series.outcome;
        const auto o15 = c15.series.outcome;
        using S = SeriesVerdict::Outcome;
        if (o14 == S::Converges && o15 == S::Converges) {
            v.outcome = Outcome::AbsolutelyContinuous;
        } else if (o14 == S::Diverges || o15 == S::Diverges) {
            v.outcome = Outcome::SingularContinuous;
        }
    }
    v.certificates = {std::move(c13), std::move(c14), std::move(c15)};
    return v;
}

AlmostEveryLambdaReport report_ae_lambda(const DigitLaw& digits, std::optional<double> p)
{
    AlmostEveryLambdaReport r;
    r.p = p;
    if (p) {
        const double q = *p;
        if (!(q >= 1.0 / 3.0 && q <= 2.0 / 3.0)) {
            throw RangeError("p must lie in [1/3, 2/3]");
        }
        r.center = 1.0 - q;
        r.threshold = std::pow(q, q) * std::pow(1.0 - q, 1.0 - q);
    }
    r.condition = series_verdict(digits.squared_deviation(r.center));
    r.applies = r.condition.outcome == SeriesVerdict::Outcome::Converges;
    const std::string series = "sum (" + fmt(r.center) + " - p0k)^2";
    const std::string range = "lambda in [" + fmt(r.threshold) + ", 1)";
    const std::string source = p ? "Peres-Solomyak" : "Solomyak";
    switch (r.condition.outcome) {
        case SeriesVerdict::Outcome::Converges:
            r.conclusion = series + " converges, so for almost all " + range +
                           " the law of sum phi_k lambda^k is absolutely continuous (" + source + ", " +
                           kCitedMarker + ")";
            break;
        case SeriesVerdict::Outcome::Diverges:
            r.conclusion = series + " diverges; the almost-every-lambda result is inapplicable";
            break;
        case SeriesVerdict::Outcome::Unknown:
            r.conclusion = series + " not certified; the almost-every-lambda result is undecided";
            break;
    }
    return r;
}

CounterexampleDemo counterexample_demo(double p, double lambda, int n, double cell)
{
    if (!(p >= 1.0 / 3.0 && p <= 2.0 / 3.0) || p == 0.5) {
        throw RangeError("p must lie in [1/3, 2/3] and differ from 1/2");
    }
    if (!(lambda > 0.5 && lambda < 1.0)) {
        throw RangeError("lambda must lie in (1/2, 1)");
    }
    if (n < 1 || n > kMaxTruncationLevel) {
        throw RangeError("level must lie in [1, " + std::to_string(kMaxTruncationLevel) + "]");
    }
    const double support_end = lambda / (1.0 - lambda);
    if (!(cell > 0.0) || support_end / cell > 1e6) {
        throw RangeError("cell width must be positive and give at most 10^6 cells");
    }

    CounterexampleDemo d;
    d.p = p;
    d.lambda = lambda;
    d.level = n;
    d.cell = cell;
    const ProbVector fair{0.5, 0.5};
    const ProbVector biased{1.0 - p, p};
    d.factor = hellinger_factor(fair, biased);
    d.singularity = kakutani_dichotomy(CoordinateLawSeq::constant(fair), CoordinateLawSeq::constant(biased), {}, n);

    const std::size_t cells = static_cast<std::size_t>(std::ceil(support_end / cell - 1e-12));
    auto histogram = [&](double p0) {
        const ConvolutionSpec spec{ScaleSeq::geometric(lambda, 1.0), DigitLaw::constant(p0), "", ""};
        std::vector<double> h(cells, 0.0);
        const TruncatedDistribution law = truncated_distribution(spec, n);
        for (const auto& a : law.atoms()) {
            const auto j = static_cast<std::size_t>(std::max(0.0, std::floor(a.value / cell)));
            h[std::min(j, cells - 1)] += a.probability;
        }
        return h;
    };
    d.fair_histogram = histogram(0.5);
    d.biased_histogram = histogram(1.0 - p);
    d.all_cells_positive = true;
    for (std::size_t j = 0; j < cells; ++j) {
        d.overlap += std::min(d.fair_histogram[j], d.biased_histogram[j]);
        d.all_cells_positive = d.all_cells_positive && d.fair_histogram[j] > 0.0 && d.biased_histogram[j] > 0.0;
    }
    const double threshold = std::pow(p, p) * std::pow(1.0 - p, 1.0 - p);
    d.conclusion = "the digit laws are mutually singular (Hellinger product " +
                   std::string(to_string(d.singularity.criterion.outcome)) +
                   "); their images are equivalent for almost all lambda in [" + fmt(threshold) + ", 1) (" +
                   kCitedMarker + ")";
    return d;
}

const char* to_string(ClassificationVerdict::Outcome outcome)
{
    switch (outcome) {
        case Outcome::Discrete:
            return "Discrete";
        case Outcome::AbsolutelyContinuous:
            return "AbsolutelyContinuous";
        case Outcome::SingularContinuous:
            return "SingularContinuous";
        case Outcome::Indeterminate:
            return "Indeterminate";
    }
    return "Indeterminate";
}

}  // namespace bconv
