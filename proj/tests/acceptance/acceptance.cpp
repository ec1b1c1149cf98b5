// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bconv/classifier.hpp"
#include "bconv/cli.hpp"
#include "bconv/convolution_spec.hpp"
#include "bconv/evaluator.hpp"
#include "bconv/image_measure.hpp"
#include "bconv/oracle.hpp"
#include "bconv/product_measure.hpp"
#include "bconv/spec_io.hpp"
#include "bconv/support.hpp"

using namespace bconv;

namespace {

// Tolerances and sizes, fixed here so a run is reproducible.
constexpr double kDimensionTol = 1e-6;
constexpr long kDimensionHorizon = 10000;
constexpr int kBoxLevel = 12;
constexpr double kBoxDimensionTol = 0.05;
constexpr double kCantorSeconds = 30.0;

constexpr std::size_t kUniformGrid = 200;
constexpr long kCdfHorizon = 40;
constexpr double kUniformCdfTol = 1e-9;
constexpr double kMomentTol = 1e-10;
constexpr double kCharFnTol = 1e-6;
constexpr double kUniformSeconds = 10.0;

constexpr double kGapMeasureTol = 1e-9;
constexpr int kGapCylinderLevel = 20;

constexpr double kAtomMass = 0.288788;
constexpr double kAtomMassTol = 1e-6;
constexpr int kAtomScanLevel = 18;
constexpr double kMaxSingleAtom = 1e-3;

constexpr int kHellingerPairs = 100;
constexpr int kHellingerLevel = 12;
constexpr double kHellingerTol = 1e-10;

constexpr std::uint64_t kLawInstances = 10000;
constexpr double kLawSeconds = 20.0;

constexpr int kSandwichLevel = 16;
constexpr std::size_t kSandwichGrid = 200;
constexpr double kSandwichTol = 1e-10;
constexpr double kQuarterCoarseTol = 1e-4;
constexpr double kQuarterFineTol = 1e-9;

constexpr std::size_t kSampleCount = 100000;
constexpr std::uint64_t kSampleSeed = 20240611;
constexpr long kSampleHorizon = 40;
constexpr double kKsSlack = 0.01;

constexpr double kAsPrintedValue = 0.23105;
constexpr double kAsPrintedTol = 1e-5;

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what)
    {
        if (!cond) {
            ok = false;
            detail << " [failed: " << what << "]";
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Classical Cantor function from ternary digits.
double cantor_function(double x)
{
    if (x <= 0.0) {
        return 0.0;
    }
    if (x >= 1.0) {
        return 1.0;
    }
    long double y = x;
    long double value = 0.0L;
    long double weight = 0.5L;
    for (int i = 0; i < 60; ++i) {
        y *= 3.0L;
        const int d = static_cast<int>(std::floor(y));
        y -= d;
        if (d == 1) {
            return static_cast<double>(value + weight);
        }
        if (d == 2) {
            value += weight;
        }
        weight *= 0.5L;
    }
    return static_cast<double>(value);
}

bool all_certified(const ClassificationVerdict& v)
{
    return std::all_of(v.certificates.begin(), v.certificates.end(), [](const Certificate& c) { return c.certified; });
}

ConvolutionSpec perturbed_spec()
{
    return {ScaleSeq::cantor_like(1.0, 4), DigitLaw::perturbed(0.5, 0.3, 1.0), "perturbed", ""};
}

Check criterion_cantor()
{
    Check c;
    const auto start = std::chrono::steady_clock::now();
    const auto spec = catalog::cantor();
    const double target = std::log(2.0) / std::log(3.0);

    const auto verdict = classify(spec);
    c.require(verdict.outcome == ClassificationVerdict::Outcome::SingularContinuous, "classify");
    c.require(support_measure(spec).outcome == SupportMeasure::Outcome::Zero, "support measure");
    c.require(nowhere_dense_verdict(spec).outcome == NowhereDenseVerdict::Outcome::NowhereDense, "nowhere dense");

    const auto dim = dimension_estimate(spec, DimensionVariant::LogCorrected, kDimensionHorizon);
    const double dim_err = std::max(std::fabs(dim.liminf_value - target), std::fabs(dim.limsup_value - target));
    c.require(dim_err <= kDimensionTol, "dimension");

    const auto boxes = box_count(spec, kBoxLevel, std::pow(3.0, -kBoxLevel));
    const double box_err = std::fabs(boxes.dim_estimate - target);
    c.require(box_err <= kBoxDimensionTol, "box count");

    const double elapsed = seconds_since(start);
    c.require(elapsed < kCantorSeconds, "runtime");
    c.detail << "outcome=" << to_string(verdict.outcome) << " dim_err=" << dim_err << " box_dim=" << boxes.dim_estimate
             << " seconds=" << elapsed;
    return c;
}

Check criterion_uniform()
{
    Check c;
    const auto start = std::chrono::steady_clock::now();
    const auto spec = catalog::uniform();

    double cdf_err = 0.0;
    for (std::size_t j = 0; j < kUniformGrid; ++j) {
        const double x = static_cast<double>(j) / static_cast<double>(kUniformGrid - 1);
        const Interval f = cdf(spec, x, kCdfHorizon);
        cdf_err = std::max({cdf_err, std::fabs(f.lo() - x), std::fabs(f.hi() - x)});
    }
    c.require(cdf_err <= kUniformCdfTol, "cdf");

    const auto m = moments(spec);
    const double mean_err = std::max(std::fabs(m.mean.lo() - 0.5), std::fabs(m.mean.hi() - 0.5));
    const double var_err = std::max(std::fabs(m.variance.lo() - 1.0 / 12.0), std::fabs(m.variance.hi() - 1.0 / 12.0));
    c.require(mean_err <= kMomentTol && var_err <= kMomentTol, "moments");

    const auto phi = char_fn(spec, 2.0 * M_PI, kCharFnTol);
    c.require(std::abs(phi.center) <= kCharFnTol, "characteristic function");

    const double elapsed = seconds_since(start);
    c.require(elapsed < kUniformSeconds, "runtime");
    c.detail << "cdf_err=" << cdf_err << " mean_err=" << mean_err << " var_err=" << var_err
             << " |phi(2pi)|=" << std::abs(phi.center) << " seconds=" << elapsed;
    return c;
}

Check criterion_gap_measure()
{
    Check c;
    const auto spec = catalog::two_term(0.5);
    c.require(nowhere_dense_verdict(spec).outcome == NowhereDenseVerdict::Outcome::NowhereDense, "nowhere dense");

    const auto measure = support_measure(spec);
    c.require(measure.outcome == SupportMeasure::Outcome::Positive, "support measure outcome");
    const double value_err = std::max(std::fabs(measure.value.lo() - 0.5), std::fabs(measure.value.hi() - 0.5));
    c.require(value_err <= kGapMeasureTol, "support measure value");

    const auto approx = cylinders(spec, kGapCylinderLevel);
    const double length_err = std::fabs(approx.total_length.mid() - 0.5);
    c.require(length_err <= std::ldexp(1.0, -(kGapCylinderLevel - 1)), "cylinder length");
    c.detail << "measure=[" << measure.value.lo() << ", " << measure.value.hi() << "] level20_length="
             << approx.total_length.mid();
    return c;
}

Check criterion_trichotomy()
{
    Check c;
    using Outcome = ClassificationVerdict::Outcome;

    const ConvolutionSpec discrete{ScaleSeq::cantor_like(2.0, 3),
                                   DigitLaw::explicit_prefix({}, DigitTailRule{1.0, -1.0, Decay::geometric(0.5)}), "", ""};
    const auto vd = classify(discrete);
    c.require(vd.outcome == Outcome::Discrete && all_certified(vd), "discrete verdict");
    const auto dt = discreteness_test(CoordinateLawSeq::from_digits(discrete.digits));
    c.require(dt.outcome == DiscretenessResult::Outcome::Discrete, "discreteness test");
    c.require(std::fabs(dt.mass_lower_bound - kAtomMass) <= kAtomMassTol, "atom mass");
    c.require(dt.atom.tail_symbol == 0 && dt.atom.prefix.empty(), "atom sequence");

    const auto ac = catalog::two_term(0.5);
    const auto va = classify(ac);
    c.require(va.outcome == Outcome::AbsolutelyContinuous && all_certified(va), "absolutely continuous verdict");
    c.require(support_measure(ac).outcome == SupportMeasure::Outcome::Positive, "positive support");

    const auto sc = catalog::cantor();
    const auto vs = classify(sc);
    c.require(vs.outcome == Outcome::SingularContinuous && all_certified(vs), "singular verdict");
    const auto law = truncated_distribution(sc, kAtomScanLevel);
    double max_atom = 0.0;
    for (const auto& a : law.atoms()) {
        max_atom = std::max(max_atom, a.probability);
    }
    c.require(max_atom < kMaxSingleAtom, "max atom");

    c.detail << "atom_mass=" << dt.mass_lower_bound << " level18_max_atom=" << max_atom;
    return c;
}

DigitLaw random_binary_law(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> prob(0.02, 0.98);
    std::uniform_real_distribution<double> mid(0.1, 0.9);
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
        case 0:
            return DigitLaw::constant(prob(rng));
        case 1: {
            const double p0 = std::uniform_real_distribution<double>(0.45, 0.55)(rng);
            const double amp = std::uniform_real_distribution<double>(-0.4, 0.4)(rng);
            return DigitLaw::perturbed(p0, amp, std::uniform_real_distribution<double>(0.5, 2.0)(rng));
        }
        default: {
            std::vector<double> prefix(std::uniform_int_distribution<int>(0, 6)(rng));
            for (auto& p : prefix) {
                p = prob(rng);
            }
            return DigitLaw::explicit_prefix(std::move(prefix), DigitTailRule{mid(rng), 0.0, Decay::none()});
        }
    }
}

Check criterion_kakutani()
{
    Check c;
    std::mt19937_64 rng(1729);
    double worst = 0.0;
    for (int i = 0; i < kHellingerPairs; ++i) {
        const auto mu = CoordinateLawSeq::from_digits(random_binary_law(rng));
        const auto nu = CoordinateLawSeq::from_digits(random_binary_law(rng));
        const auto verdict = kakutani_dichotomy(mu, nu, {}, kHellingerLevel);
        const double product = verdict.hellinger_products.at(kHellingerLevel - 1);
        worst = std::max(worst, std::fabs(truncated_hellinger(mu, nu, kHellingerLevel) - product));
    }
    c.require(worst <= kHellingerTol, "oracle equivalence");

    using DO = DichotomyVerdict::Outcome;
    const auto fair = CoordinateLawSeq::from_digits(DigitLaw::constant(0.5));
    const auto summable = kakutani_dichotomy(fair, CoordinateLawSeq::from_digits(DigitLaw::perturbed(0.5, 1.0, 1.0)));
    c.require(summable.outcome == DO::AbsolutelyContinuous, "square-summable perturbation");
    const auto biased = kakutani_dichotomy(fair, CoordinateLawSeq::from_digits(DigitLaw::constant(0.6)));
    c.require(biased.outcome == DO::Singular, "constant bias");
    const auto same = kakutani_dichotomy(fair, fair);
    c.require(same.outcome == DO::AbsolutelyContinuous && same.criterion.lower_bound == 1.0, "identical laws");

    c.detail << "pairs=" << kHellingerPairs << " max_diff=" << worst;
    return c;
}

Check criterion_laws()
{
    Check c;
    const auto start = std::chrono::steady_clock::now();
    const auto suite = run_law_suite(kLawInstances, 0);
    c.require(suite.total_violations() == 0, "violations");
    c.require(suite.witness_passed, "witness");
    const double elapsed = seconds_since(start);
    c.require(elapsed < kLawSeconds, "runtime");
    c.detail << "instances=" << suite.instances << " violations=" << suite.total_violations()
             << " converse_failures=" << suite.converse_failures << " seconds=" << elapsed;
    return c;
}

Check criterion_sandwich()
{
    Check c;
    double worst = 0.0;
    for (const auto& spec : {catalog::cantor(), catalog::uniform(), perturbed_spec()}) {
        const auto cmp = compare_cdf(spec, kSandwichLevel, kSandwichGrid, kCdfHorizon);
        worst = std::max(worst, cmp.max_violation);
    }
    c.require(worst <= kSandwichTol, "sandwich");

    auto quarter_err = [](long horizon) {
        const Interval f = cdf(catalog::cantor(), 0.25, horizon);
        return std::max(std::fabs(f.lo() - 1.0 / 3.0), std::fabs(f.hi() - 1.0 / 3.0));
    };
    const double coarse = quarter_err(16);
    const double fine = quarter_err(40);
    c.require(coarse <= kQuarterCoarseTol, "cdf(1/4) at horizon 16");
    c.require(fine <= kQuarterFineTol, "cdf(1/4) at horizon 40");
    c.detail << "max_violation=" << worst << " quarter_err16=" << coarse << " quarter_err40=" << fine;
    return c;
}

Check criterion_sampling()
{
    Check c;
    const auto spec = catalog::cantor();
    auto values = sample(spec, kSampleCount, kSampleSeed, kSampleHorizon);

    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    const double mean_err = std::fabs(sum / static_cast<double>(values.size()) - 0.5);
    c.require(mean_err <= 3.0 * std::sqrt(0.125 / static_cast<double>(kSampleCount)), "mean");

    std::sort(values.begin(), values.end());
    double ks = 0.0;
    const double n = static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double f = cantor_function(values[i]);
        ks = std::max({ks, std::fabs(f - static_cast<double>(i) / n), std::fabs(f - static_cast<double>(i + 1) / n)});
    }
    const double tail = spec.scales.tail_sum(kSampleHorizon).hi();
    c.require(ks <= kKsSlack + tail, "ks distance");

    const auto again = sample(spec, kSampleCount, kSampleSeed, kSampleHorizon);
    const auto first = sample(spec, kSampleCount, kSampleSeed, kSampleHorizon);
    c.require(std::equal(first.begin(), first.end(), again.begin(),
                         [](double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }),
              "library determinism");

    auto cli_bytes = [] {
        std::ostringstream out;
        std::ostringstream err;
        run({"sample", "catalog:cantor", "--count", "1000", "--seed", std::to_string(kSampleSeed)}, out, err);
        return out.str();
    };
    const std::string a = cli_bytes();
    c.require(!a.empty() && a == cli_bytes(), "cli determinism");

    c.detail << "mean_err=" << mean_err << " ks=" << ks;
    return c;
}

Check criterion_dimension_variants()
{
    Check c;
    const auto spec = catalog::cantor();
    const auto printed = dimension_estimate(spec, DimensionVariant::AsPrinted, kDimensionHorizon);
    c.require(std::fabs(printed.liminf_value - kAsPrintedValue) <= kAsPrintedTol, "as-printed value");
    c.require(std::find(printed.warnings.begin(), printed.warnings.end(), std::string(kAsPrintedWarning)) !=
                  printed.warnings.end(),
              "warning");

    const auto fallback = dimension_estimate(spec);
    c.require(fallback.variant == DimensionVariant::LogCorrected && fallback.warnings.empty(), "library default");

    std::ostringstream out;
    std::ostringstream err;
    run({"dimension", "catalog:cantor"}, out, err);
    const Json report = Json::parse(out.str());
    c.require(report["result"]["variant"] == to_string(DimensionVariant::LogCorrected) && report["warnings"].empty(),
              "cli default");
    c.detail << "as_printed=" << printed.liminf_value;
    return c;
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
        {"cantor benchmark", criterion_cantor},
        {"uniform benchmark", criterion_uniform},
        {"nowhere dense positive measure", criterion_gap_measure},
        {"trichotomy", criterion_trichotomy},
        {"product dichotomy oracle", criterion_kakutani},
        {"image measure laws", criterion_laws},
        {"cdf sandwich", criterion_sandwich},
        {"sampling", criterion_sampling},
        {"dimension variants", criterion_dimension_variants},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check result;
        try {
            result = criteria[i].second();
        } catch (const std::exception& e) {
            result.ok = false;
            result.detail << "exception: " << e.what();
        }
        failures += result.ok ? 0 : 1;
        std::printf("%s %zu %s: %s\n", result.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    result.detail.str().c_str());
    }
    std::fflush(stdout);
    return failures == 0 ? 0 : 1;
}
