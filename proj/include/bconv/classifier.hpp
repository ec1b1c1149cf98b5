#pragma once

// Type of the law of phi: discrete, absolutely continuous or singular
// continuous, with the series and products that decide it.

#include <optional>
#include <string>
#include <vector>

#include "bconv/convolution_spec.hpp"
#include "bconv/product_measure.hpp"
#include "bconv/series.hpp"

namespace bconv {

struct Certificate {
    std::string criterion;
    SeriesVerdict series;                 // for products: the deficit series
    std::optional<ProductVerdict> product;
    bool certified = false;
};

struct HypothesisReport {
    Certainty gaps_strict = Certainty::Unknown;  // delta_k > 1 for all k
    Certainty gaps_weak = Certainty::Unknown;    // delta_k >= 1 for all k
    bool boundary = false;                       // weak holds, strict does not
    std::vector<std::string> notes;
};

struct ClassificationVerdict {
    enum class Outcome { Discrete, AbsolutelyContinuous, SingularContinuous, Indeterminate };
    Outcome outcome = Outcome::Indeterminate;
    std::vector<Certificate> certificates;  // discreteness, gap excess, digit balance
    HypothesisReport hypotheses;
    std::optional<DiscretenessResult> discreteness;
    std::string purity;
};

struct ClassifyOptions {
    // Throw HypothesisViolationError instead of returning partial results
    // when delta_k >= 1 cannot be certified.
    bool strict = false;
    SeriesOptions series;
};

inline constexpr const char* kDiscretenessCriterion = "discreteness: prod max(p0k, p1k) > 0";
inline constexpr const char* kGapExcessCriterion = "gap excess: sum (delta_k - 1) < inf";
inline constexpr const char* kDigitBalanceCriterion = "digit balance: sum (1/2 - p0k)^2 < inf";
inline constexpr const char* kCitedMarker = "cited, not verified";

ClassificationVerdict classify(const ConvolutionSpec& spec, const ClassifyOptions& options = {});

struct AlmostEveryLambdaReport {
    SeriesVerdict condition;      // sum (center - p0k)^2
    std::optional<double> p;
    double center = 0.5;          // 1 - p, or 1/2
    double threshold = 0.5;       // p^p (1-p)^(1-p), or 1/2
    bool applies = false;         // condition certified convergent
    std::string conclusion;
};

// Throws RangeError for p outside [1/3, 2/3].
AlmostEveryLambdaReport report_ae_lambda(const DigitLaw& digits, std::optional<double> p = std::nullopt);

struct CounterexampleDemo {
    double p = 0.0;
    double lambda = 0.0;
    int level = 0;
    double cell = 0.25;
    double factor = 0.0;           // Hellinger affinity of one coordinate pair
    DichotomyVerdict singularity;  // biased digits vs fair digits
    std::vector<double> fair_histogram;
    std::vector<double> biased_histogram;
    double overlap = 0.0;          // sum over cells of the smaller mass
    bool all_cells_positive = false;
    std::string conclusion;
};

// p in [1/3, 2/3] minus {1/2}, lambda in (1/2, 1), 1 <= n <= 24; RangeError otherwise.
CounterexampleDemo counterexample_demo(double p, double lambda, int n, double cell = 0.25);

const char* to_string(ClassificationVerdict::Outcome outcome);

}  // namespace bconv
