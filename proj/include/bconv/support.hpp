#pragma once

// Geometry of the set of incomplete sums: cylinder approximations, nowhere
// density, Lebesgue measure, dimension and uniqueness of digit expansions.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bconv/convolution_spec.hpp"
#include "bconv/series.hpp"

namespace bconv {

struct Segment {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
};

struct SupportApprox {
    int level = 0;
    std::vector<Segment> intervals;  // sorted, disjoint, outward-rounded
    Interval total_length = 0.0;
    std::size_t gap_count = 0;
    std::size_t cylinder_count = 0;  // admissible digit prefixes
    Interval cylinder_length = 0.0;  // r_level
};

inline constexpr int kMaxEnumerationLevel = 22;

// Throws LevelTooLargeError for n > max_level.
SupportApprox cylinders(const ConvolutionSpec& spec, int n, int max_level = kMaxEnumerationLevel);

struct NowhereDenseVerdict {
    enum class Outcome { NowhereDense, ContainsInterval, Indeterminate };
    Outcome outcome = Outcome::Indeterminate;
    std::string reason;
};

// Requires nonincreasing scales and p_ik > 0 (HypothesisViolationError).
NowhereDenseVerdict nowhere_dense_verdict(const ConvolutionSpec& spec);

struct SupportMeasure {
    enum class Outcome { Zero, Positive, Indeterminate };
    Outcome outcome = Outcome::Indeterminate;
    Interval value = 0.0;  // Positive: bracket of lim 2^k r_k
    long terms_used = 0;
    SeriesVerdict criterion;  // sum (delta_k - 1)
    std::string reason;
};

// Requires delta_k > 1 for all k (HypothesisViolationError when refuted).
SupportMeasure support_measure(const ConvolutionSpec& spec, const SeriesOptions& options = {});

enum class DimensionVariant { AsPrinted, LogCorrected };

struct DimensionEstimate {
    DimensionVariant variant = DimensionVariant::LogCorrected;
    double liminf_value = 0.0;  // min over the window [terms_used/2, terms_used]
    double limsup_value = 0.0;  // max over the same window
    long terms_used = 0;
    std::optional<double> limit;  // closed form when the gap ratios converge
    std::vector<std::string> warnings;
};

// k ln 2 / sum_{i<=k} w(delta_i) with w(d) = d + 1 (AsPrinted) or ln(d + 1).
DimensionEstimate dimension_estimate(const ConvolutionSpec& spec, DimensionVariant variant = DimensionVariant::LogCorrected,
                                     long horizon = 10000);
// k-th term of the sequence above, exposed for tests.
std::vector<double> dimension_sequence(const ConvolutionSpec& spec, DimensionVariant variant, long horizon);

struct UniquenessVerdict {
    enum class Outcome { Unique, NotUnique, Indeterminate };
    Outcome outcome = Outcome::Indeterminate;
    std::string reason;
};

UniquenessVerdict unique_representation(const ConvolutionSpec& spec);

const char* to_string(NowhereDenseVerdict::Outcome outcome);
const char* to_string(SupportMeasure::Outcome outcome);
const char* to_string(DimensionVariant variant);
const char* to_string(UniquenessVerdict::Outcome outcome);

extern const char* const kAsPrintedWarning;

}  // namespace bconv
