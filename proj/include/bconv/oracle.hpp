#pragma once

// Brute-force reference computations. They enumerate digit prefixes directly
// and share no code with the modules they check.

#include <cstddef>

#include "bconv/convolution_spec.hpp"
#include "bconv/product_measure.hpp"

namespace bconv {

struct BoxCountResult {
    double box_size = 0.0;
    std::size_t occupied = 0;
    double dim_estimate = 0.0;  // ln(occupied) / ln(1 / box_size), 0 when box_size >= 1
};

// Boxes [j b, (j+1) b) meeting the level-n cylinder union.
// Throws ResolutionError if box_size < r_level, LevelTooLargeError if level > 22.
BoxCountResult box_count(const ConvolutionSpec& spec, int level, double box_size);

// sum over words of length n of sqrt(mu(word) nu(word)). Throws LevelTooLargeError
// when n > 20 or the word count exceeds 2^24.
double truncated_hellinger(const CoordinateLawSeq& mu, const CoordinateLawSeq& nu, int n);

struct CdfComparison {
    int level = 0;
    std::size_t grid = 0;
    double tail_radius = 0.0;    // r_n
    double max_violation = 0.0;  // of F_n(x - r_n) <= cdf(x) <= F_n(x)
    double worst_x = 0.0;
    double max_width = 0.0;      // max of F_n(x) - F_n(x - r_n)
};

// Grid points x_j = r_0 j / (grid - 1). Throws LevelTooLargeError for n > 24.
CdfComparison compare_cdf(const ConvolutionSpec& spec, int n, std::size_t grid = 200, long horizon = 40);

}  // namespace bconv
