#pragma once

// Numerical evaluation of the law of phi = sum_k phi_k a_k.

#include <complex>
#include <cstdint>
#include <vector>

#include "bconv/convolution_spec.hpp"

namespace bconv {

struct DigitExpansion {
    enum class Terminal { Exhausted, GapHit, Exact };

    std::vector<int> digits;
    Terminal terminal = Terminal::Exhausted;
    long index = 0;  // digits determined (Exhausted, Exact) or gap level (GapHit)
};

// Greedy expansion x = sum gamma_k a_k. Requires delta_k >= 1 for all k
// (ties at delta_k = 1 resolve to digit 1) and 0 <= x <= r_0. Stops early
// once the cylinders are shorter than the rounding error of the remainder.
DigitExpansion digits_of(const ConvolutionSpec& spec, double x, long horizon);

// P(phi <= x), certified bracket.
Interval cdf(const ConvolutionSpec& spec, double x, long horizon = 40);

struct ComplexBall {
    std::complex<double> center;
    double radius = 0.0;
    long factors = 0;
};

// prod_k (p0k + p1k e^{i t a_k}) truncated where |t| r_n <= tol.
ComplexBall char_fn(const ConvolutionSpec& spec, double t, double tol = 1e-9);

struct Moments {
    Interval mean = 0.0;
    Interval variance = 0.0;
    long terms = 0;
};

Moments moments(const ConvolutionSpec& spec);

// Deterministic given (seed, horizon); sample i depends only on (seed, i).
std::vector<double> sample(const ConvolutionSpec& spec, std::size_t count, std::uint64_t seed, long horizon);
// Smallest horizon with r_horizon <= resolution (capped at max_horizon).
long horizon_for_resolution(const ConvolutionSpec& spec, double resolution, long max_horizon = 4096);

struct Atom {
    double value = 0.0;
    double probability = 0.0;
};

class TruncatedDistribution {
public:
    TruncatedDistribution(int level, std::vector<Atom> atoms, double tail_radius);

    int level() const { return level_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    double tail_radius() const { return tail_radius_; }
    // P(S_n <= x)
    double cdf(double x) const;
    double total_mass() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

private:
    int level_;
    std::vector<Atom> atoms_;
    std::vector<double> cumulative_;
    double tail_radius_;
};

inline constexpr int kMaxTruncationLevel = 24;
inline constexpr double kAtomMergeTolerance = 1e-14;

// Exact law of sum_{k<=n} phi_k a_k. Throws LevelTooLargeError for n > 24.
TruncatedDistribution truncated_distribution(const ConvolutionSpec& spec, int n);

}  // namespace bconv
