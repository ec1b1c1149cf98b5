#pragma once

// Infinite products of finite-alphabet coordinate measures: discreteness of
// the product and the absolute-continuity / singularity dichotomy.

#include <cstddef>
#include <string>
#include <vector>

#include "bconv/convolution_spec.hpp"
#include "bconv/series.hpp"

namespace bconv {

using ProbVector = std::vector<double>;

// law(k) = limit + g(k) * direction for k beyond the prefix.
struct CoordinateTail {
    ProbVector limit;
    std::vector<double> direction;  // sums to 0
    Decay g;
};

class CoordinateLawSeq {
public:
    static CoordinateLawSeq make(std::vector<ProbVector> prefix, CoordinateTail tail);
    static CoordinateLawSeq constant(ProbVector law);
    // Binary laws (p0(k), p1(k)).
    static CoordinateLawSeq from_digits(const DigitLaw& digits);

    std::size_t alphabet_size() const { return tail_.limit.size(); }
    ProbVector law(long k) const;
    // First index governed by the tail rule.
    long tail_start() const { return static_cast<long>(prefix_.size()) + 1; }
    const std::vector<ProbVector>& prefix() const { return prefix_; }
    const CoordinateTail& tail() const { return tail_; }

private:
    CoordinateLawSeq(std::vector<ProbVector> prefix, CoordinateTail tail);

    std::vector<ProbVector> prefix_;
    CoordinateTail tail_;
};

// sum_w sqrt(mu(w) nu(w))
double hellinger_factor(const ProbVector& mu, const ProbVector& nu);
// 1 - hellinger_factor = (1/2) sum_w (sqrt mu(w) - sqrt nu(w))^2, certified.
Interval hellinger_deficit(const ProbVector& mu, const ProbVector& nu);

// Terms 1 - rho(mu_k, nu_k) with an analytic tail description.
TermSeries hellinger_deficit_series(const CoordinateLawSeq& mu, const CoordinateLawSeq& nu);
// Throws DominationViolationError unless nu_k << mu_k for every k.
void check_domination(const CoordinateLawSeq& mu, const CoordinateLawSeq& nu);

struct DichotomyVerdict {
    enum class Outcome { AbsolutelyContinuous, Singular, Indeterminate };

    Outcome outcome = Outcome::Indeterminate;
    std::vector<double> hellinger_products;  // prod_{k<=n} rho_k for n = 1..len
    ProductVerdict criterion;
};

DichotomyVerdict kakutani_dichotomy(const CoordinateLawSeq& mu, const CoordinateLawSeq& nu,
                                    const SeriesOptions& options = {}, long products_shown = 64);

// The maximizing symbol sequence: prefix symbols, then `tail_symbol` forever.
struct AtomDescriptor {
    std::vector<int> prefix;
    int tail_symbol = 0;

    int symbol(long k) const;
    std::string describe() const;
    friend bool operator==(const AtomDescriptor&, const AtomDescriptor&) = default;
};

struct DiscretenessResult {
    enum class Outcome { Discrete, NotDiscrete, Indeterminate };

    Outcome outcome = Outcome::Indeterminate;
    AtomDescriptor atom;       // Discrete only
    double mass_lower_bound = 0.0;
    ProductVerdict criterion;  // product of max_w mu_k(w)
};

DiscretenessResult discreteness_test(const CoordinateLawSeq& mu, const SeriesOptions& options = {});

const char* to_string(DichotomyVerdict::Outcome outcome);
const char* to_string(DiscretenessResult::Outcome outcome);

}  // namespace bconv
