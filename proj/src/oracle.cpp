#include "bconv/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "bconv/errors.hpp"
#include "bconv/evaluator.hpp"

namespace bconv {

namespace {

constexpr double kBoxSlack = 1e-9;
constexpr double kCdfSlack = 1e-12;

// Depth-first enumeration of (sum, probability) over admissible prefixes.
void enumerate(const std::vector<long double>& a, const std::vector<long double>& p0, std::size_t k, long double sum,
               long double prob, std::vector<std::pair<long double, long double>>& out)
{
    if (k == a.size()) {
        out.emplace_back(sum, prob);
        return;
    }
    if (p0[k] > 0.0L) {
        enumerate(a, p0, k + 1, sum, prob * p0[k], out);
    }
    if (p0[k] < 1.0L) {
        enumerate(a, p0, k + 1, sum + a[k], prob * (1.0L - p0[k]), out);
    }
}

std::vector<std::pair<long double, long double>> atoms_of(const ConvolutionSpec& spec, int n)
{
    std::vector<long double> a(static_cast<std::size_t>(n));
    std::vector<long double> p0(a.size());
    for (int k = 1; k <= n; ++k) {
        a[static_cast<std::size_t>(k - 1)] = spec.scales.term(k).mid();
        p0[static_cast<std::size_t>(k - 1)] = spec.digits.p0(k);
    }
    std::vector<std::pair<long double, long double>> out;
    out.reserve(std::size_t{1} << n);
    enumerate(a, p0, 0, 0.0L, 1.0L, out);
    return out;
}

}  // namespace

BoxCountResult box_count(const ConvolutionSpec& spec, int level, double box_size)
{
    if (level < 0 || level > 22) {
        throw LevelTooLargeError("box_count: level must lie in [0, 22]");
    }
    const double r = spec.scales.tail_sum(level).hi();
    if (!(box_size >= r * (1.0 - 1e-12)) || !(box_size > 0.0)) {
        throw ResolutionError("box_count: box size is smaller than the level-" + std::to_string(level) +
                              " cylinder length " + std::to_string(r));
    }
    const auto atoms = atoms_of(spec, level);
    const double total = spec.scales.total();
    const auto boxes = static_cast<std::size_t>(std::ceil(total / box_size)) + 2;
    std::vector<bool> hit(boxes, false);
    const long double b = box_size;
    const long double len = r;
    for (const auto& [s, prob] : atoms) {
        (void)prob;
        const long double e = s + len;
        const auto first = static_cast<long>(std::floor(s / b + kBoxSlack));
        const auto last = std::max(first, static_cast<long>(std::ceil(e / b - kBoxSlack)) - 1);
        for (long j = std::max(0L, first); j <= last && j < static_cast<long>(boxes); ++j) {
            hit[static_cast<std::size_t>(j)] = true;
        }
    }
    BoxCountResult res;
    res.box_size = box_size;
    res.occupied = static_cast<std::size_t>(std::count(hit.begin(), hit.end(), true));
    if (box_size < 1.0 && res.occupied > 1) {
        res.dim_estimate = std::log(static_cast<double>(res.occupied)) / std::log(1.0 / box_size);
    }
    return res;
}

double truncated_hellinger(const CoordinateLawSeq& mu, const CoordinateLawSeq& nu, int n)
{
    if (n < 0) {
        throw DomainError("truncated_hellinger: n must be >= 0");
    }
    if (mu.alphabet_size() != nu.alphabet_size()) {
        throw DimensionMismatchError("truncated_hellinger: alphabet sizes differ");
    }
    const std::size_t m = mu.alphabet_size();
    const double words = std::pow(static_cast<double>(m), n);
    if (n > 20 || words > 16777216.0) {
        throw LevelTooLargeError("truncated_hellinger: enumeration limited to n <= 20 and 2^24 words");
    }
    std::vector<ProbVector> mk;
    std::vector<ProbVector> nk;
    for (int k = 1; k <= n; ++k) {
        mk.push_back(mu.law(k));
        nk.push_back(nu.law(k));
    }
    // iterate over words as mixed-radix counters
    long double total = 0.0L;
    std::vector<std::size_t> word(static_cast<std::size_t>(n), 0);
    const auto count = static_cast<std::size_t>(words);
    for (std::size_t w = 0; w < count; ++w) {
        long double pm = 1.0L;
        long double pn = 1.0L;
        for (std::size_t k = 0; k < word.size(); ++k) {
            pm *= mk[k][word[k]];
            pn *= nk[k][word[k]];
        }
        total += std::sqrt(pm * pn);
        for (std::size_t k = 0; k < word.size(); ++k) {
            if (++word[k] < m) {
                break;
            }
            word[k] = 0;
        }
    }
    return static_cast<double>(total);
}

CdfComparison compare_cdf(const ConvolutionSpec& spec, int n, std::size_t grid, long horizon)
{
    if (n < 0 || n > 24) {
        throw LevelTooLargeError("compare_cdf: level must lie in [0, 24]");
    }
    if (grid < 2) {
        throw DomainError("compare_cdf: grid needs at least 2 points");
    }
    auto atoms = atoms_of(spec, n);
    std::sort(atoms.begin(), atoms.end());
    std::vector<long double> values(atoms.size());
    std::vector<long double> cumulative(atoms.size());
    long double acc = 0.0L;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        values[i] = atoms[i].first;
        acc += atoms[i].second;
        cumulative[i] = acc;
    }
    auto empirical = [&](long double x) -> double {
        const auto it = std::upper_bound(values.begin(), values.end(), x);
        return it == values.begin() ? 0.0 : static_cast<double>(cumulative[static_cast<std::size_t>(it - values.begin()) - 1]);
    };

    CdfComparison c;
    c.level = n;
    c.grid = grid;
    c.tail_radius = spec.scales.tail_sum(n).hi();
    const double total = spec.scales.total();
    for (std::size_t j = 0; j < grid; ++j) {
        const double x = std::min(total, total * static_cast<double>(j) / static_cast<double>(grid - 1));
        const Interval f = cdf(spec, x, horizon);
        const double lower = empirical(static_cast<long double>(x) - c.tail_radius - kCdfSlack);
        const double upper = empirical(static_cast<long double>(x) + kCdfSlack);
        const double violation = std::max({lower - f.hi(), f.lo() - upper, 0.0});
        if (violation > c.max_violation) {
            c.max_violation = violation;
            c.worst_x = x;
        }
        c.max_width = std::max(c.max_width, upper - lower);
    }
    return c;
}

}  // namespace bconv
