#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>
#include <random>

#include "bconv/errors.hpp"
#include "bconv/product_measure.hpp"

using namespace bconv;
using DO = DichotomyVerdict::Outcome;

namespace {

// Affinity of the first n coordinates by walking every word.
long double enumerated_affinity(const CoordinateLawSeq& mu, const CoordinateLawSeq& nu, int n)
{
    std::vector<ProbVector> a, b;
    for (int k = 1; k <= n; ++k) {
        a.push_back(mu.law(k));
        b.push_back(nu.law(k));
    }
    const std::size_t m = mu.alphabet_size();
    long double total = 0.0L;
    std::function<void(int, long double, long double)> walk = [&](int depth, long double pm, long double pn) {
        if (depth == n) {
            total += std::sqrt(pm * pn);
            return;
        }
        for (std::size_t i = 0; i < m; ++i) {
            walk(depth + 1, pm * a[depth][i], pn * b[depth][i]);
        }
    };
    walk(0, 1.0L, 1.0L);
    return total;
}

long double enumerated_max_atom(const CoordinateLawSeq& mu, int n)
{
    long double best = 0.0L;
    std::function<void(int, long double)> walk = [&](int depth, long double p) {
        if (depth == n) {
            best = std::max(best, p);
            return;
        }
        const ProbVector law = mu.law(depth + 1);
        for (double q : law) {
            walk(depth + 1, p * q);
        }
    };
    walk(0, 1.0L);
    return best;
}

ProbVector random_probability(std::mt19937_64& rng, std::size_t m)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ProbVector p(m);
    double s = 0.0;
    for (auto& x : p) {
        x = u(rng);
        s += x;
    }
    for (auto& x : p) {
        x /= s;
    }
    return p;
}

}  // namespace

TEST_CASE("hellinger factor values")
{
    CHECK(hellinger_factor({0.5, 0.5}, {0.5, 0.5}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(hellinger_factor({0.5, 0.5}, {0.0, 1.0}) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(hellinger_factor({0.5, 0.5}, {0.9, 0.1}) == doctest::Approx(std::sqrt(0.45L) + std::sqrt(0.05L)).epsilon(1e-15));
    CHECK(hellinger_factor({0.5, 0.5}, {0.9, 0.1}) == doctest::Approx(0.89443).epsilon(1e-5));
    CHECK(hellinger_factor({1.0, 0.0}, {0.0, 1.0}) == 0.0);
    CHECK_THROWS_AS(hellinger_factor({0.5, 0.5}, {1.0}), DimensionMismatchError);
    CHECK_THROWS_AS(hellinger_deficit({0.5, 0.5}, {0.2, 0.3, 0.5}), DimensionMismatchError);
}

TEST_CASE("hellinger factor properties on random pairs")
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        const std::size_t m = 2 + i % 5;
        const auto a = random_probability(rng, m);
        const auto b = random_probability(rng, m);
        const double r = hellinger_factor(a, b);
        CHECK(r >= 0.0);
        CHECK(r <= 1.0);
        CHECK(r == hellinger_factor(b, a));
        const Interval d = hellinger_deficit(a, b);
        CHECK(d.lo() - 1e-14 <= 1.0 - r);
        CHECK(1.0 - r <= d.hi() + 1e-14);
        CHECK(hellinger_factor(a, a) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("coordinate law validation")
{
    CHECK_THROWS_AS(CoordinateLawSeq::constant({0.5, 0.6}), SpecValidationError);
    CHECK_THROWS_AS(CoordinateLawSeq::constant({1.0}), SpecValidationError);
    CHECK_THROWS_AS(CoordinateLawSeq::make({{0.2, 0.8}}, CoordinateTail{{0.5, 0.5}, {1.0, -0.5}, Decay::power(1)}),
                    SpecValidationError);
    CHECK_THROWS_AS(CoordinateLawSeq::make({}, CoordinateTail{{0.5, 0.5}, {1.0, -1.0}, Decay::power(1)}),
                    SpecValidationError);
    const auto ok = CoordinateLawSeq::make({{0.2, 0.8}}, CoordinateTail{{0.5, 0.5}, {1.0, -1.0}, Decay::power(1)});
    CHECK(ok.law(1) == ProbVector{0.2, 0.8});
    CHECK(ok.law(2)[0] == doctest::Approx(1.0));
    CHECK(ok.law(4)[0] == doctest::Approx(0.75));
    CHECK_THROWS_AS(ok.law(0), DomainError);
}

TEST_CASE("digit laws convert to binary coordinate laws")
{
    const auto d = DigitLaw::perturbed(0.5, 1.0, 1.0);
    const auto c = CoordinateLawSeq::from_digits(d);
    for (long k = 1; k < 50; ++k) {
        const auto law = c.law(k);
        CHECK(law[0] == doctest::Approx(d.p0(k)).epsilon(1e-15));
        CHECK(law[1] == doctest::Approx(d.p1(k)).epsilon(1e-15));
    }
}

TEST_CASE("kakutani dichotomy worked cases")
{
    const auto fair = CoordinateLawSeq::from_digits(DigitLaw::constant(0.5));
    SUBCASE("square-summable perturbation")
    {
        const auto nu = CoordinateLawSeq::from_digits(DigitLaw::perturbed(0.5, 1.0, 1.0));
        const auto v = kakutani_dichotomy(fair, nu);
        CHECK(v.outcome == DO::AbsolutelyContinuous);
        CHECK(v.criterion.lower_bound > 0.0);
        CHECK(v.criterion.lower_bound <= v.hellinger_products.back());
    }
    SUBCASE("constant bias")
    {
        const auto nu = CoordinateLawSeq::from_digits(DigitLaw::constant(0.6));
        const auto v = kakutani_dichotomy(fair, nu);
        CHECK(v.outcome == DO::Singular);
        const double rho = std::sqrt(0.3) + std::sqrt(0.2);
        CHECK(v.hellinger_products[9] == doctest::Approx(std::pow(rho, 10)).epsilon(1e-12));
    }
    SUBCASE("identical")
    {
        const auto v = kakutani_dichotomy(fair, fair);
        CHECK(v.outcome == DO::AbsolutelyContinuous);
        CHECK(v.criterion.lower_bound == 1.0);
    }
    SUBCASE("slowly decaying perturbation is singular")
    {
        const auto nu = CoordinateLawSeq::from_digits(DigitLaw::perturbed(0.5, 0.4, 0.5));
        CHECK(kakutani_dichotomy(fair, nu).outcome == DO::Singular);
    }
    SUBCASE("mixed decay families")
    {
        const auto mu = CoordinateLawSeq::make({}, CoordinateTail{{0.5, 0.5}, {0.3, -0.3}, Decay::geometric(0.5)});
        const auto nu = CoordinateLawSeq::make({}, CoordinateTail{{0.5, 0.5}, {0.4, -0.4}, Decay::power(0.4)});
        CHECK(kakutani_dichotomy(mu, nu).outcome == DO::Singular);
        const auto nu2 = CoordinateLawSeq::make({}, CoordinateTail{{0.5, 0.5}, {0.4, -0.4}, Decay::power(0.8)});
        CHECK(kakutani_dichotomy(mu, nu2).outcome == DO::AbsolutelyContinuous);
    }
    SUBCASE("boundary limits compare square roots")
    {
        // mu_k = (1 - 2^-k, 2^-k), nu_k = (1 - 4^-k, 4^-k)
        const auto mu = CoordinateLawSeq::make({}, CoordinateTail{{1.0, 0.0}, {-1.0, 1.0}, Decay::geometric(0.5)});
        const auto nu = CoordinateLawSeq::make({}, CoordinateTail{{1.0, 0.0}, {-1.0, 1.0}, Decay::geometric(0.25)});
        CHECK(kakutani_dichotomy(mu, nu).outcome == DO::AbsolutelyContinuous);
    }
    SUBCASE("every law dominates itself")
    {
        std::mt19937_64 rng(11);
        for (int i = 0; i < 30; ++i) {
            const std::size_t m = 2 + i % 4;
            const auto mu = CoordinateLawSeq::make({random_probability(rng, m), random_probability(rng, m)},
                                                   CoordinateTail{random_probability(rng, m), {}, Decay::none()});
            CHECK(kakutani_dichotomy(mu, mu).outcome == DO::AbsolutelyContinuous);
        }
    }
}

TEST_CASE("domination is enforced")
{
    const auto point = CoordinateLawSeq::constant({1.0, 0.0});
    const auto fair = CoordinateLawSeq::constant({0.5, 0.5});
    CHECK_THROWS_AS(kakutani_dichotomy(point, fair), DominationViolationError);
    CHECK_NOTHROW(kakutani_dichotomy(fair, point));
    CHECK_THROWS_AS(CoordinateLawSeq::make({}, CoordinateTail{{0.5, 0.5}, {-1.5, 1.5}, Decay::power(1)}),
                    SpecValidationError);
    // mu_3(0) = 0.5 - 1.5/3 = 0 exactly
    const auto mu = CoordinateLawSeq::make({{0.5, 0.5}, {0.5, 0.5}},
                                           CoordinateTail{{0.5, 0.5}, {-1.5, 1.5}, Decay::power(1)});
    CHECK_THROWS_AS(check_domination(mu, fair), DominationViolationError);
    CHECK_THROWS_AS(check_domination(fair, CoordinateLawSeq::constant({0.2, 0.3, 0.5})), DimensionMismatchError);
}

TEST_CASE("truncated affinity equals the product of factors")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 40; ++i) {
        const auto mu = CoordinateLawSeq::from_digits(DigitLaw::perturbed(u(rng), u(rng) - 0.5, 0.5 + u(rng)));
        const auto nu = CoordinateLawSeq::from_digits(DigitLaw::constant(0.05 + 0.9 * u(rng)));
        long double prod = 1.0L;
        for (int k = 1; k <= 10; ++k) {
            prod *= hellinger_factor(mu.law(k), nu.law(k));
        }
        CHECK(std::fabs(static_cast<double>(enumerated_affinity(mu, nu, 10) - prod)) <= 1e-10);
    }
    const auto a = CoordinateLawSeq::constant({0.2, 0.3, 0.5});
    const auto b = CoordinateLawSeq::constant({0.4, 0.4, 0.2});
    const double rho = hellinger_factor({0.2, 0.3, 0.5}, {0.4, 0.4, 0.2});
    CHECK(static_cast<double>(enumerated_affinity(a, b, 6)) == doctest::Approx(std::pow(rho, 6)).epsilon(1e-12));
}

TEST_CASE("discreteness")
{
    using R = DiscretenessResult::Outcome;
    SUBCASE("one minus two to the minus k")
    {
        const auto mu =
            CoordinateLawSeq::from_digits(DigitLaw::explicit_prefix({}, DigitTailRule{1.0, -1.0, Decay::geometric(0.5)}));
        const auto r = discreteness_test(mu);
        CHECK(r.outcome == R::Discrete);
        CHECK(r.atom.prefix.empty());
        CHECK(r.atom.tail_symbol == 0);
        CHECK(r.mass_lower_bound == doctest::Approx(0.288788).epsilon(1e-6));
        for (int n : {1, 4, 12}) {
            CHECK(r.mass_lower_bound <= static_cast<double>(enumerated_max_atom(mu, n)));
        }
    }
    SUBCASE("fair digits")
    {
        CHECK(discreteness_test(CoordinateLawSeq::constant({0.5, 0.5})).outcome == R::NotDiscrete);
    }
    SUBCASE("point mass")
    {
        const auto r = discreteness_test(CoordinateLawSeq::constant({1.0, 0.0}));
        CHECK(r.outcome == R::Discrete);
        CHECK(r.mass_lower_bound == 1.0);
        CHECK(r.atom.describe() == "(0,...)");
    }
    SUBCASE("ties break to the lowest symbol")
    {
        const auto mu = CoordinateLawSeq::make({{0.5, 0.5}, {0.1, 0.9}}, CoordinateTail{{0.0, 1.0}, {}, Decay::none()});
        const auto r = discreteness_test(mu);
        CHECK(r.outcome == R::Discrete);
        CHECK(r.atom.prefix == std::vector<int>{0});
        CHECK(r.atom.tail_symbol == 1);
        CHECK(r.atom.symbol(2) == 1);
        CHECK(r.mass_lower_bound == doctest::Approx(0.45));
    }
    SUBCASE("summable minority mass in three letters")
    {
        const auto mu = CoordinateLawSeq::make({}, CoordinateTail{{0.0, 0.0, 1.0}, {0.5, 0.5, -1.0}, Decay::power(2)});
        const auto r = discreteness_test(mu);
        CHECK(r.outcome == R::Discrete);
        CHECK(r.atom.tail_symbol == 2);
        for (int n : {2, 6, 9}) {
            CHECK(r.mass_lower_bound <= static_cast<double>(enumerated_max_atom(mu, n)));
        }
    }
}
