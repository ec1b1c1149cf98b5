#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bconv/errors.hpp"
#include "bconv/image_measure.hpp"

using namespace bconv;

namespace {

const FiniteMeasureSpace kTwo({"x", "y"});
const FiniteMeasureSpace kThree({"1", "2", "3"});

}  // namespace

TEST_CASE("spaces and measures validate")
{
    CHECK_THROWS_AS(FiniteMeasureSpace({"a", "a"}), SpecValidationError);
    CHECK_THROWS_AS(FiniteMeasure(kTwo, {0.5, 0.6}), SpecValidationError);
    CHECK_THROWS_AS(FiniteMeasure(kTwo, {1.5, -0.5}), SpecValidationError);
    CHECK_THROWS_AS(FiniteMeasure(kTwo, {1.0}), SpaceMismatchError);
    CHECK_THROWS_AS(PointMap(kTwo, kThree, {0}), SpaceMismatchError);
    CHECK_THROWS_AS(PointMap(kTwo, kThree, {0, 3}), SpaceMismatchError);
    const FiniteMeasure m(kThree, {0.25, 0.25, 0.5});
    CHECK(m.mass("3") == 0.5);
    CHECK_THROWS_AS(m.mass("4"), DomainError);
}

TEST_CASE("pushforward")
{
    const FiniteMeasure m(kThree, {0.5, 0.25, 0.25});
    SUBCASE("identity")
    {
        const PointMap id(kThree, kThree, {0, 1, 2});
        CHECK(pushforward(m, id).mass() == m.mass());
        CHECK(id.bijective());
    }
    SUBCASE("constant map")
    {
        const PointMap c(kThree, FiniteMeasureSpace({"q0"}), {0, 0, 0});
        CHECK(pushforward(m, c).mass() == std::vector<double>{1.0});
        CHECK_FALSE(c.bijective());
    }
    SUBCASE("merging two points")
    {
        const PointMap f(kThree, FiniteMeasureSpace({"a", "b"}), {0, 0, 1});
        const auto img = pushforward(m, f);
        CHECK(img.mass("a") == 0.75);
        CHECK(img.mass("b") == 0.25);
    }
    SUBCASE("wrong domain")
    {
        const PointMap f(kTwo, kTwo, {0, 1});
        CHECK_THROWS_AS(pushforward(m, f), SpaceMismatchError);
    }
}

TEST_CASE("absolute continuity and singularity")
{
    const FiniteMeasure a(kTwo, {1.0, 0.0});
    const FiniteMeasure b(kTwo, {0.0, 1.0});
    CHECK(abs_continuous(a, a));
    CHECK_FALSE(abs_continuous(a, b));
    CHECK(abs_continuous(FiniteMeasure(kThree, {0.5, 0.5, 0.0}), FiniteMeasure(kThree, {1 / 3.0, 1 / 3.0, 1 / 3.0})));
    CHECK(mutually_singular(a, b));
    CHECK_FALSE(mutually_singular(FiniteMeasure(kTwo, {0.5, 0.5}), FiniteMeasure(kTwo, {0.5, 0.5})));
    CHECK(mutually_singular(FiniteMeasure(kThree, {0.5, 0.5, 0.0}), FiniteMeasure(kThree, {0.0, 0.0, 1.0})));
    CHECK_THROWS_AS(abs_continuous(a, FiniteMeasure(kThree, {1.0, 0.0, 0.0})), SpaceMismatchError);
    CHECK_THROWS_AS(mutually_singular(a, FiniteMeasure(kThree, {1.0, 0.0, 0.0})), SpaceMismatchError);
}

TEST_CASE("law report on worked instances")
{
    SUBCASE("bijection with dominated pair")
    {
        const PointMap swap(kThree, kThree, {2, 0, 1});
        const FiniteMeasure eta(kThree, {0.5, 0.5, 0.0});
        const FiniteMeasure tau(kThree, {0.2, 0.3, 0.5});
        const auto r = check_preservation_laws(eta, tau, swap);
        CHECK(r.eta_ll_tau);
        CHECK(r.image_ll);
        CHECK(r.laws[2].hypothesis);
        CHECK(r.laws[2].conclusion);
        CHECK_FALSE(r.any_violation());
    }
    SUBCASE("constant map merges singular measures")
    {
        const auto w = converse_witness();
        const auto r = check_preservation_laws(w.eta, w.tau, w.f);
        CHECK(r.eta_perp_tau);
        CHECK_FALSE(r.image_perp);
        CHECK(r.image_ll);
        CHECK_FALSE(r.laws[1].hypothesis);
        CHECK_FALSE(r.any_violation());
    }
    SUBCASE("bijection off a common null set")
    {
        // w2 carries no mass under either measure and shares its image with w0
        const FiniteMeasureSpace d({"w0", "w1", "w2"});
        const PointMap f(d, kTwo, {0, 1, 0});
        const FiniteMeasure eta(d, {0.0, 1.0, 0.0});
        const FiniteMeasure tau(d, {0.4, 0.6, 0.0});
        CHECK(bijective_off_common_null_set(eta, tau, f));
        CHECK_FALSE(f.bijective());
        const auto r = check_preservation_laws(eta, tau, f);
        CHECK(r.laws[3].hypothesis);
        CHECK(r.laws[3].conclusion);
        // a charged point cannot be dropped
        CHECK_FALSE(bijective_off_common_null_set(eta, FiniteMeasure(d, {0.4, 0.3, 0.3}), f));
        // missed codomain point
        const PointMap g(d, FiniteMeasureSpace({"u", "v", "z"}), {0, 1, 0});
        CHECK_FALSE(bijective_off_common_null_set(eta, tau, g));
    }
    SUBCASE("space mismatch")
    {
        const FiniteMeasure eta(kTwo, {0.5, 0.5});
        const FiniteMeasure tau(kThree, {0.2, 0.3, 0.5});
        CHECK_THROWS_AS(check_preservation_laws(eta, tau, PointMap(kTwo, kTwo, {0, 1})), SpaceMismatchError);
    }
}

TEST_CASE("randomized law suite")
{
    const auto r = run_law_suite(10000, 12345);
    CHECK(r.total_violations() == 0);
    CHECK(r.witness_passed);
    for (const auto& t : r.tallies) {
        CHECK(t.hypothesis_held > 100);
    }
    CHECK(r.converse_failures > 0);
    const auto again = run_law_suite(10000, 12345);
    for (std::size_t i = 0; i < r.tallies.size(); ++i) {
        CHECK(again.tallies[i].hypothesis_held == r.tallies[i].hypothesis_held);
    }
}
