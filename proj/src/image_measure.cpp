#include "bconv/image_measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "bconv/errors.hpp"

namespace bconv {

namespace {

constexpr double kMassTolerance = 1e-12;

void require_same(const FiniteMeasureSpace& a, const FiniteMeasureSpace& b, const char* what)
{
    if (!(a == b)) {
        throw SpaceMismatchError(std::string(what) + ": measures live on different spaces");
    }
}

// Uniform integer in [0, n) and uniform double in [0, 1) from raw engine bits.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t n)
{
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = rng();
    while (x >= limit) {
        x = rng();
    }
    return static_cast<std::size_t>(x % n);
}

double uniform_unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<double> random_masses(std::mt19937_64& rng, std::size_t n)
{
    std::vector<double> w(n);
    for (auto& x : w) {
        x = uniform_index(rng, 3) == 0 ? 0.0 : uniform_unit(rng) + 0x1.0p-20;
    }
    if (std::all_of(w.begin(), w.end(), [](double x) { return x == 0.0; })) {
        w[uniform_index(rng, n)] = 1.0;
    }
    const double s = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& x : w) {
        x /= s;
    }
    return w;
}

std::vector<double> point_mass(std::size_t n, std::size_t at)
{
    std::vector<double> w(n, 0.0);
    w[at] = 1.0;
    return w;
}

// Zero eta wherever tau vanishes so that eta << tau.
std::vector<double> dominated_by(std::vector<double> eta, const std::vector<double>& tau)
{
    for (std::size_t i = 0; i < eta.size(); ++i) {
        if (tau[i] == 0.0) {
            eta[i] = 0.0;
        }
    }
    const double s = std::accumulate(eta.begin(), eta.end(), 0.0);
    if (s == 0.0) {
        return tau;
    }
    for (auto& x : eta) {
        x /= s;
    }
    return eta;
}

LawInstance random_instance(std::mt19937_64& rng, std::uint64_t index)
{
    const std::size_t n = 1 + uniform_index(rng, 8);
    const auto domain = FiniteMeasureSpace::indexed(n, "w");
    auto eta = random_masses(rng, n);
    auto tau = random_masses(rng, n);
    switch (index % 6) {
        case 0: {  // arbitrary function
            const std::size_t m = 1 + uniform_index(rng, 8);
            std::vector<std::size_t> image(n);
            for (auto& q : image) {
                q = uniform_index(rng, m);
            }
            return {{domain, eta}, {domain, tau}, {domain, FiniteMeasureSpace::indexed(m, "q"), image}};
        }
        case 1: {  // permutation
            std::vector<std::size_t> image(n);
            std::iota(image.begin(), image.end(), 0);
            for (std::size_t i = n; i > 1; --i) {
                std::swap(image[i - 1], image[uniform_index(rng, i)]);
            }
            if (uniform_index(rng, 2) == 0) {
                eta = dominated_by(eta, tau);
            }
            return {{domain, eta}, {domain, tau}, {domain, FiniteMeasureSpace::indexed(n, "q"), image}};
        }
        case 2: {  // bijection off a common null set
            const std::size_t live = 1 + uniform_index(rng, n);
            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), 0);
            for (std::size_t i = n; i > 1; --i) {
                std::swap(order[i - 1], order[uniform_index(rng, i)]);
            }
            std::vector<std::size_t> image(n);
            for (std::size_t j = 0; j < n; ++j) {
                image[order[j]] = j < live ? j : uniform_index(rng, live);
            }
            for (std::size_t j = live; j < n; ++j) {
                eta[order[j]] = 0.0;
                tau[order[j]] = 0.0;
            }
            std::vector<double> base = random_masses(rng, live);
            auto spread = [&](std::vector<double>& w) {
                double s = 0.0;
                for (std::size_t j = 0; j < live; ++j) {
                    s += w[order[j]];
                }
                for (std::size_t j = 0; j < live; ++j) {
                    w[order[j]] = s > 0.0 ? w[order[j]] / s : base[j];
                }
            };
            spread(eta);
            spread(tau);
            if (uniform_index(rng, 2) == 0) {
                eta = dominated_by(eta, tau);
            }
            return {{domain, eta}, {domain, tau}, {domain, FiniteMeasureSpace::indexed(live, "q"), image}};
        }
        case 3: {  // constant map
            return {{domain, eta}, {domain, tau}, {domain, FiniteMeasureSpace::indexed(1, "q"), std::vector<std::size_t>(n, 0)}};
        }
        case 4: {  // point masses under an arbitrary map
            const std::size_t m = 1 + uniform_index(rng, 8);
            std::vector<std::size_t> image(n);
            for (auto& q : image) {
                q = uniform_index(rng, m);
            }
            return {{domain, point_mass(n, uniform_index(rng, n))},
                    {domain, point_mass(n, uniform_index(rng, n))},
                    {domain, FiniteMeasureSpace::indexed(m, "q"), image}};
        }
        default: {  // dominated pair under an arbitrary map
            const std::size_t m = 1 + uniform_index(rng, 8);
            std::vector<std::size_t> image(n);
            for (auto& q : image) {
                q = uniform_index(rng, m);
            }
            eta = dominated_by(eta, tau);
            return {{domain, eta}, {domain, tau}, {domain, FiniteMeasureSpace::indexed(m, "q"), image}};
        }
    }
}

}  // namespace

// ---------------------------------------------------------------------------

FiniteMeasureSpace::FiniteMeasureSpace(std::vector<std::string> points) : points_(std::move(points))
{
    std::set<std::string> seen;
    for (const auto& p : points_) {
        if (!seen.insert(p).second) {
            throw SpecValidationError("space.points", "duplicate point identifier '" + p + "'");
        }
    }
}

FiniteMeasureSpace FiniteMeasureSpace::indexed(std::size_t size, const std::string& prefix)
{
    std::vector<std::string> points;
    points.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
        points.push_back(prefix + std::to_string(i));
    }
    return FiniteMeasureSpace(std::move(points));
}

std::size_t FiniteMeasureSpace::index_of(const std::string& point) const
{
    const auto it = std::find(points_.begin(), points_.end(), point);
    if (it == points_.end()) {
        throw DomainError("unknown point '" + point + "'");
    }
    return static_cast<std::size_t>(it - points_.begin());
}

FiniteMeasure::FiniteMeasure(FiniteMeasureSpace space, std::vector<double> mass)
    : space_(std::move(space)), mass_(std::move(mass))
{
    if (mass_.size() != space_.size()) {
        throw SpaceMismatchError("measure has " + std::to_string(mass_.size()) + " masses for " +
                                 std::to_string(space_.size()) + " points");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < mass_.size(); ++i) {
        if (!std::isfinite(mass_[i]) || mass_[i] < 0.0) {
            throw SpecValidationError("mass[" + std::to_string(i) + "]", "must be finite and >= 0");
        }
        total += mass_[i];
    }
    if (std::fabs(total - 1.0) > kMassTolerance) {
        throw SpecValidationError("mass", "total mass must be 1");
    }
}

PointMap::PointMap(FiniteMeasureSpace domain, FiniteMeasureSpace codomain, std::vector<std::size_t> image)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), image_(std::move(image))
{
    if (image_.size() != domain_.size()) {
        throw SpaceMismatchError("map must assign an image to every domain point");
    }
    for (std::size_t q : image_) {
        if (q >= codomain_.size()) {
            throw SpaceMismatchError("map image outside the codomain");
        }
    }
}

bool PointMap::bijective() const
{
    if (domain_.size() != codomain_.size()) {
        return false;
    }
    std::vector<bool> hit(codomain_.size(), false);
    for (std::size_t q : image_) {
        if (hit[q]) {
            return false;
        }
        hit[q] = true;
    }
    return true;
}

FiniteMeasure pushforward(const FiniteMeasure& m, const PointMap& f)
{
    require_same(m.space(), f.domain(), "pushforward");
    std::vector<long double> acc(f.codomain().size(), 0.0L);
    for (std::size_t i = 0; i < m.space().size(); ++i) {
        acc[f(i)] += m.mass(i);
    }
    std::vector<double> out(acc.begin(), acc.end());
    return {f.codomain(), out};
}

bool abs_continuous(const FiniteMeasure& m1, const FiniteMeasure& m2)
{
    require_same(m1.space(), m2.space(), "abs_continuous");
    for (std::size_t i = 0; i < m1.space().size(); ++i) {
        if (m2.null_at(i) && !m1.null_at(i)) {
            return false;
        }
    }
    return true;
}

bool mutually_singular(const FiniteMeasure& m1, const FiniteMeasure& m2)
{
    require_same(m1.space(), m2.space(), "mutually_singular");
    for (std::size_t i = 0; i < m1.space().size(); ++i) {
        if (!m1.null_at(i) && !m2.null_at(i)) {
            return false;
        }
    }
    return true;
}

bool bijective_off_common_null_set(const FiniteMeasure& eta, const FiniteMeasure& tau, const PointMap& f)
{
    require_same(eta.space(), tau.space(), "bijective_off_common_null_set");
    require_same(eta.space(), f.domain(), "bijective_off_common_null_set");
    // Charged points must stay and map injectively; every missed codomain
    // point must be reachable from a removable point.
    std::vector<int> charged_hits(f.codomain().size(), 0);
    std::vector<bool> spare(f.codomain().size(), false);
    for (std::size_t i = 0; i < f.domain().size(); ++i) {
        if (eta.null_at(i) && tau.null_at(i)) {
            spare[f(i)] = true;
        } else if (++charged_hits[f(i)] > 1) {
            return false;
        }
    }
    for (std::size_t q = 0; q < f.codomain().size(); ++q) {
        if (charged_hits[q] == 0 && !spare[q]) {
            return false;
        }
    }
    return true;
}

const std::vector<std::string>& law_names()
{
    static const std::vector<std::string> names = {
        "absolute continuity carries over to images",
        "singular images have singular preimages",
        "bijections preserve both relations",
        "bijections off a common null set preserve both relations",
    };
    return names;
}

bool LawReport::any_violation() const
{
    return std::any_of(laws.begin(), laws.end(), [](const LawResult& l) { return l.violated(); });
}

LawReport check_preservation_laws(const FiniteMeasure& eta, const FiniteMeasure& tau, const PointMap& f)
{
    require_same(eta.space(), tau.space(), "check_preservation_laws");
    require_same(eta.space(), f.domain(), "check_preservation_laws");
    const FiniteMeasure eta_img = pushforward(eta, f);
    const FiniteMeasure tau_img = pushforward(tau, f);

    LawReport r;
    r.eta_ll_tau = abs_continuous(eta, tau);
    r.eta_perp_tau = mutually_singular(eta, tau);
    r.image_ll = abs_continuous(eta_img, tau_img);
    r.image_perp = mutually_singular(eta_img, tau_img);
    const bool both_equivalent = (r.eta_ll_tau == r.image_ll) && (r.eta_perp_tau == r.image_perp);

    const auto& names = law_names();
    r.laws.push_back({names[0], r.eta_ll_tau, r.image_ll});
    r.laws.push_back({names[1], r.image_perp, r.eta_perp_tau});
    r.laws.push_back({names[2], f.bijective(), both_equivalent});
    r.laws.push_back({names[3], bijective_off_common_null_set(eta, tau, f), both_equivalent});
    return r;
}

LawInstance converse_witness()
{
    const FiniteMeasureSpace domain({"a", "b"});
    const FiniteMeasureSpace codomain({"c"});
    return {{domain, {1.0, 0.0}}, {domain, {0.0, 1.0}}, {domain, codomain, {0, 0}}};
}

std::uint64_t LawSuiteResult::total_violations() const
{
    std::uint64_t v = 0;
    for (const auto& t : tallies) {
        v += t.violations;
    }
    return v;
}

LawSuiteResult run_law_suite(std::uint64_t instances, std::uint64_t seed)
{
    LawSuiteResult result;
    result.instances = instances;
    result.seed = seed;
    for (const auto& name : law_names()) {
        result.tallies.push_back({name, 0, 0, 0});
    }
    std::mt19937_64 rng(seed);
    for (std::uint64_t i = 0; i < instances; ++i) {
        const LawInstance inst = random_instance(rng, i);
        const LawReport r = check_preservation_laws(inst.eta, inst.tau, inst.f);
        for (std::size_t j = 0; j < r.laws.size(); ++j) {
            auto& t = result.tallies[j];
            if (r.laws[j].hypothesis) {
                ++t.hypothesis_held;
                if (r.laws[j].conclusion) {
                    ++t.conclusion_held;
                } else {
                    ++t.violations;
                }
            }
        }
        if (r.eta_perp_tau && r.image_ll) {
            ++result.converse_failures;
        }
    }
    const LawInstance w = converse_witness();
    const LawReport wr = check_preservation_laws(w.eta, w.tau, w.f);
    result.witness_passed = wr.eta_perp_tau && wr.image_ll && !wr.eta_ll_tau && !wr.any_violation();
    return result;
}

}  // namespace bconv
