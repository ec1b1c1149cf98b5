#pragma once

// Image measures on finite spaces with the power-set sigma-algebra, where
// absolute continuity and singularity are decidable by inspecting supports.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace bconv {

class FiniteMeasureSpace {
public:
    explicit FiniteMeasureSpace(std::vector<std::string> points);
    // Points named "0", "1", ...
    static FiniteMeasureSpace indexed(std::size_t size, const std::string& prefix = "");

    std::size_t size() const { return points_.size(); }
    const std::vector<std::string>& points() const { return points_; }
    std::size_t index_of(const std::string& point) const;

    friend bool operator==(const FiniteMeasureSpace&, const FiniteMeasureSpace&) = default;

private:
    std::vector<std::string> points_;
};

class FiniteMeasure {
public:
    FiniteMeasure(FiniteMeasureSpace space, std::vector<double> mass);

    const FiniteMeasureSpace& space() const { return space_; }
    const std::vector<double>& mass() const { return mass_; }
    double mass(std::size_t i) const { return mass_[i]; }
    double mass(const std::string& point) const { return mass_[space_.index_of(point)]; }
    bool null_at(std::size_t i) const { return mass_[i] == 0.0; }

private:
    FiniteMeasureSpace space_;
    std::vector<double> mass_;
};

class PointMap {
public:
    PointMap(FiniteMeasureSpace domain, FiniteMeasureSpace codomain, std::vector<std::size_t> image);

    const FiniteMeasureSpace& domain() const { return domain_; }
    const FiniteMeasureSpace& codomain() const { return codomain_; }
    std::size_t operator()(std::size_t i) const { return image_[i]; }
    const std::vector<std::size_t>& image() const { return image_; }

    bool bijective() const;

private:
    FiniteMeasureSpace domain_;
    FiniteMeasureSpace codomain_;
    std::vector<std::size_t> image_;
};

FiniteMeasure pushforward(const FiniteMeasure& m, const PointMap& f);
// m1 << m2
bool abs_continuous(const FiniteMeasure& m1, const FiniteMeasure& m2);
bool mutually_singular(const FiniteMeasure& m1, const FiniteMeasure& m2);

// True when some set of points null for both measures can be removed so the
// map becomes a bijection from the rest onto the codomain.
bool bijective_off_common_null_set(const FiniteMeasure& eta, const FiniteMeasure& tau, const PointMap& f);

struct LawResult {
    std::string name;
    bool hypothesis = false;  // premise held on this instance
    bool conclusion = false;  // guaranteed conclusion held
    bool violated() const { return hypothesis && !conclusion; }
};

struct LawReport {
    bool eta_ll_tau = false;
    bool eta_perp_tau = false;
    bool image_ll = false;
    bool image_perp = false;
    std::vector<LawResult> laws;  // fixed order, see law_names()

    bool any_violation() const;
};

const std::vector<std::string>& law_names();
LawReport check_preservation_laws(const FiniteMeasure& eta, const FiniteMeasure& tau, const PointMap& f);

struct LawInstance {
    FiniteMeasure eta;
    FiniteMeasure tau;
    PointMap f;
};

// eta and tau singular, their images equivalent: the converse of
// preservation of absolute continuity fails.
LawInstance converse_witness();

struct LawTally {
    std::string name;
    std::uint64_t hypothesis_held = 0;
    std::uint64_t conclusion_held = 0;
    std::uint64_t violations = 0;
};

struct LawSuiteResult {
    std::uint64_t instances = 0;
    std::uint64_t seed = 0;
    std::vector<LawTally> tallies;
    std::uint64_t converse_failures = 0;  // eta perp tau while eta* << tau*
    bool witness_passed = false;

    std::uint64_t total_violations() const;
};

// Seeded random instances: spaces of 1..8 points, masses vanishing with
// probability 1/3, maps drawn from several generators in rotation.
LawSuiteResult run_law_suite(std::uint64_t instances, std::uint64_t seed);

}  // namespace bconv
