#include "bconv/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "bconv/classifier.hpp"
#include "bconv/errors.hpp"
#include "bconv/evaluator.hpp"
#include "bconv/image_measure.hpp"
#include "bconv/oracle.hpp"
#include "bconv/spec_io.hpp"
#include "bconv/support.hpp"

namespace bconv {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSpec = 2;
constexpr int kExitHypothesis = 3;

std::string num(double x)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

Json interval_json(const Interval& iv) { return Json::array({iv.lo(), iv.hi()}); }

Json series_json(const SeriesVerdict& v)
{
    return Json{{"outcome", to_string(v.outcome)},
                {"certified", v.certified()},
                {"sum_bound", v.outcome == SeriesVerdict::Outcome::Converges ? interval_json(v.sum_bound) : Json()},
                {"partial_sum", v.partial_sum},
                {"terms_examined", v.terms_examined},
                {"rule", v.rule}};
}

Json product_json(const ProductVerdict& v)
{
    return Json{{"outcome", to_string(v.outcome)},
                {"certified", v.certified()},
                {"lower_bound", v.lower_bound},
                {"upper_bound", v.upper_bound},
                {"partial_product", v.partial_product},
                {"factors_examined", v.factors_examined},
                {"deficit", series_json(v.deficit)}};
}

// Everything a subcommand needs besides its own flags.
struct Invocation {
    std::string command;
    std::string spec_source;
    std::optional<ConvolutionSpec> spec;
    std::optional<std::uint64_t> seed;
    Json result = Json::object();
    std::vector<std::string> warnings;
    std::string out_path;
    bool csv = false;
    std::string text;  // replaces the JSON report when set (CSV, samples)
    int exit_code = kExitOk;
};

Json report_json(const Invocation& inv)
{
    Json j;
    j["command"] = inv.command;
    j["tool_version"] = kToolVersion;
    j["spec"] = inv.spec ? spec_to_json(*inv.spec) : Json();
    if (inv.seed) {
        j["seed"] = *inv.seed;
    }
    j["result"] = inv.result;
    j["warnings"] = inv.warnings;
    return j;
}

Json error_json(const std::string& command, const std::string& kind, const std::string& message,
                const std::string& field = "")
{
    Json e{{"kind", kind}, {"message", message}};
    if (!field.empty()) {
        e["field"] = field;
    }
    return Json{{"command", command}, {"tool_version", kToolVersion}, {"error", e}};
}

void emit(const std::string& text, const std::string& path, std::ostream& out)
{
    if (path.empty()) {
        out << text;
        return;
    }
    // write beside the target, then rename, so readers never see a partial file
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw DomainError("cannot write '" + path + "'");
        }
        f << text;
    }
    std::filesystem::rename(tmp, path);
}

std::vector<double> linspace(double from, double to, int points)
{
    if (points < 1) {
        throw DomainError("--points must be >= 1");
    }
    std::vector<double> xs;
    for (int i = 0; i < points; ++i) {
        xs.push_back(points == 1 ? from : from + (to - from) * i / (points - 1));
    }
    return xs;
}

// ---------------------------------------------------------------------------
// subcommands

void cmd_classify(Invocation& inv, bool strict, std::optional<double> p)
{
    ClassifyOptions options;
    options.strict = strict;
    const auto v = classify(*inv.spec, options);
    Json certs = Json::array();
    for (const auto& c : v.certificates) {
        Json cj{{"criterion", c.criterion}, {"certified", c.certified}, {"series", series_json(c.series)}};
        if (c.product) {
            cj["product"] = product_json(*c.product);
        }
        certs.push_back(cj);
    }
    auto& r = inv.result;
    r["outcome"] = to_string(v.outcome);
    r["certificates"] = certs;
    r["hypotheses"] = Json{{"gaps_strict", to_string(v.hypotheses.gaps_strict)},
                           {"gaps_weak", to_string(v.hypotheses.gaps_weak)},
                           {"boundary", v.hypotheses.boundary},
                           {"notes", v.hypotheses.notes}};
    if (v.discreteness && v.discreteness->outcome == DiscretenessResult::Outcome::Discrete) {
        r["atom"] = Json{{"digits", v.discreteness->atom.describe()},
                         {"mass_lower_bound", v.discreteness->mass_lower_bound}};
    }
    r["purity"] = v.purity;
    const auto ae = report_ae_lambda(inv.spec->digits, p);
    r["ae_lambda"] = Json{{"condition", series_json(ae.condition)},
                          {"p", ae.p ? Json(*ae.p) : Json()},
                          {"center", ae.center},
                          {"threshold", ae.threshold},
                          {"applies", ae.applies},
                          {"conclusion", ae.conclusion}};
    for (const auto& n : v.hypotheses.notes) {
        inv.warnings.push_back(n);
    }
    if (v.hypotheses.gaps_weak != Certainty::Yes && v.outcome == ClassificationVerdict::Outcome::Indeterminate) {
        inv.exit_code = kExitHypothesis;
    }
}

void cmd_support(Invocation& inv, int level)
{
    const auto& spec = *inv.spec;
    const auto approx = cylinders(spec, level);
    if (inv.csv) {
        std::string text = "lo,hi\n";
        for (const auto& s : approx.intervals) {
            text += num(s.lo) + "," + num(s.hi) + "\n";
        }
        inv.text = text;
    }
    auto& r = inv.result;
    r["cylinders"] = Json{{"level", approx.level},
                          {"cylinder_count", approx.cylinder_count},
                          {"cylinder_length", interval_json(approx.cylinder_length)},
                          {"interval_count", approx.intervals.size()},
                          {"gap_count", approx.gap_count},
                          {"total_length", interval_json(approx.total_length)}};
    const auto u = unique_representation(spec);
    r["uniqueness"] = Json{{"outcome", to_string(u.outcome)}, {"reason", u.reason}};
    const auto nd = nowhere_dense_verdict(spec);
    r["nowhere_dense"] = Json{{"outcome", to_string(nd.outcome)}, {"reason", nd.reason}};
}

void cmd_measure(Invocation& inv)
{
    const auto m = support_measure(*inv.spec);
    inv.result = Json{{"outcome", to_string(m.outcome)},
                      {"value", m.outcome == SupportMeasure::Outcome::Positive ? interval_json(m.value) : Json(0.0)},
                      {"terms_used", m.terms_used},
                      {"criterion", series_json(m.criterion)},
                      {"reason", m.reason}};
    if (m.outcome == SupportMeasure::Outcome::Indeterminate) {
        inv.result["value"] = Json();
    }
}

void cmd_dimension(Invocation& inv, const std::string& variant_name, long horizon)
{
    DimensionVariant variant;
    if (variant_name == "log-corrected") {
        variant = DimensionVariant::LogCorrected;
    } else if (variant_name == "as-printed") {
        variant = DimensionVariant::AsPrinted;
    } else {
        throw DomainError("--variant must be log-corrected or as-printed");
    }
    const auto e = dimension_estimate(*inv.spec, variant, horizon);
    inv.result = Json{{"variant", to_string(e.variant)},
                      {"liminf", e.liminf_value},
                      {"limsup", e.limsup_value},
                      {"terms_used", e.terms_used},
                      {"limit", e.limit ? Json(*e.limit) : Json()}};
    inv.warnings.insert(inv.warnings.end(), e.warnings.begin(), e.warnings.end());
}

void cmd_cdf(Invocation& inv, std::optional<double> from, std::optional<double> to, int points, long horizon)
{
    const double total = inv.spec->scales.total();
    const auto xs = linspace(from.value_or(0.0), to.value_or(total), points);
    Json values = Json::array();
    std::string text = "x,cdf_lo,cdf_hi\n";
    for (double x : xs) {
        const Interval f = cdf(*inv.spec, x, horizon);
        values.push_back(Json{{"x", x}, {"cdf", interval_json(f)}});
        text += num(x) + "," + num(f.lo()) + "," + num(f.hi()) + "\n";
    }
    inv.result = Json{{"horizon", horizon}, {"values", values}};
    if (inv.csv) {
        inv.text = text;
    }
}

void cmd_charfn(Invocation& inv, std::optional<double> from, std::optional<double> to, int points, double tol)
{
    const auto ts = linspace(from.value_or(0.0), to.value_or(50.0), points);
    Json values = Json::array();
    std::string text = "t,re,im,radius\n";
    for (double t : ts) {
        const auto b = char_fn(*inv.spec, t, tol);
        values.push_back(Json{{"t", t},
                              {"re", b.center.real()},
                              {"im", b.center.imag()},
                              {"modulus", std::abs(b.center)},
                              {"radius", b.radius},
                              {"factors", b.factors}});
        text += num(t) + "," + num(b.center.real()) + "," + num(b.center.imag()) + "," + num(b.radius) + "\n";
    }
    inv.result = Json{{"tol", tol}, {"values", values}};
    if (inv.csv) {
        inv.text = text;
    }
}

void cmd_moments(Invocation& inv)
{
    const auto m = moments(*inv.spec);
    inv.result = Json{{"mean", interval_json(m.mean)}, {"variance", interval_json(m.variance)}, {"terms", m.terms}};
}

void cmd_sample(Invocation& inv, std::size_t count, std::optional<long> horizon, double resolution, bool as_json)
{
    const long h = horizon.value_or(horizon_for_resolution(*inv.spec, resolution));
    const auto xs = sample(*inv.spec, count, *inv.seed, h);
    long double mean = 0.0L;
    for (double x : xs) {
        mean += x;
    }
    inv.result = Json{{"count", count},
                      {"horizon", h},
                      {"truncation", inv.spec->scales.tail_sum(h).hi()},
                      {"mean", count ? static_cast<double>(mean / count) : 0.0}};
    if (as_json) {
        inv.result["values"] = xs;
        return;
    }
    std::string text;
    for (double x : xs) {
        text += num(x) + "\n";
    }
    inv.text = text;
}

void cmd_laws(Invocation& inv, std::uint64_t instances)
{
    const auto s = run_law_suite(instances, *inv.seed);
    Json tallies = Json::array();
    for (const auto& t : s.tallies) {
        tallies.push_back(Json{{"law", t.name},
                               {"hypothesis_held", t.hypothesis_held},
                               {"conclusion_held", t.conclusion_held},
                               {"violations", t.violations}});
    }
    inv.result = Json{{"instances", s.instances},
                      {"tallies", tallies},
                      {"total_violations", s.total_violations()},
                      {"converse_failures", s.converse_failures},
                      {"witness_passed", s.witness_passed}};
}

void cmd_demo(Invocation& inv, double p, double lambda, int level, double cell)
{
    const auto d = counterexample_demo(p, lambda, level, cell);
    Json cells = Json::array();
    std::string text = "cell_lo,cell_hi,fair,biased\n";
    for (std::size_t j = 0; j < d.fair_histogram.size(); ++j) {
        const double lo = cell * static_cast<double>(j);
        const double hi = cell * static_cast<double>(j + 1);
        cells.push_back(Json{{"lo", lo}, {"hi", hi}, {"fair", d.fair_histogram[j]}, {"biased", d.biased_histogram[j]}});
        text += num(lo) + "," + num(hi) + "," + num(d.fair_histogram[j]) + "," + num(d.biased_histogram[j]) + "\n";
    }
    inv.result = Json{{"p", d.p},
                      {"lambda", d.lambda},
                      {"level", d.level},
                      {"cell", d.cell},
                      {"hellinger_factor", d.factor},
                      {"singularity",
                       {{"outcome", to_string(d.singularity.outcome)},
                        {"criterion", product_json(d.singularity.criterion)},
                        {"partial_products", d.singularity.hellinger_products}}},
                      {"histogram", cells},
                      {"overlap", d.overlap},
                      {"all_cells_positive", d.all_cells_positive},
                      {"conclusion", d.conclusion}};
    if (inv.csv) {
        inv.text = text;
    }
}

void cmd_box_count(Invocation& inv, int level, double box)
{
    const auto b = box_count(*inv.spec, level, box);
    inv.result = Json{{"level", level}, {"box_size", b.box_size}, {"occupied", b.occupied}, {"dim_estimate", b.dim_estimate}};
}

void cmd_hellinger(Invocation& inv, const ConvolutionSpec& other, int level)
{
    const auto mu = CoordinateLawSeq::from_digits(inv.spec->digits);
    const auto nu = CoordinateLawSeq::from_digits(other.digits);
    const double enumerated = truncated_hellinger(mu, nu, level);
    long double product = 1.0L;
    for (int k = 1; k <= level; ++k) {
        product *= hellinger_factor(mu.law(k), nu.law(k));
    }
    inv.result = Json{{"level", level},
                      {"other_spec", spec_to_json(other)},
                      {"enumerated", enumerated},
                      {"product", static_cast<double>(product)},
                      {"difference", std::abs(enumerated - static_cast<double>(product))}};
}

void cmd_compare_cdf(Invocation& inv, int level, int grid, long horizon)
{
    if (grid < 2) {
        throw DomainError("--grid must be >= 2");
    }
    const auto c = compare_cdf(*inv.spec, level, static_cast<std::size_t>(grid), horizon);
    inv.result = Json{{"level", c.level},
                      {"grid", c.grid},
                      {"horizon", horizon},
                      {"tail_radius", c.tail_radius},
                      {"max_violation", c.max_violation},
                      {"worst_x", c.worst_x},
                      {"max_width", c.max_width}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Generalized Bernoulli convolutions: classification, support geometry and evaluation", "bconv"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    Invocation inv;
    std::string other_spec;
    int level = -1;
    long horizon = -1;
    std::uint64_t seed = 0;
    double tol = 1e-9;
    std::string variant = "log-corrected";
    int grid = 200;
    std::optional<double> from;
    std::optional<double> to;
    int points = 11;
    bool strict = false;
    std::optional<double> p_opt;
    std::size_t count = 1000;
    double resolution = 1e-12;
    bool as_json = false;
    std::uint64_t instances = 10000;
    double p = 0.4;
    double lambda = 0.8;
    double cell = 0.25;
    double box = 0.0;

    auto add_spec = [&](CLI::App* sub) {
        sub->add_option("spec", inv.spec_source, "spec JSON file or catalog:<name>")->required();
    };
    auto add_out = [&](CLI::App* sub) { sub->add_option("--out", inv.out_path, "write output to this file"); };
    auto add_csv = [&](CLI::App* sub) { sub->add_flag("--csv", inv.csv, "emit CSV instead of JSON"); };

    auto* classify_cmd = app.add_subcommand("classify", "discrete / absolutely continuous / singular verdict");
    add_spec(classify_cmd);
    add_out(classify_cmd);
    classify_cmd->add_flag("--strict", strict, "fail when delta_k >= 1 is not certified");
    classify_cmd->add_option("--p", p_opt, "bias parameter for the almost-every-lambda report, in [1/3, 2/3]");

    auto* support_cmd = app.add_subcommand("support", "cylinder approximation, nowhere density, uniqueness");
    add_spec(support_cmd);
    add_out(support_cmd);
    add_csv(support_cmd);
    support_cmd->add_option("--level", level, "cylinder level (default 12, max 22)");

    auto* measure_cmd = app.add_subcommand("measure", "Lebesgue measure of the support");
    add_spec(measure_cmd);
    add_out(measure_cmd);

    auto* dimension_cmd = app.add_subcommand("dimension", "dimension of the support");
    add_spec(dimension_cmd);
    add_out(dimension_cmd);
    dimension_cmd->add_option("--variant", variant, "log-corrected (default) or as-printed");
    dimension_cmd->add_option("--horizon", horizon, "number of terms (default 10000)");

    auto* cdf_cmd = app.add_subcommand("cdf", "distribution function on a grid");
    add_spec(cdf_cmd);
    add_out(cdf_cmd);
    add_csv(cdf_cmd);
    cdf_cmd->add_option("--from", from, "first x (default 0)");
    cdf_cmd->add_option("--to", to, "last x (default r_0)");
    cdf_cmd->add_option("--points", points, "grid points (default 11)");
    cdf_cmd->add_option("--horizon", horizon, "digits examined (default 40)");

    auto* charfn_cmd = app.add_subcommand("charfn", "characteristic function on a grid");
    add_spec(charfn_cmd);
    add_out(charfn_cmd);
    add_csv(charfn_cmd);
    charfn_cmd->add_option("--from", from, "first t (default 0)");
    charfn_cmd->add_option("--to", to, "last t (default 50)");
    charfn_cmd->add_option("--points", points, "grid points (default 11)");
    charfn_cmd->add_option("--tol", tol, "truncation tolerance (default 1e-9)");

    auto* moments_cmd = app.add_subcommand("moments", "mean and variance");
    add_spec(moments_cmd);
    add_out(moments_cmd);

    auto* sample_cmd = app.add_subcommand("sample", "seeded samples, one value per line");
    add_spec(sample_cmd);
    add_out(sample_cmd);
    sample_cmd->add_option("--count", count, "number of samples (default 1000)");
    sample_cmd->add_option("--seed", seed, "random seed (default 0)");
    sample_cmd->add_option("--horizon", horizon, "digits per sample (default: from --tol)");
    sample_cmd->add_option("--tol", resolution, "truncation error r_horizon (default 1e-12)");
    sample_cmd->add_flag("--json", as_json, "emit a JSON report with the values");

    auto* laws_cmd = app.add_subcommand("laws", "random finite-space checks of the image-measure laws");
    add_out(laws_cmd);
    laws_cmd->add_option("--instances", instances, "number of instances (default 10000)");
    laws_cmd->add_option("--seed", seed, "random seed (default 0)");

    auto* demo_cmd = app.add_subcommand("demo-counterexample", "singular digit laws with overlapping images");
    add_out(demo_cmd);
    add_csv(demo_cmd);
    demo_cmd->add_option("--p", p, "bias in [1/3, 2/3], not 1/2 (default 0.4)");
    demo_cmd->add_option("--lambda", lambda, "scale ratio in (1/2, 1) (default 0.8)");
    demo_cmd->add_option("--level", level, "enumeration level (default 20, max 24)");
    demo_cmd->add_option("--cell", cell, "histogram cell width (default 0.25)");

    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force reference computations");
    oracle_cmd->require_subcommand(1);
    auto* box_cmd = oracle_cmd->add_subcommand("box-count", "boxes meeting the level-n cylinders");
    add_spec(box_cmd);
    add_out(box_cmd);
    box_cmd->add_option("--level", level, "cylinder level (default 12, max 22)");
    box_cmd->add_option("--box", box, "box size, at least r_level")->required();
    auto* hell_cmd = oracle_cmd->add_subcommand("hellinger", "enumerated Hellinger integral of two digit laws");
    add_spec(hell_cmd);
    hell_cmd->add_option("other", other_spec, "second spec (its digit law)")->required();
    add_out(hell_cmd);
    hell_cmd->add_option("--level", level, "number of coordinates (default 12, max 20)");
    auto* cmp_cmd = oracle_cmd->add_subcommand("compare-cdf", "distribution function against enumeration");
    add_spec(cmp_cmd);
    add_out(cmp_cmd);
    cmp_cmd->add_option("--level", level, "enumeration level (default 16, max 24)");
    cmp_cmd->add_option("--grid", grid, "grid points (default 200)");
    cmp_cmd->add_option("--horizon", horizon, "digits examined by the distribution function (default 40)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    auto* sub = app.get_subcommands().front();
    inv.command = sub->get_name();
    if (sub == oracle_cmd) {
        inv.command += " " + oracle_cmd->get_subcommands().front()->get_name();
    }
    auto pick = [](int value, int fallback) { return value >= 0 ? value : fallback; };
    auto pick_long = [](long value, long fallback) { return value >= 0 ? value : fallback; };

    try {
        if (!inv.spec_source.empty()) {
            inv.spec = load_spec(inv.spec_source);
        }
        try {
            if (sub == classify_cmd) {
                cmd_classify(inv, strict, p_opt);
            } else if (sub == support_cmd) {
                cmd_support(inv, pick(level, 12));
            } else if (sub == measure_cmd) {
                cmd_measure(inv);
            } else if (sub == dimension_cmd) {
                cmd_dimension(inv, variant, pick_long(horizon, 10000));
            } else if (sub == cdf_cmd) {
                cmd_cdf(inv, from, to, points, pick_long(horizon, 40));
            } else if (sub == charfn_cmd) {
                cmd_charfn(inv, from, to, points, tol);
            } else if (sub == moments_cmd) {
                cmd_moments(inv);
            } else if (sub == sample_cmd) {
                inv.seed = seed;
                cmd_sample(inv, count, horizon >= 0 ? std::optional<long>(horizon) : std::nullopt, resolution,
                           as_json);
            } else if (sub == laws_cmd) {
                inv.seed = seed;
                cmd_laws(inv, instances);
            } else if (sub == demo_cmd) {
                cmd_demo(inv, p, lambda, pick(level, 20), cell);
            } else if (box_cmd->parsed()) {
                cmd_box_count(inv, pick(level, 12), box);
            } else if (hell_cmd->parsed()) {
                cmd_hellinger(inv, load_spec(other_spec), pick(level, 12));
            } else if (cmp_cmd->parsed()) {
                cmd_compare_cdf(inv, pick(level, 16), grid, pick_long(horizon, 40));
            }
        } catch (const HypothesisViolationError& e) {
            // partial report: whatever was computed before the violation
            Json report = report_json(inv);
            report["error"] = Json{{"kind", "hypothesis_violation"}, {"message", e.what()}};
            emit(report.dump(2) + "\n", inv.out_path, out);
            err << "hypothesis violation: " << e.what() << "\n";
            return kExitHypothesis;
        }
        emit(inv.text.empty() ? report_json(inv).dump(2) + "\n" : inv.text, inv.out_path, out);
        return inv.exit_code;
    } catch (const SpecValidationError& e) {
        out << error_json(inv.command, "spec_validation", e.what(), e.field()).dump(2) << "\n";
        err << "invalid spec: " << e.what() << "\n";
        return kExitSpec;
    } catch (const Error& e) {
        out << error_json(inv.command, "invalid_argument", e.what()).dump(2) << "\n";
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace bconv
