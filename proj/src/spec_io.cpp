#include "bconv/spec_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "bconv/errors.hpp"

namespace bconv {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Field access on one JSON object; remembers which keys were read so the
// rest can be rejected.
class ObjectReader {
public:
    ObjectReader(const Json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object()) {
            throw SpecValidationError(path_.empty() ? "$" : path_, "expected an object");
        }
    }

    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    bool has(const std::string& key) const { return j_.contains(key); }

    const Json& raw(const std::string& key)
    {
        seen_.insert(key);
        if (!j_.contains(key)) {
            throw SpecValidationError(at(key), "missing required field");
        }
        return j_.at(key);
    }

    double number(const std::string& key)
    {
        const Json& v = raw(key);
        if (!v.is_number()) {
            throw SpecValidationError(at(key), "expected a number");
        }
        return v.get<double>();
    }

    double number_or(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    long integer(const std::string& key)
    {
        const Json& v = raw(key);
        if (!v.is_number_integer()) {
            throw SpecValidationError(at(key), "expected an integer");
        }
        return v.get<long>();
    }

    long integer_or(const std::string& key, long fallback) { return has(key) ? integer(key) : fallback; }

    std::string string(const std::string& key)
    {
        const Json& v = raw(key);
        if (!v.is_string()) {
            throw SpecValidationError(at(key), "expected a string");
        }
        return v.get<std::string>();
    }

    std::string string_or(const std::string& key, std::string fallback)
    {
        return has(key) ? string(key) : std::move(fallback);
    }

    std::vector<double> numbers(const std::string& key)
    {
        const Json& v = raw(key);
        if (!v.is_array()) {
            throw SpecValidationError(at(key), "expected an array of numbers");
        }
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) {
                throw SpecValidationError(at(key) + "[" + std::to_string(i) + "]", "expected a number");
            }
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    void finish() const
    {
        for (const auto& item : j_.items()) {
            if (!seen_.count(item.key())) {
                throw SpecValidationError(at(item.key()), "unknown field");
            }
        }
    }

private:
    const Json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

Decay decay_from_json(const Json& j, const std::string& path)
{
    ObjectReader r(j, path);
    const std::string kind = r.string("kind");
    Decay g;
    if (kind == "none") {
        g = Decay::none();
    } else if (kind == "power") {
        g = Decay::power(r.number("exponent"));
    } else if (kind == "geometric") {
        g = Decay::geometric(r.number("ratio"));
    } else {
        throw SpecValidationError(r.at("kind"), "unknown decay kind '" + kind + "' (none, power, geometric)");
    }
    r.finish();
    return g;
}

Json decay_to_json(const Decay& g)
{
    switch (g.kind) {
        case Decay::Kind::Power:
            return Json{{"kind", "power"}, {"exponent", g.rate}};
        case Decay::Kind::Geometric:
            return Json{{"kind", "geometric"}, {"ratio", g.rate}};
        case Decay::Kind::None:
            break;
    }
    return Json{{"kind", "none"}};
}

ScaleSeq scales_from_json(const Json& j)
{
    ObjectReader r(j, "scales");
    const std::string kind = r.string("kind");
    auto build = [&]() -> ScaleSeq {
        if (kind == "geometric") {
            return ScaleSeq::geometric(r.number("ratio"), r.number_or("coef", 1.0));
        }
        if (kind == "cantor") {
            return ScaleSeq::cantor_like(r.number_or("coef", 1.0), static_cast<int>(r.integer("base")));
        }
        if (kind == "two_term") {
            return ScaleSeq::two_term(r.number("epsilon"));
        }
        if (kind == "ratio") {
            const double total = r.number_or("total", 1.0);
            const double limit = r.number("delta_limit");
            const double coef = r.number_or("excess_coef", 0.0);
            const Decay g = r.has("excess") ? decay_from_json(r.raw("excess"), r.at("excess")) : Decay::none();
            return ScaleSeq::ratio_defined(total, limit, coef, g);
        }
        if (kind == "explicit") {
            std::vector<double> prefix = r.numbers("prefix");
            ObjectReader t(r.raw("tail"), "scales.tail");
            const std::string rule = t.string("rule");
            TailRule tail;
            if (rule == "geometric_bound" || rule == "exact_geometric") {
                tail.kind = rule == "geometric_bound" ? TailRule::Kind::GeometricBound : TailRule::Kind::ExactGeometric;
                tail.parameter = t.number("ratio");
            } else if (rule == "power_law") {
                tail.kind = TailRule::Kind::PowerLaw;
                tail.parameter = t.number("exponent");
            } else {
                throw SpecValidationError(t.at("rule"),
                                          "unknown tail rule '" + rule + "' (geometric_bound, exact_geometric, power_law)");
            }
            tail.scale = t.number_or("scale", 1.0);
            tail.start_index = t.integer_or("start_index", 0);
            t.finish();
            return ScaleSeq::explicit_prefix(std::move(prefix), tail);
        }
        throw SpecValidationError("scales.kind",
                                  "unknown scale kind '" + kind + "' (geometric, cantor, two_term, ratio, explicit)");
    };
    ScaleSeq s = build();
    r.finish();
    return s;
}

DigitLaw digits_from_json(const Json& j)
{
    ObjectReader r(j, "digits");
    const std::string kind = r.string("kind");
    auto build = [&]() -> DigitLaw {
        if (kind == "constant") {
            return DigitLaw::constant(r.number("p0"));
        }
        if (kind == "perturbed") {
            return DigitLaw::perturbed(r.number("p0"), r.number("c"), r.number("s"));
        }
        if (kind == "explicit") {
            std::vector<double> prefix = r.numbers("prefix");
            ObjectReader t(r.raw("tail"), "digits.tail");
            DigitTailRule tail;
            tail.limit = t.number("limit");
            tail.coef = t.number_or("coef", 0.0);
            tail.g = t.has("decay") ? decay_from_json(t.raw("decay"), "digits.tail.decay") : Decay::none();
            t.finish();
            return DigitLaw::explicit_prefix(std::move(prefix), tail);
        }
        throw SpecValidationError("digits.kind", "unknown digit kind '" + kind + "' (constant, perturbed, explicit)");
    };
    DigitLaw d = build();
    r.finish();
    return d;
}

Json scales_to_json(const ScaleSeq& s)
{
    return std::visit(
        Overloaded{
            [](const GeometricScales& g) { return Json{{"kind", "geometric"}, {"ratio", g.ratio}, {"coef", g.coef}}; },
            [](const CantorScales& c) { return Json{{"kind", "cantor"}, {"coef", c.coef}, {"base", c.base}}; },
            [](const TwoTermScales& t) { return Json{{"kind", "two_term"}, {"epsilon", t.epsilon}}; },
            [](const RatioScales& r) {
                return Json{{"kind", "ratio"},
                            {"total", r.total},
                            {"delta_limit", r.limit},
                            {"excess_coef", r.coef},
                            {"excess", decay_to_json(r.excess)}};
            },
            [](const ExplicitScales& e) {
                Json tail;
                switch (e.tail.kind) {
                    case TailRule::Kind::GeometricBound:
                        tail = Json{{"rule", "geometric_bound"}, {"ratio", e.tail.parameter}};
                        break;
                    case TailRule::Kind::ExactGeometric:
                        tail = Json{{"rule", "exact_geometric"}, {"ratio", e.tail.parameter}};
                        break;
                    case TailRule::Kind::PowerLaw:
                        tail = Json{{"rule", "power_law"}, {"exponent", e.tail.parameter}};
                        break;
                }
                tail["scale"] = e.tail.scale;
                tail["start_index"] = e.tail.start_index;
                return Json{{"kind", "explicit"}, {"prefix", e.prefix}, {"tail", tail}};
            },
        },
        s.generator());
}

Json digits_to_json(const DigitLaw& d)
{
    return std::visit(Overloaded{
                          [](const ConstantDigits& c) { return Json{{"kind", "constant"}, {"p0", c.p0}}; },
                          [](const PerturbedDigits& p) {
                              return Json{{"kind", "perturbed"}, {"p0", p.p0}, {"c", p.c}, {"s", p.s}};
                          },
                          [](const ExplicitDigits& e) {
                              return Json{{"kind", "explicit"},
                                          {"prefix", e.prefix},
                                          {"tail",
                                           {{"limit", e.tail.limit},
                                            {"coef", e.tail.coef},
                                            {"decay", decay_to_json(e.tail.g)}}}};
                          },
                      },
                      d.generator());
}

}  // namespace

ConvolutionSpec spec_from_json(const Json& doc)
{
    ObjectReader r(doc, "");
    ScaleSeq scales = scales_from_json(r.raw("scales"));
    DigitLaw digits = digits_from_json(r.raw("digits"));
    std::string name = r.string_or("name", "");
    std::string description = r.string_or("description", "");
    r.finish();
    return {std::move(scales), std::move(digits), std::move(name), std::move(description)};
}

Json spec_to_json(const ConvolutionSpec& spec)
{
    Json j;
    if (!spec.name.empty()) {
        j["name"] = spec.name;
    }
    if (!spec.description.empty()) {
        j["description"] = spec.description;
    }
    j["scales"] = scales_to_json(spec.scales);
    j["digits"] = digits_to_json(spec.digits);
    return j;
}

ConvolutionSpec catalog_spec(const std::string& name)
{
    if (name == "cantor") {
        return catalog::cantor();
    }
    if (name == "uniform") {
        return catalog::uniform();
    }
    if (name == "two_term") {
        return catalog::two_term(0.5);
    }
    if (name == "ratio_excess") {
        return catalog::ratio_excess();
    }
    if (name == "squared_exponent") {
        return catalog::squared_exponent();
    }
    if (name == "discrete") {
        return {ScaleSeq::cantor_like(2.0, 3),
                DigitLaw::explicit_prefix({}, DigitTailRule{1.0, -1.0, Decay::geometric(0.5)}), "discrete",
                "Cantor scales, p0k = 1 - 2^-k"};
    }
    throw SpecValidationError("catalog", "unknown catalog spec '" + name + "'");
}

ConvolutionSpec load_spec(const std::string& source)
{
    const std::string prefix = "catalog:";
    if (source.rfind(prefix, 0) == 0) {
        return catalog_spec(source.substr(prefix.size()));
    }
    std::ifstream in(source, std::ios::binary);
    if (!in) {
        throw SpecValidationError("$", "cannot open spec file '" + source + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    Json doc;
    try {
        doc = Json::parse(buf.str());
    } catch (const Json::parse_error& e) {
        throw SpecValidationError("$", std::string("malformed JSON: ") + e.what());
    }
    return spec_from_json(doc);
}

}  // namespace bconv
