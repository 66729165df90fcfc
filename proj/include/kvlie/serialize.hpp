#pragma once

#include "associator.hpp"
#include "graphs.hpp"
#include "kv.hpp"
#include "weights.hpp"

#include <json.hpp>

namespace kvlie::json {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json terms(const Alphabet& a, const GradedTerms& t, const char* key)
{
    Json out = Json::array();
    t.for_each([&](const Word& w, const Rational& c) { out.push_back({{key, a.render(w)}, {"coeff", to_string(c)}}); });
    return out;
}

inline Json series(const Alphabet& a, int degree, const GradedTerms& t, const char* key)
{
    return {{"n", a.size()}, {"degreeN", degree}, {"terms", terms(a, t, key)}};
}

inline const Json& field(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(std::string("JSON document lacks \"") + key + "\"");
    return j.at(key);
}

inline int int_field(const Json& j, const char* key)
{
    const Json& v = field(j, key);
    if (!v.is_number_integer()) throw std::invalid_argument(std::string("\"") + key + "\" must be an integer");
    return v.get<int>();
}

template <class Series>
Series read_series(const Json& j, const char* key)
{
    const Alphabet a(int_field(j, "n"));
    Series s(a, int_field(j, "degreeN"));
    for (const auto& t : field(j, "terms")) {
        const Json& w = field(t, key);
        const Json& c = field(t, "coeff");
        if (!w.is_string() || !c.is_string()) throw std::invalid_argument("term entries must be strings");
        s.add(a.parse(w.get<std::string>()), parse_rational(c.get<std::string>()));
    }
    return s;
}

}  // namespace detail

inline Json rational(const Rational& q) { return to_string(q); }

inline Json rationals(const std::vector<Rational>& v)
{
    Json out = Json::array();
    for (const auto& q : v) out.push_back(to_string(q));
    return out;
}

inline Json to_json(const AssocSeries& s) { return detail::series(s.alphabet(), s.degree(), s.terms(), "word"); }
/// Lie series are written on the Lyndon basis: each "word" is a Lyndon key.
inline Json to_json(const LieSeries& s) { return detail::series(s.alphabet(), s.degree(), s.terms(), "word"); }
inline Json to_json(const CycSeries& s) { return detail::series(s.alphabet(), s.degree(), s.terms(), "necklace"); }

inline Json to_json(const TDer& u)
{
    Json comps = Json::array();
    for (const auto& c : u.components()) comps.push_back(to_json(c));
    return {{"n", u.arity()}, {"components", comps}};
}

inline Json to_json(const TAutElem& g)
{
    Json images = Json::array();
    for (const auto& im : g.images()) images.push_back(to_json(im));
    Json out{{"n", g.arity()}, {"images", images}};
    if (g.log_certificate()) out["log"] = to_json(*g.log_certificate());
    return out;
}

inline AssocSeries assoc_from_json(const Json& j) { return detail::read_series<AssocSeries>(j, "word"); }
inline CycSeries cyc_from_json(const Json& j) { return detail::read_series<CycSeries>(j, "necklace"); }

inline LieSeries lie_from_json(const Json& j)
{
    auto s = detail::read_series<AssocSeries>(j, "word");
    // keys must be Lyndon words; LieSeries::add enforces that
    LieSeries out(s.alphabet(), s.degree());
    s.terms().for_each([&](const Word& w, const Rational& c) { out.add(w, c); });
    return out;
}

inline TDer tder_from_json(const Json& j)
{
    std::vector<LieSeries> comps;
    for (const auto& c : detail::field(j, "components")) comps.push_back(lie_from_json(c));
    if (static_cast<int>(comps.size()) != detail::int_field(j, "n")) throw std::invalid_argument("\"n\" disagrees with the component count");
    return TDer(std::move(comps), Normalization::strict);
}

/// The optional "log" is accepted only when it exponentiates to the given images.
inline TAutElem taut_from_json(const Json& j)
{
    std::vector<LieSeries> images;
    for (const auto& c : detail::field(j, "images")) images.push_back(lie_from_json(c));
    if (static_cast<int>(images.size()) != detail::int_field(j, "n")) throw std::invalid_argument("\"n\" disagrees with the image count");
    TAutElem g = TAutElem::from_images(std::move(images));
    if (!j.contains("log")) return g;
    TDer log = tder_from_json(j.at("log"));
    if (!(taut_exp(log).images() == g.images())) throw std::invalid_argument("\"log\" does not exponentiate to \"images\"");
    return make_taut(g.images(), std::move(log));
}

inline Json vertex(const KGraph& g, int v)
{
    if (g.is_ground(v)) return "g" + std::to_string(v - g.n + 1);
    return v;
}

inline Json to_json(const KGraph& g)
{
    Json edges = Json::array();
    for (auto [s, t] : g.edges) edges.push_back({vertex(g, s), vertex(g, t)});
    return {{"n", g.n}, {"m", KGraph::m}, {"edges", edges}};
}

inline KGraph graph_from_json(const Json& j)
{
    KGraph g{detail::int_field(j, "n"), {}};
    if (detail::int_field(j, "m") != KGraph::m) throw std::invalid_argument("only m = 2 ground vertices are supported");
    auto read = [&](const Json& v) {
        if (v.is_number_integer()) return v.get<int>();
        if (v == "g1") return g.ground(0);
        if (v == "g2") return g.ground(1);
        throw std::invalid_argument("vertex must be an aerial index or \"g1\"/\"g2\"");
    };
    for (const auto& e : detail::field(j, "edges")) {
        if (!e.is_array() || e.size() != 2) throw std::invalid_argument("edges are [source, target] pairs");
        g.edges.push_back({read(e[0]), read(e[1])});
    }
    validate(g);
    return g;
}

inline Json to_json(const WeightEstimate& e)
{
    Json out{{"value", e.value},
             {"stderr", e.standard_error ? Json(*e.standard_error) : Json()},
             {"samples", e.samples},
             {"seed", e.seed},
             {"method", e.method == EstimateMethod::quadrature ? "quadrature" : "monte_carlo"}};
    if (e.tolerance) {
        out["tolerance"] = *e.tolerance;
        out["error_estimate"] = e.error_estimate;
    }
    if (e.method == EstimateMethod::monte_carlo) out["degenerate"] = e.degenerate;
    return out;
}

inline WeightEstimate estimate_from_json(const Json& j)
{
    WeightEstimate e;
    e.value = detail::field(j, "value").get<double>();
    if (!detail::field(j, "stderr").is_null()) e.standard_error = j.at("stderr").get<double>();
    e.samples = detail::field(j, "samples").get<std::uint64_t>();
    e.seed = detail::field(j, "seed").get<std::uint64_t>();
    e.method = j.value("method", "monte_carlo") == "quadrature" ? EstimateMethod::quadrature : EstimateMethod::monte_carlo;
    if (j.contains("tolerance")) e.tolerance = j.at("tolerance").get<double>();
    e.error_estimate = j.value("error_estimate", 0.0);
    e.degenerate = j.value("degenerate", std::uint64_t{0});
    return e;
}

inline Json to_json(const DegreeReport& r)
{
    Json out = Json::array();
    for (const auto& d : r.degrees)
        out.push_back({{"degree", d.degree},
                       {"unknowns", d.unknowns},
                       {"equations", d.equations},
                       {"rank", d.rank},
                       {"kernel", d.kernel},
                       {"residual_terms", d.residual_terms},
                       {"basis", d.basis},
                       {"gauge", rationals(d.gauge)}});
    return out;
}

inline Json to_json(const IdentityCheck& c)
{
    return {{"name", c.name},
            {"passed", c.passed()},
            {"first_failure", c.first_failure ? Json(*c.first_failure) : Json()},
            {"residual_terms", c.residual_terms}};
}

inline Json to_json(const Classification& c)
{
    auto opt = [](const std::optional<int>& v) { return v ? Json(*v) : Json(); };
    return {{"normalized", c.normalized},
            {"special", c.special},
            {"krv", c.krv},
            {"special_witness", opt(c.special_witness)},
            {"krv_witness", opt(c.krv_witness)}};
}

inline Json to_json(const KvSolution& s)
{
    const auto& d = s.divergence;
    auto flags = [](const std::vector<bool>& v) {
        Json out = Json::array();
        for (std::size_t k = 1; k < v.size(); ++k) out.push_back(static_cast<bool>(v[k]));
        return out;
    };
    return {{"f", to_json(s.f)},
            {"report", to_json(s.report)},
            {"divergence",
             {{"j", to_json(d.j)},
              {"h", rationals(std::vector<Rational>(d.h.begin() + (d.h.empty() ? 0 : 1), d.h.end()))},
              {"in_sum_span", flags(d.in_sum_span)},
              {"inverse_in_ch_span", flags(d.inverse_in_ch_span)},
              {"equals_minus_transported", flags(d.equals_minus_transported)}}}};
}

inline Json to_json(const AssociatorSolution& s)
{
    Json coords = Json::array(), t3 = Json::array();
    for (std::size_t d = 1; d < s.candidate.coordinates.size(); ++d)
        coords.push_back({{"degree", d}, {"labels", s.candidate.labels[d]}, {"coordinates", rationals(s.candidate.coordinates[d])}});
    for (std::size_t d = 1; d < s.candidate.t3_member.size(); ++d) t3.push_back(static_cast<bool>(s.candidate.t3_member[d]));
    return {{"phi", to_json(s.candidate.phi)},
            {"group_like", s.candidate.group_like},
            {"t3_member", t3},
            {"coordinates", coords},
            {"report", to_json(s.report)}};
}

}  // namespace kvlie::json
