#include <kvlie/kvlie.hpp>

#include <CLI11.hpp>

#include <cctype>
#include <fstream>
#include <iostream>
#include <sstream>
#include <variant>

using namespace kvlie;
using json::Json;

namespace {

/// Bad flags or unreadable input: exit 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Result {
    Json doc;
    bool passed = true;
};

int degree_or(const std::optional<int>& d, int fallback)
{
    const int N = d.value_or(fallback);
    if (N < 1 || N > 12) throw UsageError("--degree must be in 1..12");
    return N;
}

Json read_document(const std::string& path)
{
    std::stringstream text;
    if (path == "-") {
        text << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        if (!in) throw UsageError("cannot open '" + path + "'");
        text << in.rdbuf();
    }
    try {
        return Json::parse(text.str());
    } catch (const Json::parse_error& e) {
        throw UsageError("'" + path + "' is not JSON: " + e.what());
    }
}

LieSeries lie_gen(int arity, int N, int i) { return LieSeries::generator(Alphabet(arity), N, i); }

/// Built-in derivations: "t" = (y, x) on two generators, "tIJ" = t^{IJ} on `arity` generators.
std::optional<TDer> named_tder(const std::string& name, int arity, int N)
{
    if (name == "t") return TDer({lie_gen(2, N, 1), lie_gen(2, N, 0)});
    if (name.size() == 3 && name[0] == 't' && std::isdigit(name[1]) && std::isdigit(name[2])) {
        const int i = name[1] - '1', j = name[2] - '1';
        return braid_embed(i, j, Alphabet(arity), N);
    }
    return std::nullopt;
}

TDer load_tder(const std::string& source, int arity, int N)
{
    if (auto t = named_tder(source, arity, N)) return *t;
    return json::tder_from_json(read_document(source));
}

/// Built-ins: "trivial" (identity), "R", "kv" (symmetric KV solution), "phi" (even associator).
TAutElem load_taut(const std::string& source, int arity, int N)
{
    if (source == "trivial") return TAutElem::identity(Alphabet(arity), N);
    if (source == "R") return r_element(N);
    if (source == "kv") return solve_kv(N).f;
    if (source == "phi") return solve_associator(N).candidate.phi;
    const Json doc = read_document(source);
    // solver documents carry the element under "f" or "phi"
    if (doc.contains("f")) return json::taut_from_json(doc.at("f"));
    if (doc.contains("phi")) return json::taut_from_json(doc.at("phi"));
    return json::taut_from_json(doc);
}

/// Built-ins: "x", "y", "ch" on two generators. Documents with "necklace" keys are cyclic.
std::variant<LieSeries, CycSeries> load_series(const std::string& source, int N)
{
    if (source == "x") return lie_gen(2, N, 0);
    if (source == "y") return lie_gen(2, N, 1);
    if (source == "ch") return bch(lie_gen(2, N, 0), lie_gen(2, N, 1));
    const Json doc = read_document(source);
    const Json& terms = doc.contains("terms") ? doc.at("terms") : Json();
    if (!terms.empty() && terms[0].contains("necklace")) return json::cyc_from_json(doc);
    return json::lie_from_json(doc);
}

KGraph load_graph(const std::string& source)
{
    const Json doc = read_document(source);
    return json::graph_from_json(doc.contains("graph") ? doc.at("graph") : doc);
}

Point parse_point(const std::string& text)
{
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw UsageError("points are written re,im");
    try {
        return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw UsageError("malformed point '" + text + "'");
    }
}

Json checks_json(const std::vector<IdentityCheck>& checks, bool& passed)
{
    Json out = Json::array();
    for (const auto& c : checks) {
        out.push_back(json::to_json(c));
        passed = passed && c.passed();
    }
    return out;
}

IdentityCheck residual_check(const std::string& name, const LieSeries& residual)
{
    IdentityCheck c{name, std::nullopt, std::vector<std::size_t>(static_cast<std::size_t>(residual.degree()) + 1, 0)};
    residual.terms().for_each([&](const Word& w, const Rational&) { ++c.residual_terms[w.size()]; });
    if (!residual.is_zero()) c.first_failure = residual.min_degree();
    return c;
}

Json entry_json(const LieGraphEntry& e)
{
    return {{"graph", json::to_json(e.graph)},
            {"expression", e.expression},
            {"symbol", json::to_json(e.symbol)},
            {"automorphisms", e.automorphisms},
            {"zero_symbol", e.zero_symbol}};
}

Json entry_json(const WheelGraphEntry& e)
{
    return {{"graph", json::to_json(e.graph)},
            {"spokes", e.spokes},
            {"symbol", json::to_json(e.symbol)},
            {"automorphisms", e.automorphisms},
            {"zero_symbol", e.zero_symbol}};
}

std::string render_terms(const Json& doc)
{
    std::string out;
    const char* key = !doc["terms"].empty() && doc["terms"][0].contains("necklace") ? "necklace" : "word";
    for (const auto& t : doc["terms"]) {
        if (!out.empty()) out += " + ";
        out += t["coeff"].get<std::string>() + " " + (std::string(key) == "necklace" ? "tr(" : "") +
               t[key].get<std::string>() + (std::string(key) == "necklace" ? ")" : "");
    }
    return out.empty() ? "0" : out;
}

/// Text form: one "path: value" line per leaf, series written as sums of terms.
void render_text(const Json& doc, const std::string& path, std::ostream& os)
{
    if (doc.is_object() && doc.contains("terms") && doc.contains("degreeN")) {
        os << (path.empty() ? "" : path + ": ") << render_terms(doc) << "  (mod degree > " << doc["degreeN"].get<int>() << ")\n";
        return;
    }
    if (doc.is_object()) {
        for (const auto& [k, v] : doc.items()) render_text(v, path.empty() ? k : path + "." + k, os);
        return;
    }
    if (doc.is_array() && !doc.empty() && (doc[0].is_object() || doc[0].is_array())) {
        for (std::size_t i = 0; i < doc.size(); ++i) render_text(doc[i], path + "[" + std::to_string(i) + "]", os);
        return;
    }
    os << (path.empty() ? "" : path + ": ") << doc.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact Kashiwara-Vergne and associator computations on truncated free Lie algebras"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "json";
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));

    std::function<Result()> run;
    auto verb = [&](const char* name, const char* help) { return app.add_subcommand(name, help); };
    auto degree_flag = [](CLI::App* c, std::optional<int>& d) { c->add_option("--degree,-N", d, "Truncation order"); };

    // bch
    std::optional<int> bch_degree;
    auto* bch_cmd = verb("bch", "Campbell-Hausdorff series log(e^x e^y)");
    degree_flag(bch_cmd, bch_degree);
    bch_cmd->callback([&] {
        run = [&] {
            const int N = degree_or(bch_degree, 6);
            return Result{json::to_json(bch(lie_gen(2, N, 0), lie_gen(2, N, 1)))};
        };
    });

    // duflo
    std::optional<int> duflo_degree;
    auto* duflo_cmd = verb("duflo", "Duflo function 1/2 (j(x) + j(y) - j(ch(x,y)))");
    degree_flag(duflo_cmd, duflo_degree);
    duflo_cmd->callback([&] { run = [&] { return Result{json::to_json(duflo_series(degree_or(duflo_degree, 6)))}; }; });

    // derivation inputs shared by div, classify, extend, exp
    struct TDerVerb {
        std::string input;
        std::optional<int> degree;
        int arity = 3;
    };
    auto tder_verb = [&](const char* name, const char* help, TDerVerb& v) {
        auto* c = verb(name, help);
        c->add_option("--input,-i", v.input, "Derivation JSON file, '-' for stdin, or t / tIJ")->required();
        c->add_option("--degree,-N", v.degree, "Truncation order for built-in derivations");
        c->add_option("--arity", v.arity, "Arity for tIJ")->check(CLI::Range(3, 4));
        return c;
    };
    auto tder_of = [](const TDerVerb& v) {
        const int fallback = v.input == "t" ? 6 : 4;
        return load_tder(v.input, v.arity, degree_or(v.degree, fallback));
    };

    TDerVerb div_args;
    tder_verb("div", "Divergence of a tangential derivation", div_args)->callback([&] {
        run = [&] { return Result{json::to_json(divergence(tder_of(div_args)))}; };
    });

    TDerVerb classify_args;
    tder_verb("classify", "Normalized / special / krv membership", classify_args)->callback([&] {
        run = [&] { return Result{json::to_json(classify(tder_of(classify_args)))}; };
    });

    TDerVerb extend_args;
    std::string pattern;
    bool extend_group = false;
    auto* extend_cmd = tder_verb("extend", "Simplicial extension along a pattern such as 1,23 or \"1,2 of 3\"", extend_args);
    extend_cmd->add_option("--pattern,-p", pattern, "Pattern")->required();
    extend_cmd->add_flag("--group", extend_group, "Input is a group element (TAutElem JSON or built-in)");
    extend_cmd->callback([&] {
        run = [&] {
            const Pattern p = Pattern::parse(pattern);
            if (extend_group) {
                const int arity = extend_args.input == "R" || extend_args.input == "kv" ? 2 : extend_args.arity;
                const auto g = load_taut(extend_args.input, arity, degree_or(extend_args.degree, arity == 2 ? 6 : 4));
                return Result{json::to_json(taut_extend(g, p))};
            }
            return Result{json::to_json(tder_extend(tder_of(extend_args), p))};
        };
    });

    TDerVerb exp_args;
    tder_verb("exp", "Exponential of a derivation as a group element", exp_args)->callback([&] {
        run = [&] { return Result{json::to_json(taut_exp(tder_of(exp_args)))}; };
    });

    // braid
    int braid_arity = 3;
    std::optional<int> braid_degree;
    auto* braid_cmd = verb("braid", "Infinitesimal braid generators, basis and relations");
    braid_cmd->add_option("--arity", braid_arity, "Number of strands")->check(CLI::Range(2, 4));
    degree_flag(braid_cmd, braid_degree);
    braid_cmd->callback([&] {
        run = [&] {
            const int N = degree_or(braid_degree, 4);
            const Alphabet a(braid_arity);
            Result r;
            Json basis = Json::array(), relations = Json::array();
            const auto b = braid_basis(a, N, N);
            for (int d = 1; d <= N; ++d) {
                Json labels = Json::array();
                for (const auto& e : b[static_cast<std::size_t>(d)]) labels.push_back(e.label);
                basis.push_back({{"degree", d}, {"labels", labels}});
            }
            for (const auto& c : braid_relation_checks(a, N)) {
                relations.push_back({{"name", c.name}, {"holds", c.holds}});
                r.passed = r.passed && c.holds;
            }
            r.doc = {{"arity", braid_arity}, {"degreeN", N}, {"basis", basis}, {"relations", relations}};
            return r;
        };
    });

    // group element inputs
    struct TAutVerb {
        std::vector<std::string> inputs;
        std::optional<int> degree;
        int arity = 2;
    };
    auto taut_verb = [&](const char* name, const char* help, TAutVerb& v, std::size_t count) {
        auto* c = verb(name, help);
        c->add_option("--input,-i", v.inputs, "TAutElem JSON file, '-' for stdin, or trivial / R / kv / phi")
            ->required()
            ->expected(static_cast<int>(count));
        c->add_option("--degree,-N", v.degree, "Truncation order for built-in elements");
        c->add_option("--arity", v.arity, "Arity for the trivial element")->check(CLI::Range(2, 4));
        return c;
    };
    auto taut_of = [](const TAutVerb& v, std::size_t k) {
        const std::string& s = v.inputs.at(k);
        const int arity = s == "phi" ? 3 : s == "trivial" ? v.arity : 2;
        return load_taut(s, arity, degree_or(v.degree, arity == 2 ? 6 : 4));
    };

    TAutVerb compose_args;
    taut_verb("compose", "Product g h, acting as g(h(.))", compose_args, 2)->callback([&] {
        run = [&] { return Result{json::to_json(taut_compose(taut_of(compose_args, 0), taut_of(compose_args, 1)))}; };
    });

    TAutVerb apply_args;
    std::string series_source;
    auto* apply_cmd = taut_verb("apply", "Action of a group element on a Lie or cyclic series", apply_args, 1);
    apply_cmd->add_option("--series,-s", series_source, "Series JSON file, '-' for stdin, or x / y / ch")->required();
    apply_cmd->callback([&] {
        run = [&] {
            const TAutElem g = taut_of(apply_args, 0);
            auto s = load_series(series_source, g.degree());
            return Result{std::visit([&](const auto& v) { return json::to_json(taut_apply(g, v)); }, s)};
        };
    });

    TAutVerb j_args;
    taut_verb("jcocycle", "Group cocycle J(g)", j_args, 1)->callback([&] {
        run = [&] { return Result{json::to_json(j_group_cocycle(taut_of(j_args, 0)))}; };
    });

    // kv-solve
    std::optional<int> kv_degree;
    std::string gauge = "symmetric", kv_divergence = "on";
    auto* kv_cmd = verb("kv-solve", "Degree-by-degree solve for F with F(ch(x,y)) = x + y");
    degree_flag(kv_cmd, kv_degree);
    kv_cmd->add_option("--gauge", gauge, "Kernel gauge")->check(CLI::IsMember({"symmetric", "minimal-norm"}));
    kv_cmd->add_option("--divergence", kv_divergence, "Also impose the divergence condition")->check(CLI::IsMember({"on", "off"}));
    kv_cmd->callback([&] {
        run = [&] {
            const KvOptions opt{gauge == "symmetric" ? KvGauge::symmetric : KvGauge::minimal_norm, kv_divergence == "on"};
            const auto s = solve_kv(degree_or(kv_degree, 6), opt);
            return Result{json::to_json(s), s.report.all_zero()};
        };
    });

    // assoc-solve
    std::optional<int> assoc_degree;
    std::string parity = "even";
    int hexagon_sign = 1;
    auto* assoc_cmd = verb("assoc-solve", "Degree-by-degree solve of the associator axioms inside t_3");
    degree_flag(assoc_cmd, assoc_degree);
    assoc_cmd->add_option("--parity", parity, "Parity constraint")->check(CLI::IsMember({"even", "unconstrained"}));
    assoc_cmd->add_option("--hexagon-sign", hexagon_sign, "Hexagon exponent sign")->check(CLI::IsMember({1, -1}));
    assoc_cmd->callback([&] {
        run = [&] {
            const AssociatorOptions opt{parity == "even" ? Parity::even : Parity::unconstrained, hexagon_sign};
            const auto s = solve_associator(degree_or(assoc_degree, 4), opt);
            return Result{json::to_json(s), s.report.all_zero()};
        };
    });

    // check
    std::string property, element = "solved";
    std::optional<int> check_degree;
    std::optional<int> check_sign;
    auto* check_cmd = verb("check", "Residual check of an identity; exit 1 when it fails");
    check_cmd->add_option("property", property, "Property")
        ->required()
        ->check(CLI::IsMember({"duality", "pentagon", "hexagon", "associator", "kv", "symmetries"}));
    check_cmd->add_option("--input,--phi,--f,-i", element, "Element: JSON file, '-', trivial, or solved");
    degree_flag(check_cmd, check_degree);
    check_cmd->add_option("--hexagon-sign", check_sign, "Check one hexagon sign only")->check(CLI::IsMember({1, -1}));
    check_cmd->callback([&] {
        run = [&] {
            const bool on_f = property == "kv" || property == "symmetries";
            const int arity = on_f ? 2 : 3;
            const std::string source = element == "solved" ? (on_f ? "kv" : "phi") : element;
            const TAutElem g = load_taut(source, arity, degree_or(check_degree, on_f ? 6 : 4));
            std::vector<IdentityCheck> checks;
            if (property == "kv") checks.push_back(residual_check("F(ch(x,y)) = x + y", kv_residual(g)));
            else if (property == "symmetries") checks = check_f_symmetries(g);
            else if (property == "duality") checks = check_associator_axioms(g, Axiom::duality);
            else if (property == "pentagon") checks = check_associator_axioms(g, Axiom::pentagon);
            else if (property == "associator") checks = check_associator_axioms(g);
            else {
                for (int s : {1, -1}) {
                    if (check_sign && *check_sign != s) continue;
                    auto c = check_associator_axioms(g, s > 0 ? Axiom::hexagon_plus : Axiom::hexagon_minus);
                    checks.insert(checks.end(), c.begin(), c.end());
                }
            }
            Result r;
            Json list = checks_json(checks, r.passed);
            r.doc = {{"property", property}, {"degreeN", g.degree()}, {"passed", r.passed}, {"checks", list}};
            return r;
        };
    });

    // graphs
    int order = 3;
    std::string kind = "all";
    auto* graphs_cmd = verb("graphs", "Enumerate Lie-type and wheel-type graphs with their symbols");
    graphs_cmd->add_option("--order,-n", order, "Number of aerial vertices")->check(CLI::Range(1, max_graph_order));
    graphs_cmd->add_option("--kind", kind, "Graph family")->check(CLI::IsMember({"lie", "wheel", "all"}));
    graphs_cmd->callback([&] {
        run = [&] {
            Json doc{{"order", order}};
            if (kind != "wheel") {
                Json list = Json::array();
                for (const auto& e : enumerate_lie_graphs(order)) list.push_back(entry_json(e));
                doc["lie"] = list;
            }
            if (kind != "lie") {
                Json list = Json::array();
                for (const auto& e : enumerate_wheel_graphs(order)) list.push_back(entry_json(e));
                doc["wheel"] = list;
            }
            return Result{doc};
        };
    });

    // weight
    std::string weight_target, method = "quadrature", graph_input, expression;
    double tolerance = 1e-8;
    std::uint64_t samples = 1'000'000, seed = 1;
    auto* weight_cmd = verb("weight", "Weight estimates: the example 1-form or a graph with n <= 2");
    weight_cmd->add_option("target", weight_target, "example or graph")->required()->check(CLI::IsMember({"example", "graph"}));
    weight_cmd->add_option("--method", method, "Estimator for the example")->check(CLI::IsMember({"quadrature", "montecarlo"}));
    weight_cmd->add_option("--tol,--tolerance", tolerance, "Quadrature tolerance")->check(CLI::PositiveNumber);
    weight_cmd->add_option("--samples", samples, "Monte Carlo samples")->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1'000'000'000}));
    weight_cmd->add_option("--seed", seed, "Monte Carlo seed");
    auto* graph_opt = weight_cmd->add_option("--input,-i", graph_input, "Graph JSON file or '-'");
    weight_cmd->add_option("--expression,-e", expression, "Lie-type graph given by a bracket expression")->excludes(graph_opt);
    weight_cmd->callback([&] {
        run = [&] {
            const MonteCarloOptions mc{samples, seed};
            if (weight_target == "example") {
                if (!graph_input.empty() || !expression.empty()) throw UsageError("weight example takes no graph");
                return Result{json::to_json(method == "quadrature" ? example_weight_quadrature(tolerance) : example_weight_montecarlo(mc))};
            }
            if (graph_input.empty() == expression.empty()) throw UsageError("weight graph needs exactly one of --input, --expression");
            const KGraph g = expression.empty() ? load_graph(graph_input) : lie_graph_from_expression(expression);
            return Result{json::to_json(weight_montecarlo(g, mc))};
        };
    });

    // angle
    std::string p_text, q_text, angle_kind = "hyperbolic";
    auto* angle_cmd = verb("angle", "Angle function of two points");
    angle_cmd->add_option("--p", p_text, "First point re,im")->required();
    angle_cmd->add_option("--q", q_text, "Second point re,im")->required();
    angle_cmd->add_option("--kind", angle_kind, "Angle kind")->check(CLI::IsMember({"hyperbolic", "euclidean"}));
    angle_cmd->callback([&] {
        run = [&] {
            const Point p = parse_point(p_text), q = parse_point(q_text);
            const double v = angle(p, q, angle_kind == "hyperbolic" ? AngleKind::hyperbolic : AngleKind::euclidean);
            return Result{Json{{"kind", angle_kind}, {"p", {p.real(), p.imag()}}, {"q", {q.real(), q.imag()}}, {"value", v}}};
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const Result r = run();
        if (format == "json") std::cout << r.doc.dump(2) << "\n";
        else render_text(r.doc, "", std::cout);
        return r.passed ? 0 : 1;
    } catch (const UsageError& e) {
        std::cerr << "kvlie: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "kvlie: " << e.what() << "\n";
        return 2;
    } catch (const Infeasible& e) {
        std::cerr << "kvlie: infeasible: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "kvlie: " << e.what() << "\n";
        return 1;
    }
}
