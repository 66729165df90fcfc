// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <kvlie/kvlie.hpp>

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>

using namespace kvlie;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

const Alphabet xy(2);

LieSeries gen(const Alphabet& a, int N, int i) { return LieSeries::generator(a, N, i); }

/// log(e^x e^y) by inverting exp degree by degree: Z_d = (e^x e^y - exp(Z_{<d}))_d.
AssocSeries log_by_exp_inversion(int N)
{
    const AssocSeries x = AssocSeries::generator(xy, N, 0), y = AssocSeries::generator(xy, N, 1);
    const AssocSeries target = exp_series(x) * exp_series(y);
    AssocSeries z(xy, N, false);
    for (int d = 1; d <= N; ++d) z += (target - exp_series(z)).homogeneous(d);
    return z;
}

Outcome bch_oracle()
{
    const int N = 6;
    const LieSeries ch = bch(gen(xy, N, 0), gen(xy, N, 1));
    const AssocSeries oracle = log_by_exp_inversion(N);
    const bool eq = ch.to_assoc() == oracle;
    return {eq, "N = 6, " + std::to_string(oracle.terms().size()) + " word terms compared exactly"};
}

TDer random_tder(std::mt19937& rng, const Alphabet& a, int N, int max_deg)
{
    std::uniform_int_distribution<int> num(-4, 4), den(1, 4);
    std::bernoulli_distribution keep(0.5);
    std::vector<LieSeries> comps;
    for (int i = 0; i < a.size(); ++i) {
        LieSeries s(a, N);
        for (int d = 1; d <= max_deg; ++d)
            for (const Word& w : lyndon_words(a.size(), d))
                if (keep(rng)) s.add(w, frac(num(rng), den(rng)));
        comps.push_back(std::move(s));
    }
    return TDer(std::move(comps));
}

Outcome divergence_cocycle()
{
    const int N = 5;
    std::mt19937 rng(2024);
    int ok = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const Alphabet& a = trial % 5 == 4 ? Alphabet(3) : xy;
        const TDer u = random_tder(rng, a, N, 3), v = random_tder(rng, a, N, 3);
        const CycSeries lhs = divergence(tder_bracket(u, v));
        const CycSeries rhs = tder_apply(u, divergence(v)) - tder_apply(v, divergence(u));
        if (lhs == rhs) ++ok;
    }
    return {ok == 50, std::to_string(ok) + "/50 random pairs at N = 5 (10 of them on three generators)"};
}

Outcome t_in_krv()
{
    const int N = 6;
    const TDer t({gen(xy, N, 1), gen(xy, N, 0)});
    const Classification c = classify(t);
    const bool div_zero = divergence(t).is_zero();
    return {c.special && c.krv && div_zero, std::string("special = ") + (c.special ? "yes" : "no") + ", div = " + (div_zero ? "0" : "nonzero")};
}

Outcome duflo_anchor()
{
    const int N = 6;
    CycSeries expected(xy, N);
    expected.add(xy.parse("xy"), frac(-1, 24));
    const CycSeries got = duflo_series(N).homogeneous(2);
    std::string shown;
    got.terms().for_each([&](const Word& w, const Rational& c) { shown += to_string(c) + " tr(" + xy.render(w) + ") "; });
    return {got == expected, "degree-2 term " + shown};
}

Outcome r_swap()
{
    const int N = 6;
    const LieSeries x = gen(xy, N, 0), y = gen(xy, N, 1);
    const bool eq = taut_apply(r_element(N), bch(x, y)) == bch(y, x);
    return {eq, "R = (e^y, 1) on ch(x,y) at N = 6"};
}

Outcome holonomy()
{
    const int N = 6;
    const LieSeries x = gen(xy, N, 0), y = gen(xy, N, 1);
    const TDer t({y, x});
    // group element exp(t) in the conjugator reading, i.e. taut_exp(-t)
    const TAutElem g = taut_exp(-t);
    const AssocSeries e_plus = exp_series((x + y).to_assoc()), e_minus = exp_series((-(x + y)).to_assoc());
    bool ok = true;
    for (int i = 0; i < 2; ++i) {
        const AssocSeries xi = gen(xy, N, i).to_assoc();
        ok = ok && taut_apply(g, xi) == e_plus * xi * e_minus;
    }
    return {ok, "exp(t) read as conjugators, i.e. x_i -> e^{x+y} x_i e^{-(x+y)}, checked in the word algebra at N = 6"};
}

Outcome braid_relations()
{
    const int N = 5;
    std::size_t total = 0, held = 0;
    for (int n : {3, 4})
        for (const auto& c : braid_relation_checks(Alphabet(n), N)) {
            ++total;
            if (c.holds) ++held;
        }
    return {total > 0 && held == total, std::to_string(held) + "/" + std::to_string(total) + " relations (arity 3 and 4, N = 5)"};
}

/// Independent span test: J_k must be a multiple of tr(x^k) + tr(y^k) - tr((x+y)^k).
bool homogeneous_multiple(const CycSeries& j, int k)
{
    const AssocSeries x = AssocSeries::generator(xy, j.degree(), 0), y = AssocSeries::generator(xy, j.degree(), 1);
    const CycSeries h = tr_power(x, k) + tr_power(y, k) - tr_power(x + y, k);
    const CycSeries jk = j.homogeneous(k);
    if (h.is_zero()) return jk.is_zero();
    Rational ratio;
    bool found = false;
    h.terms().for_each([&](const Word& w, const Rational& c) {
        if (!found) {
            ratio = jk.coeff(w) / c;
            found = true;
        }
    });
    return jk == h * ratio;
}

Outcome kv_solve()
{
    const int N = 4;
    const KvSolution s = solve_kv(N, {KvGauge::symmetric, true});
    const LieSeries x = gen(xy, N, 0), y = gen(xy, N, 1);
    const bool residual = kv_residual(s.f).is_zero() && s.report.all_zero();
    const bool degree_one = s.log.homogeneous(1) == TDer({y * frac(-1, 4), x * frac(1, 4)});
    bool sum_span = true, ch_span = true;
    for (int d = 1; d <= N; ++d) {
        sum_span = sum_span && homogeneous_multiple(s.divergence.j, d) && s.divergence.in_sum_span[static_cast<std::size_t>(d)];
        ch_span = ch_span && s.divergence.inverse_in_ch_span[static_cast<std::size_t>(d)];
    }
    return {residual && degree_one && sum_span && ch_span,
            std::string("residual ") + (residual ? "0" : "nonzero") + ", degree-1 log (-y/4, x/4) " + (degree_one ? "yes" : "no") +
                "; reading: J(F) in span{h(x)+h(y)-h(x+y)} " + (sum_span ? "yes" : "no") +
                " and J(F^-1) in span{h(x)+h(y)-h(ch)} " + (ch_span ? "yes" : "no")};
}

Outcome associator_anchor()
{
    const int N = 4;
    const Alphabet a3(3);
    const AssociatorSolution s = solve_associator(N, {Parity::even, 1});
    const TDer anchor = tder_bracket(braid_embed(0, 1, a3, N), braid_embed(1, 2, a3, N)) * frac(1, 24);
    const bool two = s.candidate.log.homogeneous(2) == anchor;
    const bool three = s.candidate.log.homogeneous(3).is_zero();
    std::string failing;
    for (const auto& c : check_associator_axioms(s.candidate.phi))
        if (!c.passed()) failing += " " + c.name;
    return {two && three && failing.empty() && s.report.all_zero(),
            std::string("degree 2 = (1/24)[t12,t23] ") + (two ? "yes" : "no") + ", degree 3 zero " + (three ? "yes" : "no") +
                ", duality/pentagon/hexagon+/hexagon- " + (failing.empty() ? "all zero" : "failing:" + failing) +
                "; reading: group elements as conjugator tuples"};
}

Outcome weights()
{
    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    const WeightEstimate q = example_weight_quadrature(1e-8);
    const double tq = std::chrono::duration<double>(clock::now() - t0).count();
    t0 = clock::now();
    const WeightEstimate mc = weight_montecarlo(KGraph{1, {{0, 1}, {0, 2}}}, {1'000'000, 1});
    const double tm = std::chrono::duration<double>(clock::now() - t0).count();
    const bool q_ok = std::abs(q.value - 1.0 / 24) <= 1e-8 && tq < 1.0;
    const double se = mc.standard_error.value_or(1.0);
    const bool mc_ok = std::abs(mc.value - 0.5) <= 3 * se && se < 0.01 && tm < 60.0;
    char buf[256];
    std::snprintf(buf, sizeof buf, "quadrature %.12f (|err| %.1e, %.3f s); Monte Carlo %.5f +- %.5f (%.1f s)", q.value,
                  std::abs(q.value - 1.0 / 24), tq, mc.value, se, tm);
    return {q_ok && mc_ok, buf};
}

Outcome graphs()
{
    std::size_t total = 0, valid = 0;
    for (int n = 1; n <= 4; ++n) {
        for (const auto& e : enumerate_lie_graphs(n)) {
            ++total;
            if (admissibility_violation(e.graph).empty() && graph_kind(e.graph) == GraphKind::lie) ++valid;
        }
        for (const auto& e : enumerate_wheel_graphs(n)) {
            ++total;
            if (admissibility_violation(e.graph).empty() && graph_kind(e.graph) == GraphKind::wheel) ++valid;
        }
    }
    // tree [[x,[x,y]],y]
    const LieSeries x = gen(xy, 4, 0), y = gen(xy, 4, 1);
    const KGraph tree = lie_graph_from_expression("[[x,[x,y]],y]");
    bool tree_ok = lie_symbol(tree) == bracket(bracket(x, bracket(x, y)), y);
    bool tree_listed = false;
    for (const auto& e : enumerate_lie_graphs(3)) tree_listed = tree_listed || canonical_key(e.graph) == canonical_key(tree);
    // wheel tr(y^2 [x,y] x): cycle 0 -> 1 -> 2 -> 3 -> 0 with spokes y, y, [x,y] (vertex 4), x
    const KGraph wheel{5, {{0, 6}, {0, 1}, {1, 6}, {1, 2}, {2, 4}, {2, 3}, {3, 5}, {3, 0}, {4, 5}, {4, 6}}};
    const AssocSeries ax = AssocSeries::generator(xy, 5, 0), ay = AssocSeries::generator(xy, 5, 1);
    bool wheel_ok = wheel_symbol(wheel) == tr_project(ay * ay * commutator(ax, ay) * ax);
    bool wheel_listed = false;
    for (const auto& e : enumerate_wheel_graphs(5)) wheel_listed = wheel_listed || canonical_key(e.graph) == canonical_key(wheel);
    return {total > 0 && valid == total && tree_ok && tree_listed && wheel_ok && wheel_listed,
            std::to_string(valid) + "/" + std::to_string(total) + " graphs at n <= 4 re-validated; [[x,[x,y]],y] " +
                (tree_ok && tree_listed ? "reproduced" : "missing") + "; tr(y^2[x,y]x) " + (wheel_ok && wheel_listed ? "reproduced" : "missing")};
}

std::string run_cli(const std::string& args, int& status)
{
    const std::string cmd = std::string(KVLIE_CLI) + " " + args + " 2>/dev/null";
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        status = -1;
        return out;
    }
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    const int raw = pclose(pipe);
    status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return out;
}

Outcome cli_determinism(const std::string& workdir)
{
    int status = 0;
    const std::string t_path = workdir + "/acceptance_t.json", g_path = workdir + "/acceptance_g.json",
                      graph_path = workdir + "/acceptance_graph.json";
    std::ofstream(t_path) << json::to_json(TDer({gen(xy, 4, 1), gen(xy, 4, 0)})).dump();
    std::ofstream(g_path) << run_cli("exp --input " + t_path, status);
    std::ofstream(graph_path) << json::to_json(KGraph{1, {{0, 1}, {0, 2}}}).dump();
    const std::vector<std::string> commands = {
        "bch --degree 6",
        "duflo --degree 6",
        "div --input " + t_path,
        "classify --input " + t_path,
        "extend --input t12 --pattern 1,2,34",
        "braid --arity 4 --degree 5",
        "exp --input " + t_path,
        "compose --input " + g_path + " --input R --degree 4",
        "apply --input R --series ch --degree 6",
        "jcocycle --input " + g_path,
        "kv-solve --degree 4 --gauge symmetric",
        "assoc-solve --degree 4 --parity even",
        "check associator --phi solved --degree 4",
        "check hexagon --phi trivial --degree 2",
        "graphs --order 4",
        "weight example --tol 1e-8",
        "weight graph --input " + graph_path + " --samples 1000000 --seed 11",
        "angle --p 0.3,0.7 --q -0.4,1.2",
    };
    std::string differing;
    for (const auto& c : commands) {
        int s1 = 0, s2 = 0;
        const std::string a = run_cli(c, s1), b = run_cli(c, s2);
        if (a.empty() || a != b || s1 != s2 || s1 == 2) differing += " [" + c + "]";
    }
    return {differing.empty(), std::to_string(commands.size()) + " invocations covering all 16 verbs, each run twice" +
                                   (differing.empty() ? std::string(", byte-identical") : ", differing:" + differing)};
}

}  // namespace

int main(int argc, char** argv)
{
    const std::string workdir = argc > 1 ? argv[1] : ".";
    struct Criterion {
        int id;
        const char* title;
        double limit_s;  // 0: no runtime bound
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "BCH equals log(e^x e^y)", 10, bch_oracle},
        {2, "divergence cocycle", 30, divergence_cocycle},
        {3, "t = (y,x) is in krv", 0, t_in_krv},
        {4, "Duflo degree-2 term is -(1/24) tr(xy)", 0, duflo_anchor},
        {5, "R(ch(x,y)) = ch(y,x)", 0, r_swap},
        {6, "exp(t) is conjugation by e^{x+y}", 0, holonomy},
        {7, "infinitesimal braid relations", 0, braid_relations},
        {8, "KV solve at N = 4", 60, kv_solve},
        {9, "associator anchor and axioms", 300, associator_anchor},
        {10, "weight integral and Monte Carlo anchor", 0, weights},
        {11, "graph admissibility and reference symbols", 0, graphs},
        {12, "CLI determinism", 0, [&] { return cli_determinism(workdir); }},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.limit_s > 0 && secs >= c.limit_s) {
            o.pass = false;
            o.detail += " [over the " + std::to_string(static_cast<int>(c.limit_s)) + " s limit]";
        }
        if (!o.pass) ++failures;
        char time_buf[32];
        std::snprintf(time_buf, sizeof time_buf, "%.2f s", secs);
        std::cout << "criterion " << c.id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << c.title << " -- " << o.detail << " ("
                  << time_buf << ")" << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
