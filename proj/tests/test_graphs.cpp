#include "support.hpp"

#include <kvlie/weights.hpp>

#include <gtest/gtest.h>

#include <map>

using namespace kvlie;

namespace {

const Alphabet xy(2);

/// Every labeled admissible graph with n aerial vertices, one edge order per vertex.
std::vector<KGraph> all_labeled_graphs(int n)
{
    std::vector<std::pair<int, int>> choices;
    for (int a = 0; a < n + 2; ++a)
        for (int b = a + 1; b < n + 2; ++b) choices.push_back({a, b});
    std::vector<KGraph> out;
    std::vector<std::size_t> pick(static_cast<std::size_t>(n), 0);
    while (true) {
        KGraph g{n, {}};
        bool ok = true;
        for (int v = 0; v < n; ++v) {
            auto [a, b] = choices[pick[static_cast<std::size_t>(v)]];
            if (a == v || b == v) ok = false;
            g.edges.push_back({v, a});
            g.edges.push_back({v, b});
        }
        if (ok) out.push_back(g);
        int k = 0;
        while (k < n && ++pick[static_cast<std::size_t>(k)] == choices.size()) pick[static_cast<std::size_t>(k++)] = 0;
        if (k == n) break;
    }
    return out;
}

std::map<GraphKind, std::set<std::vector<std::pair<int, int>>>> brute_force_classes(int n)
{
    std::map<GraphKind, std::set<std::vector<std::pair<int, int>>>> out;
    for (const auto& g : all_labeled_graphs(n)) out[graph_kind(g)].insert(canonical_key(g));
    return out;
}

LieSeries X(int N) { return LieSeries::generator(xy, N, 0); }
LieSeries Y(int N) { return LieSeries::generator(xy, N, 1); }

}  // namespace

TEST(Graphs, CountsMatchBruteForce)
{
    for (int n = 1; n <= 4; ++n) {
        auto classes = brute_force_classes(n);
        EXPECT_EQ(enumerate_lie_graphs(n).size(), classes[GraphKind::lie].size()) << n;
        EXPECT_EQ(enumerate_wheel_graphs(n).size(), classes[GraphKind::wheel].size()) << n;
        std::set<std::vector<std::pair<int, int>>> lie_keys, wheel_keys;
        for (const auto& e : enumerate_lie_graphs(n)) lie_keys.insert(canonical_key(e.graph));
        for (const auto& e : enumerate_wheel_graphs(n)) wheel_keys.insert(canonical_key(e.graph));
        EXPECT_EQ(lie_keys, classes[GraphKind::lie]);
        EXPECT_EQ(wheel_keys, classes[GraphKind::wheel]);
    }
    EXPECT_EQ(enumerate_lie_graphs(1).size(), 1u);
    EXPECT_EQ(enumerate_lie_graphs(2).size(), 2u);
    EXPECT_EQ(enumerate_lie_graphs(3).size(), 5u);
    EXPECT_TRUE(enumerate_wheel_graphs(1).empty());
}

TEST(Graphs, EnumeratedGraphsAreAdmissible)
{
    for (int n = 1; n <= 5; ++n) {
        for (const auto& e : enumerate_lie_graphs(n)) {
            EXPECT_EQ(admissibility_violation(e.graph), "");
            EXPECT_EQ(graph_kind(e.graph), GraphKind::lie);
            EXPECT_EQ(e.zero_symbol, e.symbol.is_zero());
        }
        for (const auto& e : enumerate_wheel_graphs(n)) {
            EXPECT_EQ(admissibility_violation(e.graph), "");
            EXPECT_EQ(graph_kind(e.graph), GraphKind::wheel);
        }
    }
}

TEST(Graphs, NOneSymbol)
{
    auto e = enumerate_lie_graphs(1);
    ASSERT_EQ(e.size(), 1u);
    EXPECT_EQ(e[0].symbol, bracket(X(2), Y(2)));
    EXPECT_EQ(e[0].expression, "[x,y]");
}

TEST(Graphs, LieTreeSymbol)
{
    const int N = 4;
    auto g = lie_graph_from_expression("[[x,[x,y]],y]");
    EXPECT_EQ(g.n, 3);
    EXPECT_EQ(lie_symbol(g), bracket(bracket(X(N), bracket(X(N), Y(N))), Y(N)));
    bool found = false;
    for (const auto& e : enumerate_lie_graphs(3))
        if (canonical_key(e.graph) == canonical_key(g)) {
            found = true;
            EXPECT_TRUE(e.symbol == lie_symbol(g) || e.symbol == -lie_symbol(g));
        }
    EXPECT_TRUE(found);
}

TEST(Graphs, WheelSymbol)
{
    // cycle 0 -> 1 -> 2 -> 3 -> 0, spokes y, y, [x,y] (vertex 4), x
    const int n = 5;
    KGraph g{n, {{0, 6}, {0, 1}, {1, 6}, {1, 2}, {2, 4}, {2, 3}, {3, 5}, {3, 0}, {4, 5}, {4, 6}}};
    ASSERT_EQ(graph_kind(g), GraphKind::wheel);
    auto x = AssocSeries::generator(xy, n, 0), y = AssocSeries::generator(xy, n, 1);
    EXPECT_EQ(wheel_symbol(g), tr_project(y * y * commutator(x, y) * x));
    bool found = false;
    for (const auto& e : enumerate_wheel_graphs(n))
        if (canonical_key(e.graph) == canonical_key(g)) {
            found = true;
            EXPECT_TRUE(e.symbol == wheel_symbol(g) || e.symbol == -wheel_symbol(g));
        }
    EXPECT_TRUE(found);
}

TEST(Graphs, PureWheelSymmetry)
{
    for (int k = 2; k <= 5; ++k) {
        int hits = 0;
        for (const auto& e : enumerate_wheel_graphs(k)) {
            if (e.spokes != std::vector<std::string>(static_cast<std::size_t>(k), "x")) continue;
            ++hits;
            EXPECT_EQ(e.automorphisms, k);
            CycSeries expect(xy, k);
            expect.add(Word(static_cast<std::size_t>(k), 0), 1);
            EXPECT_EQ(e.symbol, expect);
        }
        EXPECT_EQ(hits, 1);
    }
    for (const auto& e : enumerate_wheel_graphs(2))
        EXPECT_EQ(e.automorphisms, e.spokes[0] == e.spokes[1] ? 2 : 1);
}

TEST(Graphs, ZeroSymbolsFlagged)
{
    int zeros = 0;
    for (const auto& e : enumerate_lie_graphs(3))
        if (e.zero_symbol) {
            ++zeros;
            EXPECT_EQ(e.expression, "[[x,y],[x,y]]");
            EXPECT_EQ(e.automorphisms, 2);
        }
    EXPECT_EQ(zeros, 1);
}

TEST(Graphs, ExpressionsReparse)
{
    for (int n = 1; n <= 3; ++n) {
        std::set<std::string> seen;
        for (const auto& e : enumerate_lie_graphs(n)) {
            if (e.zero_symbol) continue;
            auto again = lie_graph_from_expression(lie_expression(e.graph));
            EXPECT_EQ(lie_symbol(again), e.symbol);
            EXPECT_EQ(canonical_key(again), canonical_key(e.graph));
            EXPECT_TRUE(seen.insert(lie_expression(e.graph)).second);
        }
    }
    EXPECT_THROW(lie_graph_from_expression("[x,y"), std::invalid_argument);
    EXPECT_THROW(lie_graph_from_expression("[x,x]"), std::invalid_argument);
}

TEST(Graphs, EdgeOrderSignOnSymbols)
{
    std::mt19937 rng(5);
    for (const auto& e : enumerate_lie_graphs(3)) {
        KGraph g = e.graph;
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<std::size_t> perm(g.edges.size());
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            KGraph h{g.n, {}};
            for (auto p : perm) h.edges.push_back(g.edges[p]);
            int inv = 0;
            for (std::size_t i = 0; i < perm.size(); ++i)
                for (std::size_t j = i + 1; j < perm.size(); ++j)
                    if (perm[i] > perm[j]) ++inv;
            EXPECT_EQ(lie_symbol(h), lie_symbol(g) * (inv % 2 ? -1 : 1));
        }
    }
}

TEST(Graphs, RejectsInadmissible)
{
    EXPECT_NE(admissibility_violation(KGraph{1, {{0, 1}}}), "");
    EXPECT_NE(admissibility_violation(KGraph{1, {{0, 1}, {0, 1}}}), "");
    EXPECT_NE(admissibility_violation(KGraph{1, {{0, 0}, {0, 1}}}), "");
    EXPECT_NE(admissibility_violation(KGraph{1, {{1, 0}, {0, 2}}}), "");
    EXPECT_NE(admissibility_violation(KGraph{2, {{0, 2}, {0, 3}, {0, 1}, {1, 2}}}), "");
    EXPECT_EQ(admissibility_violation(KGraph{1, {{0, 1}, {0, 2}}}), "");
    EXPECT_THROW(validate(KGraph{1, {{0, 0}, {0, 1}}}), std::invalid_argument);
    EXPECT_THROW(enumerate_lie_graphs(0), std::out_of_range);
    EXPECT_THROW(enumerate_wheel_graphs(max_graph_order + 1), std::out_of_range);
    EXPECT_THROW(lie_symbol(KGraph{2, {{0, 1}, {0, 2}, {1, 0}, {1, 3}}}), std::invalid_argument);
}

TEST(Angles, Examples)
{
    const Point i(0, 1);
    EXPECT_NEAR(angle(i, 2.0 * i, AngleKind::hyperbolic), 0.0, 1e-15);
    EXPECT_NEAR(angle(0.0, Point(1, 1), AngleKind::euclidean), std::numbers::pi / 4, 1e-15);
    EXPECT_THROW(angle(i, i, AngleKind::hyperbolic), std::invalid_argument);
    EXPECT_THROW(angle(-i, i, AngleKind::hyperbolic), std::invalid_argument);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        Point p(u(rng) - 1.5, u(rng)), q(u(rng) - 1.5, u(rng));
        double a = u(rng), b = u(rng) - 1.5;
        EXPECT_NEAR(angle(p, q, AngleKind::hyperbolic), angle(a * p + b, a * q + b, AngleKind::hyperbolic), 1e-12);
    }
}

TEST(Angles, RealSourceHasNoDifferential)
{
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        Point p(u(rng), 0.0), q(u(rng), std::abs(u(rng)) + 0.1);
        EXPECT_NEAR(angle(p, q, AngleKind::hyperbolic), 0.0, 1e-15);
        EXPECT_NEAR(angle_derivative(p, q, AngleKind::hyperbolic, AngleEnd::source, 1.0), 0.0, 1e-8);
        EXPECT_NEAR(angle_derivative(p, q, AngleKind::hyperbolic, AngleEnd::target, 1.0), 0.0, 1e-8);
        EXPECT_NEAR(angle_derivative(p, q, AngleKind::hyperbolic, AngleEnd::target, Point(0, 1)), 0.0, 1e-8);
    }
    // the Euclidean angle does vary with a real source
    EXPECT_GT(std::abs(angle_derivative(0.0, Point(1, 1), AngleKind::euclidean, AngleEnd::source, 1.0)), 0.1);
}

TEST(Angles, AnalyticGradientMatchesProbe)
{
    const Point p(0.3, 0.7), q(-0.4, 1.2);
    auto g = detail::hyperbolic_gradient(p, q);
    const Point dirs[2] = {Point(1, 0), Point(0, 1)};
    for (int k = 0; k < 2; ++k) {
        EXPECT_NEAR(g[static_cast<std::size_t>(k)], angle_derivative(p, q, AngleKind::hyperbolic, AngleEnd::source, dirs[k]), 1e-7);
        EXPECT_NEAR(g[static_cast<std::size_t>(k) + 2], angle_derivative(p, q, AngleKind::hyperbolic, AngleEnd::target, dirs[k]), 1e-7);
    }
}

TEST(Quadrature, ExampleIntegral)
{
    auto e = example_weight_quadrature(1e-8);
    EXPECT_NEAR(e.value, 1.0 / 24, 1e-8);
    EXPECT_EQ(e.method, EstimateMethod::quadrature);
    EXPECT_EQ(e.tolerance, 1e-8);
    EXPECT_FALSE(e.standard_error);
    EXPECT_NEAR(example_weight_quadrature_half(1e-8).value, e.value, 1e-8);
    auto li2 = quadrature([](double s, double sc) { return std::log(sc) / s; }, 0.0, 1.0, 1e-10);
    EXPECT_NEAR(li2.value, -std::numbers::pi * std::numbers::pi / 6, 1e-9);
    EXPECT_NEAR(example_form(0.3, 0.7), example_form(0.7, 0.3), 1e-15);
    EXPECT_THROW(example_weight_quadrature(0), std::invalid_argument);
}

TEST(MonteCarlo, TwoEdgeAnchor)
{
    KGraph g{1, {{0, 1}, {0, 2}}};
    auto e = weight_montecarlo(g, {1'000'000, 42});
    ASSERT_TRUE(e.standard_error);
    EXPECT_LT(*e.standard_error, 0.01);
    EXPECT_NEAR(e.value, 0.5, 3 * *e.standard_error);
    // w Γ reproduces the degree-2 part of ch
    auto term = lie_symbol(g) * frac(1, 2);
    EXPECT_EQ(term, bch(X(2), Y(2)).homogeneous(2));
}

TEST(MonteCarlo, DeterministicAndThreadIndependent)
{
    KGraph g{1, {{0, 1}, {0, 2}}};
    MonteCarloOptions a{200'000, 9, 1 << 14, 1, 0.01};
    MonteCarloOptions b = a;
    b.threads = 3;
    auto ea = weight_montecarlo(g, a), eb = weight_montecarlo(g, b);
    EXPECT_EQ(ea.value, eb.value);
    EXPECT_EQ(*ea.standard_error, *eb.standard_error);
    EXPECT_EQ(weight_montecarlo(g, a).value, ea.value);
    a.seed = 10;
    EXPECT_NE(weight_montecarlo(g, a).value, ea.value);
}

TEST(MonteCarlo, StandardErrorScaling)
{
    KGraph g{1, {{0, 1}, {0, 2}}};
    auto e1 = weight_montecarlo(g, {200'000, 3});
    auto e2 = weight_montecarlo(g, {400'000, 3});
    const double ratio = *e2.standard_error / *e1.standard_error;
    EXPECT_NEAR(ratio, 1 / std::sqrt(2.0), 0.2 / std::sqrt(2.0));
}

TEST(MonteCarlo, EdgeOrderFlipsWeightAndSymbolTogether)
{
    KGraph g{1, {{0, 1}, {0, 2}}}, h{1, {{0, 2}, {0, 1}}};
    auto wg = weight_montecarlo(g, {100'000, 5}), wh = weight_montecarlo(h, {100'000, 5});
    EXPECT_EQ(wh.value, -wg.value);
    EXPECT_EQ(lie_symbol(h), -lie_symbol(g));
    EXPECT_EQ(lie_symbol(g) * wg.value, lie_symbol(h) * wh.value);
}

TEST(MonteCarlo, DegreeThreeBchCoefficient)
{
    // [x,[x,y]] enters ch with coefficient 1/12
    auto g = lie_graph_from_expression("[x,[x,y]]");
    auto e = weight_montecarlo(g, {400'000, 17});
    EXPECT_NEAR(e.value, 1.0 / 12, 4 * *e.standard_error);
    EXPECT_EQ(bch(X(3), Y(3)).homogeneous(3).coeff(xy.parse("xxy")), frac(1, 12));
}

TEST(MonteCarlo, ExampleAgreesWithQuadrature)
{
    auto mc = example_weight_montecarlo({1'000'000, 23});
    auto q = example_weight_quadrature(1e-10);
    EXPECT_NEAR(mc.value, q.value, 3 * *mc.standard_error + 1e-10);
    for (double s : {0.2, 0.6}) {
        auto f = example_fiber_montecarlo(s, {400'000, 29});
        EXPECT_NEAR(f.value, example_form(s, 1 - s), 4 * *f.standard_error) << s;
    }
}

TEST(MonteCarlo, RejectsBadInput)
{
    EXPECT_THROW(weight_montecarlo(lie_graph_from_expression("[[x,y],[x,y]]"), {}), std::invalid_argument);
    EXPECT_THROW(weight_montecarlo(KGraph{1, {{0, 1}, {0, 2}}}, {1, 1}), std::invalid_argument);
    EXPECT_THROW(weight_montecarlo(KGraph{1, {{0, 0}, {0, 2}}}, {}), std::invalid_argument);
    EXPECT_THROW(example_fiber_montecarlo(1.5, {}), std::invalid_argument);
}
