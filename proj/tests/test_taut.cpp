#include "support.hpp"

#include <kvlie/taut.hpp>

#include <gtest/gtest.h>

using namespace kvlie;

namespace {

const Alphabet xy(2);
const Alphabet xyz(3);

LieSeries gen(const Alphabet& a, int N, int i) { return LieSeries::generator(a, N, i); }

TDer random_tder(std::mt19937& rng, const Alphabet& a, int N, int max_deg = 2, double density = 0.5)
{
    std::vector<LieSeries> c;
    for (int i = 0; i < a.size(); ++i) c.push_back(fixtures::random_lie(rng, a, N, 1, max_deg, density));
    return TDer(std::move(c));
}

}  // namespace

TEST(Divide, RecoversRandomQuotients)
{
    std::mt19937 rng(71);
    for (int trial = 0; trial < 30; ++trial) {
        auto a = fixtures::random_lie(rng, xyz, 5, 1, 4, 0.4);
        const int i = trial % 3;
        a.add(Word{static_cast<Letter>(i)}, -a.coeff(Word{static_cast<Letter>(i)}));
        auto r = commutator(AssocSeries::generator(xyz, 5, i), a.to_assoc());
        auto q = detail::divide_ad(r, i);
        ASSERT_TRUE(q);
        EXPECT_EQ(*q, a);
    }
    AssocSeries bad(xy, 3, false);
    bad.add(xy.parse("yy"), 1);
    EXPECT_FALSE(detail::divide_ad(bad, 0));
}

TEST(TAut, ExpLogRoundTrip)
{
    std::mt19937 rng(73);
    for (int trial = 0; trial < 8; ++trial) {
        auto u = random_tder(rng, trial % 2 ? xy : xyz, 5, 3);
        auto g = taut_exp(u);
        EXPECT_EQ(taut_log(g), u);
        EXPECT_EQ(taut_exp(taut_log(g)), g);
    }
    EXPECT_EQ(taut_exp(TDer(xy, 4)), TAutElem::identity(xy, 4));
}

TEST(TAut, RElementAndExp)
{
    const int N = 6;
    auto x = gen(xy, N, 0), y = gen(xy, N, 1);
    auto R = r_element(N);
    // With the e^{+u} convention, R is the exponential of (-y, 0).
    EXPECT_EQ(taut_exp(TDer({-y, LieSeries(xy, N)})), R);
    EXPECT_EQ(taut_apply(R, bch(x, y)), bch(y, x));
    EXPECT_EQ(taut_apply(R, y), y);
    EXPECT_EQ(taut_log(R), TDer({-y, LieSeries(xy, N)}));
}

TEST(TAut, HolonomyIsInner)
{
    const int N = 6;
    auto x = gen(xy, N, 0), y = gen(xy, N, 1);
    TDer t({y, x});
    // e^{t} is s -> e^{-(x+y)} s e^{x+y}; its inverse e^{-t} is Ad_{e^{x+y}}.
    EXPECT_EQ(taut_exp(t), inner_automorphism(-(x + y)));
    EXPECT_EQ(taut_exp(-t), inner_automorphism(x + y));
    for (int i = 0; i < 2; ++i) {
        auto xi = gen(xy, N, i);
        auto ea = exp_series((x + y).to_assoc());
        auto eb = exp_series(-(x + y).to_assoc());
        EXPECT_EQ(taut_apply(taut_exp(-t), xi).to_assoc(), ea * xi.to_assoc() * eb);
    }
}

TEST(TAut, ComposeInvert)
{
    std::mt19937 rng(79);
    const int N = 5;
    for (int trial = 0; trial < 6; ++trial) {
        auto g = taut_exp(random_tder(rng, xy, N, 3));
        auto h = taut_exp(random_tder(rng, xy, N, 3));
        auto id = TAutElem::identity(xy, N);
        EXPECT_EQ(taut_compose(g, id), g);
        EXPECT_EQ(taut_compose(id, g), g);
        EXPECT_EQ(taut_compose(g, taut_invert(g)), id);
        EXPECT_EQ(taut_compose(taut_invert(g), g), id);
        // (g h)(s) = g(h(s))
        auto s = fixtures::random_lie(rng, xy, N, 1, 3);
        EXPECT_EQ(taut_apply(taut_compose(g, h), s), taut_apply(g, taut_apply(h, s)));
    }
    EXPECT_THROW(taut_compose(TAutElem::identity(xy, 3), TAutElem::identity(xy, 4)), AmbientMismatch);
}

TEST(TAut, BchCompatibility)
{
    std::mt19937 rng(83);
    const int N = 5;
    for (int trial = 0; trial < 4; ++trial) {
        auto u = random_tder(rng, xy, N, 2), v = random_tder(rng, xy, N, 2);
        EXPECT_EQ(taut_exp(tder_bch(u, v)), taut_compose(taut_exp(u), taut_exp(v)));
    }
}

TEST(TAut, ApplyIsAutomorphism)
{
    std::mt19937 rng(89);
    const int N = 5;
    auto g = taut_exp(random_tder(rng, xyz, N, 2));
    for (int trial = 0; trial < 5; ++trial) {
        auto a = fixtures::random_lie(rng, xyz, N, 1, 2), b = fixtures::random_lie(rng, xyz, N, 1, 2);
        EXPECT_EQ(taut_apply(g, bracket(a, b)), bracket(taut_apply(g, a), taut_apply(g, b)));
        auto c = fixtures::random_assoc(rng, xyz, N, 1, 3, 0.3);
        EXPECT_EQ(taut_apply(g, tr_project(c)), tr_project(taut_apply(g, c)));
    }
    auto s = fixtures::random_lie(rng, xyz, N, 1, 4);
    EXPECT_EQ(taut_apply(TAutElem::identity(xyz, N), s), s);
}

TEST(TAut, FromImagesValidates)
{
    const int N = 4;
    auto x = gen(xy, N + 1, 0), y = gen(xy, N + 1, 1);
    auto g = TAutElem::from_images(inner_automorphism(gen(xy, N, 1)).images());
    EXPECT_EQ(g.degree(), N);
    EXPECT_EQ(taut_exp(taut_log(g)), g);
    EXPECT_THROW(TAutElem::from_images({x + y, y}), NotTangential);
    EXPECT_THROW(TAutElem::from_images({x + bracket(y, bracket(x, y)), y}), NotTangential);
    // x + [x,y] alone is a conjugate only through degree 2
    EXPECT_THROW(TAutElem::from_images({x + bracket(x, y), y}), NotTangential);
}

TEST(TAut, ConjugatorsRoundTrip)
{
    std::mt19937 rng(97);
    const int N = 5;
    for (int trial = 0; trial < 4; ++trial) {
        auto g = taut_exp(random_tder(rng, xyz, N, 2));
        auto gam = g.conjugators();
        for (int i = 0; i < 3; ++i) EXPECT_EQ(sgn(gam[static_cast<std::size_t>(i)].coeff(Word{static_cast<Letter>(i)})), 0);
        EXPECT_EQ(from_conjugators(gam), g);
    }
}

TEST(JCocycle, Examples)
{
    const int N = 5;
    EXPECT_TRUE(j_group_cocycle(TAutElem::identity(xy, N)).is_zero());
    EXPECT_TRUE(j_group_cocycle(r_element(N)).is_zero());
    auto u = TDer({bracket(gen(xy, N, 0), gen(xy, N, 1)), LieSeries(xy, N)});
    EXPECT_EQ(j_group_cocycle(taut_exp(u)).homogeneous(2), divergence(u));
}

TEST(JCocycle, CocycleIdentity)
{
    std::mt19937 rng(101);
    const int N = 5;
    for (int trial = 0; trial < 6; ++trial) {
        auto g = taut_exp(random_tder(rng, xy, N, 3));
        auto h = taut_exp(random_tder(rng, xy, N, 3));
        auto gh = taut_compose(g, h);
        EXPECT_EQ(j_group_cocycle(gh), j_group_cocycle(g) + taut_apply(g, j_group_cocycle(h)));
    }
}

TEST(Extend, GroupPatterns)
{
    const int N = 4;
    auto x = gen(xyz, N, 0), y = gen(xyz, N, 1), z = gen(xyz, N, 2);
    EXPECT_EQ(taut_extend(TAutElem::identity(xy, N), Pattern::parse("12,3")), TAutElem::identity(xyz, N));
    auto r = taut_extend(r_element(N), Pattern::parse("12,3"));
    EXPECT_EQ(r, from_conjugators({z, z, LieSeries(xyz, N)}));

    std::mt19937 rng(103);
    for (const char* pat : {"1,23", "12,3", "2,3", "1,2 of 3", "13,2"}) {
        auto u = random_tder(rng, xy, N, 3);
        auto p = Pattern::parse(pat);
        auto plain = TAutElem::from_images(taut_exp(u).images());  // drop the log certificate
        EXPECT_EQ(taut_extend(plain, p), taut_exp(tder_extend(u, p))) << pat;
    }
}

TEST(Extend, PatternsCompose)
{
    // "1,2 of 3" then "1,23,4" equals the direct "1,23 of 4".
    std::mt19937 rng(107);
    const int N = 4;
    auto u = random_tder(rng, xy, N, 3);
    auto g = taut_exp(u);
    auto twice = taut_extend(taut_extend(g, Pattern::parse("1,2 of 3")), Pattern::parse("1,23,4"));
    auto once = taut_extend(g, Pattern::parse("1,23 of 4"));
    EXPECT_EQ(twice, once);
}

TEST(Symmetry, Involutions)
{
    std::mt19937 rng(109);
    const int N = 5;
    auto x = gen(xy, N, 0), y = gen(xy, N, 1);
    TDer t({y, x});
    EXPECT_EQ(tau1(t), t);
    auto u = random_tder(rng, xy, N, 4);
    EXPECT_EQ(tau1(tau1(u)), u);
    EXPECT_EQ(tau2(tau2(u)), u);
    EXPECT_EQ(tau2(u).homogeneous(2), u.homogeneous(2));
    EXPECT_EQ(tau2(u).homogeneous(3), -u.homogeneous(3));
    auto v = random_tder(rng, xy, N, 3);
    EXPECT_EQ(tau1(tder_bracket(u, v)), tder_bracket(tau1(u), tau1(v)));
    EXPECT_EQ(tau2(tder_bracket(u, v)), tder_bracket(tau2(u), tau2(v)));

    auto g = taut_exp(u), h = taut_exp(v);
    EXPECT_EQ(tau1(g), taut_exp(tau1(u)));
    EXPECT_EQ(tau2(g), taut_exp(tau2(u)));
    EXPECT_EQ(tau1(taut_compose(g, h)), taut_compose(tau1(g), tau1(h)));
    EXPECT_EQ(tau2(taut_compose(g, h)), taut_compose(tau2(g), tau2(h)));

    // τ1(R) = R^{2,1} = (1, e^x)
    EXPECT_EQ(tau1(r_element(N)), from_conjugators({LieSeries(xy, N), x}));

    auto w = random_tder(rng, xyz, N, 3);
    EXPECT_EQ(kappa(kappa(w)), w);
    EXPECT_EQ(kappa(taut_exp(w)), taut_exp(kappa(w)));
    EXPECT_THROW(kappa(u), AmbientMismatch);
    EXPECT_THROW(tau1(w), AmbientMismatch);
}
