#pragma once

#include "solver_common.hpp"

namespace kvlie {

enum class KvGauge { symmetric, minimal_norm };

struct KvOptions {
    KvGauge gauge = KvGauge::symmetric;
    /// Also impose J(F) = h(x) + h(y) - h(x+y) with h(s) = sum_k c_k tr(s^k) solved
    /// alongside, one new coefficient per degree. Without it J(F) leaves the span from
    /// degree 5 on.
    bool divergence_condition = true;
};

/// Degreewise comparison of J(F) with the Duflo series and with the spans of
/// h(x) + h(y) - h(s), h(s) = sum_k c_k tr(s^k), for s = x+y and s = ch(x,y).
///
/// F carries ch to x+y and traces are invariant under tangential automorphisms, so
/// F.(h(x)+h(y)-h(ch)) = h(x)+h(y)-h(x+y). Since J(F^{-1}) = -F^{-1}.J(F), J(F) lies in the
/// x+y span exactly when J(F^{-1}) lies in the ch span.
struct KvDivergenceReport {
    CycSeries j;                       // J(F)
    CycSeries j_inverse;               // J(F^{-1})
    CycSeries duf;
    std::vector<bool> equals_plus_duf;   // index d: J(F)_d == duf_d
    std::vector<bool> equals_minus_duf;  // index d: J(F)_d == -duf_d
    std::vector<bool> equals_plus_transported;   // index d: J(F)_d == (F.duf)_d
    std::vector<bool> equals_minus_transported;  // index d: J(F)_d == -(F.duf)_d
    std::vector<bool> in_sum_span;       // index d: J(F) through degree d in the x+y span
    std::vector<bool> in_ch_span;        // index d: J(F) through degree d in the ch span
    std::vector<bool> inverse_in_ch_span;  // index d: J(F^{-1}) through degree d in the ch span
    std::vector<Rational> h;             // coefficients c_k when the divergence condition was solved
};

struct KvSolution {
    TAutElem f;
    TDer log;
    DegreeReport report;
    KvDivergenceReport divergence;
};

namespace detail {

/// tr(x^k) + tr(y^k) - tr(s^k) for k = 1..N at the order of s.
inline std::vector<CycSeries> kv_h_basis(const LieSeries& s)
{
    const Alphabet& a = s.alphabet();
    const int N = s.degree();
    std::vector<CycSeries> out;
    const AssocSeries x = AssocSeries::generator(a, N, 0), y = AssocSeries::generator(a, N, 1), c = s.to_assoc();
    out.emplace_back(a, N);  // k = 0 unused
    for (int k = 1; k <= N; ++k) out.push_back(tr_power(x, k) + tr_power(y, k) - tr_power(c, k));
    return out;
}

/// Is s truncated at d in the span of the given series truncated at d?
inline bool in_truncated_span(const CycSeries& s, const std::vector<CycSeries>& span, int d)
{
    RowIndex rows;
    linalg::IncrementalSpan base;
    auto coords = [&](const CycSeries& c) {
        linalg::SparseVector v;
        for (int e = 1; e <= d; ++e) append_coords(v, rows, 0, 0, c.terms(), e);
        std::erase_if(v, [](const auto& kv) { return sgn(kv.second) == 0; });
        return v;
    };
    for (const auto& h : span) base.insert(coords(h));
    return base.contains(coords(s));
}

/// Basis derivations of degree d on two letters: (component, Lyndon word), minus the inert
/// linear own-letter term.
inline std::vector<std::pair<int, Word>> tder_basis_keys(int n, int d)
{
    std::vector<std::pair<int, Word>> keys;
    for (int k = 0; k < n; ++k)
        for (const Word& w : lyndon_words(n, d))
            if (!(d == 1 && w[0] == k)) keys.emplace_back(k, w);
    return keys;
}

inline TDer tder_basis_element(const Alphabet& a, int N, int k, const Word& w)
{
    std::vector<LieSeries> c(static_cast<std::size_t>(a.size()), LieSeries(a, N));
    c[static_cast<std::size_t>(k)].add(w, 1);
    return TDer(std::move(c));
}

inline std::string tder_key_label(const Alphabet& a, int k, const Word& w)
{
    return "a" + std::to_string(k + 1) + ":" + a.render(w);
}

}  // namespace detail

inline KvDivergenceReport kv_divergence_report(const TAutElem& f, const TDer& log, std::vector<Rational> h = {})
{
    const int N = f.degree();
    const Alphabet& a = f.alphabet();
    const LieSeries x = LieSeries::generator(a, N, 0), y = LieSeries::generator(a, N, 1);
    const TAutElem g = make_taut(f.images(), log);
    KvDivergenceReport r{j_group_cocycle(g), j_group_cocycle(taut_invert(g)), duflo_series(N, a), {}, {}, {}, {}, {}, {}, {},
                         std::move(h)};
    const auto sum_basis = detail::kv_h_basis(x + y);
    const auto ch_basis = detail::kv_h_basis(bch(x, y));
    const auto n = static_cast<std::size_t>(N) + 1;
    for (auto* v : {&r.equals_plus_duf, &r.equals_minus_duf, &r.equals_plus_transported, &r.equals_minus_transported,
                    &r.in_sum_span, &r.in_ch_span, &r.inverse_in_ch_span})
        v->assign(n, true);
    const CycSeries moved = taut_apply(g, r.duf);
    for (int d = 1; d <= N; ++d) {
        const auto k = static_cast<std::size_t>(d);
        r.equals_plus_duf[k] = r.j.homogeneous(d) == r.duf.homogeneous(d);
        r.equals_minus_duf[k] = r.j.homogeneous(d) == -r.duf.homogeneous(d);
        r.equals_plus_transported[k] = r.j.homogeneous(d) == moved.homogeneous(d);
        r.equals_minus_transported[k] = r.j.homogeneous(d) == -moved.homogeneous(d);
        r.in_sum_span[k] = detail::in_truncated_span(r.j, sum_basis, d);
        r.in_ch_span[k] = detail::in_truncated_span(r.j, ch_basis, d);
        r.inverse_in_ch_span[k] = detail::in_truncated_span(r.j_inverse, ch_basis, d);
    }
    return r;
}

/// F = exp(u) with F(ch(x,y)) = x + y, solved one degree of u at a time. Degree d of u is
/// fixed by the degree-(d+1) part of the equation, so with images kept through N + 1 the
/// result satisfies the equation through degree N + 1.
inline KvSolution solve_kv(int N, const KvOptions& opt = {})
{
    if (N < 2) throw std::invalid_argument("solve_kv needs N >= 2");
    const Alphabet a(2);
    const int M = N + 1;
    const LieSeries chM = bch(LieSeries::generator(a, M, 0), LieSeries::generator(a, M, 1));
    const LieSeries sumM = LieSeries::generator(a, M, 0) + LieSeries::generator(a, M, 1);
    const auto h_basis = detail::kv_h_basis(LieSeries::generator(a, N, 0) + LieSeries::generator(a, N, 1));
    TDer u(a, N);
    std::vector<Rational> h(static_cast<std::size_t>(N) + 1);
    DegreeReport report;

    for (int d = 1; d <= N; ++d) {
        detail::RowIndex rows;
        const auto keys = detail::tder_basis_keys(2, d);
        const bool with_h = opt.divergence_condition;
        const std::size_t n_unknowns = keys.size() + (with_h ? 1 : 0);

        // KV1 residual at degree d+1: exp(u_<d)(ch) - (x+y).
        const TAutElem g = taut_exp(u.with_degree(d));
        const LieSeries lhs = LieSeries::from_assoc(
            substitute(chM.with_degree(d + 1).to_assoc(), std::span<const AssocSeries>(g.assoc_images())));
        linalg::SparseVector rhs;
        detail::append_coords(rhs, rows, 0, 0, (lhs - sumM.with_degree(d + 1)).terms(), d + 1, -1);

        std::vector<linalg::SparseVector> cols(n_unknowns);
        std::vector<TDer> elems;
        for (std::size_t j = 0; j < keys.size(); ++j) {
            TDer e = detail::tder_basis_element(a, N, keys[j].first, keys[j].second);
            const LieSeries img = tder_apply(e.with_degree(d + 1), sumM.with_degree(d + 1));
            detail::append_coords(cols[j], rows, 0, 0, img.terms(), d + 1);
            elems.push_back(std::move(e));
        }
        if (opt.gauge == KvGauge::symmetric) {
            // τ(u_d) = u_d with τ = τ1 τ2
            for (std::size_t j = 0; j < keys.size(); ++j) {
                const TDer diff = tau1(tau2(elems[j])) - elems[j];
                for (int k = 0; k < 2; ++k) detail::append_coords(cols[j], rows, 1, k, diff.component(k).terms(), d);
            }
        }
        if (with_h) {
            // div(u_d) - c_d H_d = -(J(exp u_<d))_d + sum_{k<d} c_k H_k at degree d
            const TDer lower = u.with_degree(d);
            CycSeries known = -j_group_cocycle(taut_exp(lower)).homogeneous(d);
            for (int k = 1; k < d; ++k) known += h_basis[static_cast<std::size_t>(k)].with_degree(d).homogeneous(d) * h[static_cast<std::size_t>(k)];
            detail::append_coords(rhs, rows, 2, 0, known.terms(), d);
            for (std::size_t j = 0; j < keys.size(); ++j)
                detail::append_coords(cols[j], rows, 2, 0, divergence(elems[j].with_degree(d)).terms(), d);
            detail::append_coords(cols.back(), rows, 2, 0, h_basis[static_cast<std::size_t>(d)].with_degree(d).terms(), d, -1);
        }

        auto outcome = detail::solve_columns(cols, rhs, rows.size());
        if (!outcome.solution) throw Infeasible(d, "Kashiwara-Vergne system has no solution at degree " + std::to_string(d));
        DegreeRecord rec;
        rec.degree = d;
        rec.unknowns = n_unknowns;
        rec.equations = rows.size();
        rec.rank = outcome.rank;
        rec.kernel = outcome.kernel;
        rec.gauge = *outcome.solution;
        for (const auto& [k, w] : keys) rec.basis.push_back(detail::tder_key_label(a, k, w));
        if (with_h) {
            rec.basis.push_back("h" + std::to_string(d));
            h[static_cast<std::size_t>(d)] = outcome.solution->back();
        }
        for (std::size_t j = 0; j < keys.size(); ++j)
            if (sgn((*outcome.solution)[j]) != 0) u += elems[j] * (*outcome.solution)[j];

        // independent re-evaluation of the defining equation at degree d+1
        const TAutElem check = taut_exp(u.with_degree(d));
        const LieSeries after = LieSeries::from_assoc(
            substitute(chM.with_degree(d + 1).to_assoc(), std::span<const AssocSeries>(check.assoc_images())));
        rec.residual_terms = (after - sumM.with_degree(d + 1)).terms().size();
        report.degrees.push_back(std::move(rec));
    }

    TAutElem f = taut_exp(u);
    KvSolution sol{f, u, std::move(report), kv_divergence_report(f, u, opt.divergence_condition ? h : std::vector<Rational>{})};
    return sol;
}

/// Residual of F(ch(x,y)) = x + y at the element's order, images cut at N.
inline LieSeries kv_residual(const TAutElem& f)
{
    const Alphabet& a = f.alphabet();
    const int N = f.degree();
    const auto x = LieSeries::generator(a, N, 0), y = LieSeries::generator(a, N, 1);
    return taut_apply(f, bch(x, y)) - (x + y);
}

/// F = e^{t/2} τ1(F) τ1(R^{-1}), F = e^{-t/2} τ1(F) R, and τ(F) = F, with t = (y,x) and
/// R = (e^y, 1). Group elements are read as conjugator tuples: e^{t/2} is conjugation by
/// e^{(x+y)/2}, which is taut_exp(-t/2) here.
inline std::vector<IdentityCheck> check_f_symmetries(const TAutElem& f)
{
    detail::require_arity(f.arity(), 2, "check_f_symmetries");
    const int N = f.degree();
    const Alphabet& a = f.alphabet();
    const LieSeries half = (LieSeries::generator(a, N, 0) + LieSeries::generator(a, N, 1)) * frac(1, 2);
    const TAutElem e_plus = inner_automorphism(half);
    const TAutElem e_minus = inner_automorphism(-half);
    const TAutElem R = r_element(N);
    const TAutElem tf = tau1(f);
    const TAutElem first = taut_compose(e_plus, taut_compose(tf, tau1(taut_invert(R))));
    const TAutElem second = taut_compose(e_minus, taut_compose(tf, R));
    const TAutElem tau = tau1(tau2(f));
    return {compare_identity("F = e^{t/2} tau1(F) tau1(R^-1)", f, first),
            compare_identity("F = e^{-t/2} tau1(F) R", f, second), compare_identity("tau(F) = F", f, tau)};
}

}  // namespace kvlie
