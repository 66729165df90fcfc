#pragma once

#include "braid.hpp"
#include "solver_common.hpp"

namespace kvlie {

enum class Parity { even, unconstrained };

enum class Axiom { duality, pentagon, hexagon_plus, hexagon_minus, all };

struct AssociatorOptions {
    Parity parity = Parity::even;
    int hexagon_sign = 1;  // exponents mu = hexagon_sign / 2
};

struct AssociatorCandidate {
    TAutElem phi;
    TDer log;
    bool group_like = false;
    std::vector<bool> t3_member;              // index d: log degree-d part lies in the image of t_3
    std::vector<linalg::Vector> coordinates;  // index d: coordinates on braid_basis at degree d
    std::vector<std::vector<std::string>> labels;
};

struct AssociatorSolution {
    AssociatorCandidate candidate;
    DegreeReport report;
};

namespace detail {

/// Group element written exp(s u) in the conjugator picture, i.e. taut_exp(-s u) here.
inline TAutElem conjugator_exp(const TDer& u, const Rational& s) { return taut_exp(u * (-s)); }

inline TAutElem compose_all(std::initializer_list<TAutElem> factors)
{
    auto it = factors.begin();
    TAutElem out = *it++;
    for (; it != factors.end(); ++it) out = taut_compose(out, *it);
    return out;
}

inline TDer braid_sum(const Alphabet& a3, int degree)
{
    return braid_embed(0, 1, a3, degree) + braid_embed(0, 2, a3, degree) + braid_embed(1, 2, a3, degree);
}

/// Both sides of one axiom. `extend` places Φ in a pattern.
template <class Extend>
std::pair<TAutElem, TAutElem> axiom_sides(Axiom which, const TAutElem& phi, Extend&& extend)
{
    const int N = phi.degree();
    const Alphabet& a3 = phi.alphabet();
    switch (which) {
        case Axiom::duality:
            return {taut_compose(extend("3,2,1"), phi), TAutElem::identity(a3, N)};
        case Axiom::pentagon:
            return {taut_compose(extend("1,2,34"), extend("12,3,4")),
                    compose_all({extend("2,3,4"), extend("1,23,4"), extend("1,2,3 of 4")})};
        case Axiom::hexagon_plus:
        case Axiom::hexagon_minus: {
            const Rational mu = frac(which == Axiom::hexagon_plus ? 1 : -1, 2);
            const TAutElem lhs = compose_all({conjugator_exp(braid_embed(0, 1, a3, N), mu), extend("3,1,2"),
                                              conjugator_exp(braid_embed(0, 2, a3, N), mu), extend("2,3,1"),
                                              conjugator_exp(braid_embed(1, 2, a3, N), mu), phi});
            return {lhs, conjugator_exp(braid_sum(a3, N), mu)};
        }
        case Axiom::all: break;
    }
    throw std::invalid_argument("axiom_sides needs a single axiom");
}

inline const char* axiom_name(Axiom a)
{
    switch (a) {
        case Axiom::duality: return "duality";
        case Axiom::pentagon: return "pentagon";
        case Axiom::hexagon_plus: return "hexagon+";
        case Axiom::hexagon_minus: return "hexagon-";
        case Axiom::all: return "all";
    }
    return "?";
}

/// Solver path: patterns applied to the logarithm, then exponentiated.
inline std::vector<std::pair<TAutElem, TAutElem>> solver_sides(const TDer& log, int hexagon_sign)
{
    const TAutElem phi = taut_exp(log);
    auto extend = [&](const char* p) { return taut_exp(tder_extend(log, Pattern::parse(p))); };
    std::vector<std::pair<TAutElem, TAutElem>> out;
    out.push_back(axiom_sides(Axiom::duality, phi, extend));
    out.push_back(axiom_sides(Axiom::pentagon, phi, extend));
    out.push_back(axiom_sides(hexagon_sign > 0 ? Axiom::hexagon_plus : Axiom::hexagon_minus, phi, extend));
    return out;
}

inline linalg::SparseVector axiom_residual(const TDer& log, int hexagon_sign, RowIndex& rows, int image_degree)
{
    linalg::SparseVector v;
    const auto sides = solver_sides(log, hexagon_sign);
    for (std::size_t k = 0; k < sides.size(); ++k)
        append_image_difference(v, rows, static_cast<int>(k), sides[k].first, sides[k].second, image_degree);
    return v;
}

}  // namespace detail

/// Degree-by-degree solve of duality, pentagon and one hexagon for log Φ in the image of
/// t_3. Degree d of the logarithm is fixed by the image-degree d+1 part of the axioms, which
/// is affine in it; each degree is evaluated at truncation d.
inline AssociatorSolution solve_associator(int N, const AssociatorOptions& opt = {})
{
    if (N < 2) throw std::invalid_argument("solve_associator needs N >= 2");
    if (opt.hexagon_sign != 1 && opt.hexagon_sign != -1) throw std::invalid_argument("hexagon sign must be +1 or -1");
    const Alphabet a3(3);
    const auto basis = braid_basis(a3, N, N);
    TDer log(a3, N);
    DegreeReport report;
    AssociatorCandidate cand{TAutElem::identity(a3, N), log, false, {true}, {{}}, {{}}};

    for (int d = 1; d <= N; ++d) {
        const auto& bd = basis[static_cast<std::size_t>(d)];
        const bool frozen = opt.parity == Parity::even && d % 2 == 1;
        const TDer lower = log.with_degree(d);
        detail::RowIndex rows;
        const linalg::SparseVector base = detail::axiom_residual(lower, opt.hexagon_sign, rows, d + 1);
        std::vector<linalg::SparseVector> cols;
        if (!frozen)
            for (const auto& b : bd) {
                linalg::SparseVector c = detail::axiom_residual(lower + b.value.with_degree(d), opt.hexagon_sign, rows, d + 1);
                for (const auto& [r, v] : base) c[r] -= v;
                cols.push_back(std::move(c));
            }
        linalg::SparseVector rhs;
        for (const auto& [r, v] : base) rhs[r] = -v;
        auto outcome = detail::solve_columns(cols, rhs, rows.size());
        if (!outcome.solution)
            throw Infeasible(d, "associator axioms have no solution at degree " + std::to_string(d) + " (" +
                                    std::to_string(detail::count_nonzero(base)) + " residual terms)");
        DegreeRecord rec;
        rec.degree = d;
        rec.unknowns = cols.size();
        rec.equations = rows.size();
        rec.rank = outcome.rank;
        rec.kernel = outcome.kernel;
        rec.gauge = *outcome.solution;
        std::vector<std::string> labels;
        if (!frozen)
            for (std::size_t j = 0; j < bd.size(); ++j) {
                labels.push_back(bd[j].label);
                if (sgn((*outcome.solution)[j]) != 0) log += bd[j].value * (*outcome.solution)[j];
            }
        rec.basis = labels;

        // re-evaluate after the update
        detail::RowIndex check_rows;
        rec.residual_terms = detail::count_nonzero(detail::axiom_residual(log.with_degree(d), opt.hexagon_sign, check_rows, d + 1));
        report.degrees.push_back(std::move(rec));
        cand.coordinates.push_back(frozen ? linalg::Vector(bd.size()) : *outcome.solution);
        cand.labels.push_back(std::move(labels));
    }

    cand.log = log;
    cand.phi = taut_exp(log);
    cand.group_like = taut_log(TAutElem::from_images(cand.phi.images())) == log;
    for (int d = 1; d <= N; ++d)
        cand.t3_member.push_back(tn_membership(log.homogeneous(d), d, basis[static_cast<std::size_t>(d)]).has_value());
    return {std::move(cand), std::move(report)};
}

/// Axiom residuals through the checker path: Φ is placed in each pattern through its
/// conjugators (no logarithm involved) and the factors are composed as group elements.
inline std::vector<IdentityCheck> check_associator_axioms(const TAutElem& phi, Axiom which = Axiom::all)
{
    detail::require_arity(phi.arity(), 3, "check_associator_axioms");
    const TAutElem plain = TAutElem::from_images(phi.images());
    auto extend = [&](const char* p) { return taut_extend(plain, Pattern::parse(p)); };
    std::vector<Axiom> axioms;
    if (which == Axiom::all) axioms = {Axiom::duality, Axiom::pentagon, Axiom::hexagon_plus, Axiom::hexagon_minus};
    else axioms = {which};
    std::vector<IdentityCheck> out;
    for (Axiom a : axioms) {
        auto [lhs, rhs] = detail::axiom_sides(a, plain, extend);
        out.push_back(compare_identity(detail::axiom_name(a), lhs, rhs));
    }
    return out;
}

/// Φ = F^{1,23} F^{2,3} (F^{12,3} F^{1,2})^{-1} for F on two generators.
inline TAutElem associator_from_kv(const TAutElem& f)
{
    detail::require_arity(f.arity(), 2, "associator_from_kv");
    auto ext = [&](const char* p) { return taut_extend(f, Pattern::parse(p)); };
    return taut_compose(taut_compose(ext("1,23"), ext("2,3 of 3")),
                        taut_invert(taut_compose(ext("12,3"), ext("1,2 of 3"))));
}

}  // namespace kvlie
