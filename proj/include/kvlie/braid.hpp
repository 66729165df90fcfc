#pragma once

#include "linalg.hpp"
#include "tder.hpp"

namespace kvlie {

/// t^{ij} in tder_n: component i is x_j, component j is x_i, the rest vanish (0-based).
inline TDer braid_embed(int i, int j, const Alphabet& a, int degree)
{
    const int n = a.size();
    if (i == j || i < 0 || j < 0 || i >= n || j >= n)
        throw std::invalid_argument("braid generator needs distinct indices in 1.." + std::to_string(n));
    std::vector<LieSeries> c;
    for (int k = 0; k < n; ++k) {
        if (k == i) c.push_back(LieSeries::generator(a, degree, j));
        else if (k == j) c.push_back(LieSeries::generator(a, degree, i));
        else c.emplace_back(a, degree);
    }
    return TDer(std::move(c));
}

inline TDer braid_embed(int i, int j, int n, int degree) { return braid_embed(i, j, Alphabet(n), degree); }

struct BraidElement {
    std::string label;  // bracket expression in the t^{ij}, e.g. "[t12,t23]"
    TDer value;
};

/// Generators t^{ij}, i < j, ordered by distance j - i and then by i (t12, t23, t13 for n = 3).
inline std::vector<BraidElement> braid_generators(const Alphabet& a, int degree)
{
    std::vector<BraidElement> g;
    const int n = a.size();
    for (int gap = 1; gap < n; ++gap)
        for (int i = 0; i + gap < n; ++i)
            g.push_back({"t" + std::to_string(i + 1) + std::to_string(i + gap + 1), braid_embed(i, i + gap, a, degree)});
    return g;
}

struct RelationCheck {
    std::string name;
    bool holds = false;
};

/// Locality [t^{ij}, t^{kl}] = 0 for disjoint pairs, the 3-term relation
/// [t^{ij}, t^{ik} + t^{jk}] = 0 for distinct i, j, k, and centrality of sum_{i<j} t^{ij}.
inline std::vector<RelationCheck> braid_relation_checks(const Alphabet& a, int degree)
{
    const int n = a.size();
    auto t = [&](int i, int j) { return braid_embed(i, j, a, degree); };
    auto name = [](int i, int j) { return "t" + std::to_string(std::min(i, j) + 1) + std::to_string(std::max(i, j) + 1); };
    std::vector<RelationCheck> out;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = k + 1; l < n; ++l)
                    if (k > i && k != j && l != i && l != j)
                        out.push_back({"[" + name(i, j) + "," + name(k, l) + "] = 0", tder_bracket(t(i, j), t(k, l)).is_zero()});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (i != j && j != k && i != k && i < j)
                    out.push_back({"[" + name(i, j) + "," + name(i, k) + "+" + name(j, k) + "] = 0",
                                   tder_bracket(t(i, j), t(i, k) + t(j, k)).is_zero()});
    TDer total(a, degree);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) total += t(i, j);
    bool central = true;
    for (const auto& g : braid_generators(a, degree)) central = central && tder_bracket(total, g.value).is_zero();
    out.push_back({"sum of t^{ij} is central", central});
    return out;
}

namespace detail {

/// Coordinates of a homogeneous derivation against a shared (component, Lyndon word) index.
class TDerCoordinates {
public:
    linalg::SparseVector operator()(const TDer& u)
    {
        linalg::SparseVector v;
        for (int k = 0; k < u.arity(); ++k)
            u.component(k).terms().for_each([&](const Word& w, const Rational& c) {
                auto key = std::make_pair(k, w);
                auto [it, inserted] = index_.try_emplace(key, index_.size());
                v[it->second] = c;
            });
        return v;
    }

    std::size_t size() const noexcept { return index_.size(); }

private:
    std::map<std::pair<int, Word>, std::size_t> index_;
};

}  // namespace detail

/// Basis of the degree-d part of the image of t_n, built as left-normed brackets
/// [[...[g1, g2], ...], gd] of generators, keeping each candidate independent of the
/// earlier ones. Degree 1 is the generators themselves.
inline std::vector<std::vector<BraidElement>> braid_basis(const Alphabet& a, int max_d, int degree)
{
    if (max_d > degree) throw std::invalid_argument("braid basis degree exceeds truncation");
    const auto gens = braid_generators(a, degree);
    std::vector<std::vector<BraidElement>> basis(static_cast<std::size_t>(max_d) + 1);
    if (max_d < 1) return basis;
    basis[1] = gens;
    for (int d = 2; d <= max_d; ++d) {
        detail::TDerCoordinates coords;
        linalg::IncrementalSpan span;
        for (const auto& v : basis[static_cast<std::size_t>(d) - 1])
            for (const auto& g : gens) {
                TDer b = tder_bracket(v.value, g.value);
                if (b.is_zero()) continue;
                if (span.insert(coords(b))) basis[static_cast<std::size_t>(d)].push_back({"[" + v.label + "," + g.label + "]", b});
            }
    }
    return basis;
}

/// Coordinates of a homogeneous degree-d derivation on the degree-d braid basis, or nullopt
/// when it lies outside the image of t_n.
inline std::optional<linalg::Vector> tn_membership(const TDer& u, int d, const std::vector<BraidElement>& basis)
{
    if (d < 1 || d > u.degree()) throw std::invalid_argument("membership degree out of range");
    if (!(u.homogeneous(d) == u)) throw std::invalid_argument("membership input is not homogeneous of degree " + std::to_string(d));
    detail::TDerCoordinates coords;
    std::vector<linalg::SparseVector> cols;
    for (const auto& b : basis) cols.push_back(coords(b.value));
    const linalg::SparseVector target = coords(u);
    linalg::Matrix m(coords.size(), cols.size());
    linalg::Vector rhs(coords.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (const auto& [r, v] : cols[c]) m(r, c) = v;
    for (const auto& [r, v] : target) rhs[r] = v;
    if (cols.empty()) {
        if (u.is_zero()) return linalg::Vector{};
        return std::nullopt;
    }
    return linalg::solve(m, rhs);
}

inline std::optional<linalg::Vector> tn_membership(const TDer& u, int d)
{
    return tn_membership(u, d, braid_basis(u.alphabet(), d, u.degree())[static_cast<std::size_t>(d)]);
}

}  // namespace kvlie
