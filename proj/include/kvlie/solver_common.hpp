#pragma once

#include "linalg.hpp"
#include "taut.hpp"

#include <compare>
#include <tuple>

namespace kvlie {

/// Per-degree record of a linear solve.
struct DegreeRecord {
    int degree = 0;
    std::size_t unknowns = 0;
    std::size_t equations = 0;
    std::size_t rank = 0;
    std::size_t kernel = 0;
    std::size_t residual_terms = 0;  // nonzero entries of the defining residual after the solve
    linalg::Vector gauge;            // chosen coordinates
    std::vector<std::string> basis;  // labels of the coordinates
};

struct DegreeReport {
    std::vector<DegreeRecord> degrees;

    bool all_zero() const
    {
        for (const auto& d : degrees)
            if (d.residual_terms != 0) return false;
        return true;
    }
};

namespace detail {

/// Row coordinates for stacked equations: (block, slot, word).
struct RowKey {
    int block;
    int slot;
    Word word;
    auto operator<=>(const RowKey&) const = default;
};

class RowIndex {
public:
    std::size_t of(const RowKey& k) { return index_.try_emplace(k, index_.size()).first->second; }
    std::size_t size() const noexcept { return index_.size(); }

private:
    std::map<RowKey, std::size_t> index_;
};

/// Coordinates of the degree-d part of a word-keyed table (Lie, cyclic or associative).
inline void append_coords(linalg::SparseVector& v, RowIndex& rows, int block, int slot, const GradedTerms& t, int d,
                          const Rational& scale = 1)
{
    for (const auto& [w, c] : t.degree(d)) {
        Rational& slot_value = v[rows.of({block, slot, w})];
        slot_value += c * scale;
    }
}

inline std::size_t count_nonzero(const linalg::SparseVector& v)
{
    std::size_t n = 0;
    for (const auto& [k, c] : v)
        if (sgn(c) != 0) ++n;
    return n;
}

struct SolveOutcome {
    std::optional<linalg::Vector> solution;
    std::size_t rank = 0;
    std::size_t kernel = 0;
};

/// Solves sum_j c_j columns[j] = rhs; picks the least-norm solution when the kernel is
/// nontrivial.
inline SolveOutcome solve_columns(const std::vector<linalg::SparseVector>& columns, const linalg::SparseVector& rhs,
                                  std::size_t rows)
{
    linalg::Matrix m(rows, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c)
        for (const auto& [r, v] : columns[c]) m(r, c) = v;
    linalg::Vector b(rows);
    for (const auto& [r, v] : rhs) b[r] = v;
    SolveOutcome out;
    out.rank = linalg::rank(m);
    out.kernel = columns.size() - out.rank;
    if (columns.empty()) {
        if (count_nonzero(rhs) == 0) out.solution = linalg::Vector{};
        return out;
    }
    out.solution = linalg::min_norm_solve(m, b);
    return out;
}

/// Degree-(d+1) image differences of two automorphisms, one block per equation.
inline void append_image_difference(linalg::SparseVector& v, RowIndex& rows, int block, const TAutElem& lhs,
                                    const TAutElem& rhs, int image_degree)
{
    for (int i = 0; i < lhs.arity(); ++i) {
        append_coords(v, rows, block, i, lhs.image(i).terms(), image_degree, 1);
        append_coords(v, rows, block, i, rhs.image(i).terms(), image_degree, -1);
    }
}

}  // namespace detail

/// Lowest log-degree at which two automorphisms of the same order differ, or nullopt.
inline std::optional<int> first_difference(const TAutElem& a, const TAutElem& b)
{
    a.check_ambient(b);
    for (int d = 1; d <= a.degree() + 1; ++d)
        for (int i = 0; i < a.arity(); ++i)
            if (!(a.image(i).terms().degree(d) == b.image(i).terms().degree(d))) return d - 1;
    return std::nullopt;
}

/// Outcome of comparing the two sides of a group identity.
struct IdentityCheck {
    std::string name;
    std::optional<int> first_failure;        // lowest log-degree with a nonzero residual
    std::vector<std::size_t> residual_terms;  // index d: nonzero terms of the image difference at log-degree d
    bool passed() const { return !first_failure; }
};

inline IdentityCheck compare_identity(std::string name, const TAutElem& lhs, const TAutElem& rhs)
{
    lhs.check_ambient(rhs);
    IdentityCheck out{std::move(name), std::nullopt, std::vector<std::size_t>(static_cast<std::size_t>(lhs.degree()) + 1)};
    for (int d = 0; d <= lhs.degree(); ++d) {
        detail::RowIndex rows;
        linalg::SparseVector v;
        detail::append_image_difference(v, rows, 0, lhs, rhs, d + 1);
        const std::size_t n = detail::count_nonzero(v);
        out.residual_terms[static_cast<std::size_t>(d)] = n;
        if (n != 0 && !out.first_failure) out.first_failure = d;
    }
    return out;
}

}  // namespace kvlie
