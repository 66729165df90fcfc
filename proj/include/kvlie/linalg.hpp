#pragma once

#include "errors.hpp"
#include "rational.hpp"

#include <map>
#include <optional>
#include <vector>

namespace kvlie::linalg {

using Vector = std::vector<Rational>;

/// Dense row-major rational matrix.
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    /// Matrix whose columns are the given vectors (all of one length).
    static Matrix from_columns(const std::vector<Vector>& columns, std::size_t rows)
    {
        Matrix m(rows, columns.size());
        for (std::size_t c = 0; c < columns.size(); ++c)
            for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
        return m;
    }

    Vector operator*(const Vector& v) const
    {
        Vector out(rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                if (sgn((*this)(r, c)) != 0 && sgn(v[c]) != 0) out[r] += (*this)(r, c) * v[c];
        return out;
    }

private:
    std::size_t rows_, cols_;
    std::vector<Rational> data_;
};

/// Row echelon form from fraction-free (Bareiss) elimination. Rows are first cleared of
/// denominators, so every intermediate entry is an integer minor of the scaled input.
struct Echelon {
    std::vector<std::vector<mpz_class>> rows;  // nonzero rows only
    std::vector<std::size_t> pivots;           // pivot column of each row
    std::size_t cols = 0;
};

inline Echelon bareiss_echelon(const Matrix& a)
{
    const std::size_t m = a.rows(), n = a.cols();
    std::vector<std::vector<mpz_class>> M(m, std::vector<mpz_class>(n));
    for (std::size_t r = 0; r < m; ++r) {
        mpz_class l = 1;
        for (std::size_t c = 0; c < n; ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(r, c).get_den_mpz_t());
        for (std::size_t c = 0; c < n; ++c) M[r][c] = a(r, c).get_num() * (l / a(r, c).get_den());
    }
    Echelon e;
    e.cols = n;
    mpz_class prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        std::size_t p = r;
        while (p < m && M[p][c] == 0) ++p;
        if (p == m) continue;
        std::swap(M[p], M[r]);
        for (std::size_t i = r + 1; i < m; ++i) {
            for (std::size_t j = c + 1; j < n; ++j) {
                M[i][j] = M[r][c] * M[i][j] - M[i][c] * M[r][j];
                mpz_divexact(M[i][j].get_mpz_t(), M[i][j].get_mpz_t(), prev.get_mpz_t());
            }
            M[i][c] = 0;
        }
        prev = M[r][c];
        e.pivots.push_back(c);
        ++r;
    }
    M.resize(r);
    e.rows = std::move(M);
    return e;
}

inline std::size_t rank(const Matrix& a) { return bareiss_echelon(a).pivots.size(); }

/// Particular solution of a x = b with every free variable set to zero; nullopt if inconsistent.
inline std::optional<Vector> solve(const Matrix& a, const Vector& b)
{
    Matrix aug(a.rows(), a.cols() + 1);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) aug(r, c) = a(r, c);
        aug(r, a.cols()) = b[r];
    }
    Echelon e = bareiss_echelon(aug);
    if (!e.pivots.empty() && e.pivots.back() == a.cols()) return std::nullopt;
    Vector x(a.cols());
    for (std::size_t k = e.pivots.size(); k-- > 0;) {
        const auto& row = e.rows[k];
        const std::size_t p = e.pivots[k];
        Rational acc(row[a.cols()]);
        for (std::size_t j = p + 1; j < a.cols(); ++j)
            if (row[j] != 0 && sgn(x[j]) != 0) acc -= Rational(row[j]) * x[j];
        x[p] = acc / Rational(row[p]);
        x[p].canonicalize();
    }
    return x;
}

/// Basis of {x : a x = 0}, one vector per free column (that column set to 1).
inline std::vector<Vector> nullspace(const Matrix& a)
{
    Echelon e = bareiss_echelon(a);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto p : e.pivots) is_pivot[p] = true;
    std::vector<Vector> basis;
    for (std::size_t f = 0; f < a.cols(); ++f) {
        if (is_pivot[f]) continue;
        Vector x(a.cols());
        x[f] = 1;
        for (std::size_t k = e.pivots.size(); k-- > 0;) {
            const auto& row = e.rows[k];
            const std::size_t p = e.pivots[k];
            Rational acc = 0;
            for (std::size_t j = p + 1; j < a.cols(); ++j)
                if (row[j] != 0 && sgn(x[j]) != 0) acc -= Rational(row[j]) * x[j];
            x[p] = acc / Rational(row[p]);
            x[p].canonicalize();
        }
        basis.push_back(std::move(x));
    }
    return basis;
}

inline Rational dot(const Vector& a, const Vector& b)
{
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
    return s;
}

/// The solution of least Euclidean norm: the particular solution minus its orthogonal
/// projection onto the kernel. Deterministic for a fixed column order.
inline std::optional<Vector> min_norm_solve(const Matrix& a, const Vector& b)
{
    auto xp = solve(a, b);
    if (!xp) return std::nullopt;
    auto kernel = nullspace(a);
    if (kernel.empty()) return xp;
    const std::size_t k = kernel.size();
    Matrix gram(k, k);
    Vector rhs(k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) gram(i, j) = dot(kernel[i], kernel[j]);
        rhs[i] = dot(kernel[i], *xp);
    }
    auto coef = solve(gram, rhs);  // Gram matrix of independent vectors is invertible
    Vector x = *xp;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t r = 0; r < x.size(); ++r)
            if (sgn(kernel[i][r]) != 0) x[r] -= (*coef)[i] * kernel[i][r];
    return x;
}

}  // namespace kvlie::linalg

namespace kvlie::linalg {

/// Sparse vector keyed by column index.
using SparseVector = std::map<std::size_t, Rational>;

/// Span of inserted vectors, kept as fraction-free integer rows in echelon form keyed by
/// pivot column. Answers independence queries without refactoring.
class IncrementalSpan {
public:
    /// Adds v if it is independent of the span; returns whether it was added.
    bool insert(const SparseVector& v)
    {
        auto r = reduce(v);
        if (r.empty()) return false;
        const std::size_t pivot = r.begin()->first;
        rows_.emplace(pivot, std::move(r));
        return true;
    }

    bool contains(const SparseVector& v) const { return reduce(v).empty(); }
    std::size_t dimension() const noexcept { return rows_.size(); }

private:
    using IntRow = std::map<std::size_t, mpz_class>;

    IntRow reduce(const SparseVector& v) const
    {
        mpz_class l = 1;
        for (const auto& [k, c] : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
        IntRow r;
        for (const auto& [k, c] : v)
            if (sgn(c) != 0) r[k] = c.get_num() * (l / c.get_den());
        for (const auto& [pivot, row] : rows_) {
            auto it = r.find(pivot);
            if (it == r.end()) continue;
            const mpz_class f = it->second, p = row.at(pivot);
            for (auto& [k, c] : r) c *= p;
            for (const auto& [k, c] : row) {
                mpz_class& slot = r[k];
                slot -= f * c;
            }
            std::erase_if(r, [](const auto& kv) { return kv.second == 0; });
            mpz_class g = 0;
            for (const auto& [k, c] : r) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
            if (g > 1)
                for (auto& [k, c] : r) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
        }
        return r;
    }

    std::map<std::size_t, IntRow> rows_;
};

}  // namespace kvlie::linalg
