#pragma once

#include "lie.hpp"

namespace kvlie {

/// Element of cy_n: words modulo cyclic rotation, keyed by the least rotation.
class CycSeries {
public:
    CycSeries(Alphabet alphabet, int degree) : alphabet_(std::move(alphabet)), terms_(degree)
    {
        if (degree < 1) throw std::invalid_argument("truncation order must be >= 1");
    }

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    int degree() const noexcept { return terms_.max_degree(); }
    const GradedTerms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    int min_degree() const noexcept { return terms_.min_degree(); }

    /// Coefficient of the necklace through w (any rotation of it).
    Rational coeff(const Word& w) const { return terms_.coeff(least_rotation(w)); }

    void add(const Word& w, const Rational& c)
    {
        if (w.empty()) throw std::domain_error("cyclic words are nonempty");
        for (Letter l : w)
            if (l >= alphabet_.size()) throw std::out_of_range("letter outside the alphabet");
        terms_.add(least_rotation(w), c);
    }

    CycSeries homogeneous(int d) const
    {
        CycSeries out(alphabet_, degree());
        out.terms_ = terms_.homogeneous(d);
        return out;
    }

    CycSeries with_degree(int degree) const
    {
        CycSeries out(alphabet_, degree);
        out.terms_ = terms_.truncated(degree);
        return out;
    }

    CycSeries& operator+=(const CycSeries& o)
    {
        check_ambient(o);
        terms_ += o.terms_;
        return *this;
    }

    CycSeries& operator-=(const CycSeries& o)
    {
        check_ambient(o);
        terms_ -= o.terms_;
        return *this;
    }

    CycSeries& operator*=(const Rational& s)
    {
        terms_ *= s;
        return *this;
    }

    friend CycSeries operator+(CycSeries a, const CycSeries& b) { return a += b; }
    friend CycSeries operator-(CycSeries a, const CycSeries& b) { return a -= b; }
    friend CycSeries operator*(CycSeries a, const Rational& s) { return a *= s; }
    friend CycSeries operator*(const Rational& s, CycSeries a) { return a *= s; }
    friend CycSeries operator-(CycSeries a) { return a *= Rational(-1); }

    friend bool operator==(const CycSeries& a, const CycSeries& b)
    {
        return a.alphabet_ == b.alphabet_ && a.degree() == b.degree() && a.terms_ == b.terms_;
    }

    void check_ambient(const CycSeries& o) const
    {
        require_same(alphabet_, o.alphabet_);
        require_same_degree(degree(), o.degree());
    }

private:
    Alphabet alphabet_;
    GradedTerms terms_;
};

inline CycSeries tr_project(const AssocSeries& a)
{
    if (sgn(a.constant_term()) != 0) throw std::domain_error("tr is defined on the augmentation ideal only");
    CycSeries out(a.alphabet(), a.degree());
    a.terms().for_each([&](const Word& w, const Rational& c) { out.add(w, c); });
    return out;
}

/// The AssocSeries sum of the stored necklace representatives; tr of it gives the input back.
inline AssocSeries representative(const CycSeries& c)
{
    AssocSeries out(c.alphabet(), c.degree(), false);
    c.terms().for_each([&](const Word& w, const Rational& k) { out.add(w, k); });
    return out;
}

/// ∂_i a: prefixes of the words of a that end in x_i, with their coefficients.
inline AssocSeries partial_decompose(const AssocSeries& a, int i)
{
    if (i < 0 || i >= a.alphabet().size())
        throw std::out_of_range("generator index " + std::to_string(i) + " out of range");
    if (sgn(a.constant_term()) != 0) throw std::domain_error("partial_decompose needs a series without unit term");
    AssocSeries out(a.alphabet(), a.degree(), true);
    a.terms().for_each([&](const Word& w, const Rational& c) {
        if (w.back() == i) out.add(Word(w.begin(), w.end() - 1), c);
    });
    return out;
}

/// tr(z^n) for a series z without constant term.
inline CycSeries tr_power(const AssocSeries& z, int n)
{
    return tr_project(power(z, n).with_degree(z.degree()));
}

/// j(z) = sum_{n>=2} c_n tr(z^n) with the Bernoulli coefficients of j_series.
inline CycSeries j_function(const LieSeries& z)
{
    const int N = z.degree();
    CycSeries out(z.alphabet(), N);
    if (N < 2) return out;
    if (z.is_zero()) return out;
    const auto c = j_series(N);
    const AssocSeries za = z.to_assoc();
    const int low = z.min_degree();
    AssocSeries zn = za;
    for (int n = 2; n * low <= N; ++n) {
        zn = zn * za;
        if (sgn(c[static_cast<std::size_t>(n)]) != 0) out += tr_project(zn) * c[static_cast<std::size_t>(n)];
    }
    return out;
}

/// duf(x,y) = (j(x) + j(y) - j(ch(x,y))) / 2 on the two-letter alphabet.
inline CycSeries duflo_series(int N, const Alphabet& a = Alphabet(2))
{
    if (N < 2) throw std::invalid_argument("duflo series needs truncation order >= 2");
    if (a.size() != 2) throw AmbientMismatch("duflo series lives on two letters");
    auto x = LieSeries::generator(a, N, 0), y = LieSeries::generator(a, N, 1);
    CycSeries d = j_function(x) + j_function(y) - j_function(bch(x, y));
    return d * frac(1, 2);
}

}  // namespace kvlie
