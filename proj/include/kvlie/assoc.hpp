#pragma once

#include "errors.hpp"
#include "graded.hpp"

#include <string>

namespace kvlie {

/// Truncated element of the free associative algebra Ass_n (unital) or its augmentation
/// ideal Ass_n^+ (no empty-word term allowed).
class AssocSeries {
public:
    AssocSeries(Alphabet alphabet, int degree, bool unital = true)
        : alphabet_(std::move(alphabet)), terms_(degree), unital_(unital)
    {
        if (degree < 1) throw std::invalid_argument("truncation order must be >= 1");
    }

    static AssocSeries one(const Alphabet& a, int degree)
    {
        AssocSeries s(a, degree, true);
        s.add(Word{}, 1);
        return s;
    }

    static AssocSeries generator(const Alphabet& a, int degree, int i)
    {
        AssocSeries s(a, degree, false);
        s.add(Word{static_cast<Letter>(i)}, 1);
        return s;
    }

    static AssocSeries monomial(const Alphabet& a, int degree, const Word& w, const Rational& c = 1)
    {
        AssocSeries s(a, degree, w.empty());
        s.add(w, c);
        return s;
    }

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    int degree() const noexcept { return terms_.max_degree(); }
    bool unital() const noexcept { return unital_; }
    const GradedTerms& terms() const noexcept { return terms_; }
    Rational coeff(const Word& w) const { return terms_.coeff(w); }
    bool is_zero() const noexcept { return terms_.empty(); }
    Rational constant_term() const { return terms_.coeff(Word{}); }

    void add(const Word& w, const Rational& c)
    {
        for (Letter l : w)
            if (l >= alphabet_.size()) throw std::out_of_range("letter outside the alphabet");
        if (w.empty() && !unital_ && sgn(c) != 0)
            throw std::domain_error("empty word in an augmentation-ideal series");
        terms_.add(w, c);
    }

    AssocSeries homogeneous(int d) const
    {
        AssocSeries out(alphabet_, degree(), unital_);
        out.terms_ = terms_.homogeneous(d);
        return out;
    }

    /// Same element viewed at another truncation order (terms above the new order dropped).
    AssocSeries with_degree(int degree) const
    {
        AssocSeries out(alphabet_, degree, unital_);
        out.terms_ = terms_.truncated(degree);
        return out;
    }

    AssocSeries as_unital() const
    {
        AssocSeries out = *this;
        out.unital_ = true;
        return out;
    }

    AssocSeries& operator+=(const AssocSeries& o)
    {
        check_ambient(o);
        unital_ = unital_ || o.unital_;
        terms_ += o.terms_;
        return *this;
    }

    AssocSeries& operator-=(const AssocSeries& o)
    {
        check_ambient(o);
        unital_ = unital_ || o.unital_;
        terms_ -= o.terms_;
        return *this;
    }

    AssocSeries& operator*=(const Rational& s)
    {
        terms_ *= s;
        return *this;
    }

    friend AssocSeries operator+(AssocSeries a, const AssocSeries& b) { return a += b; }
    friend AssocSeries operator-(AssocSeries a, const AssocSeries& b) { return a -= b; }
    friend AssocSeries operator*(AssocSeries a, const Rational& s) { return a *= s; }
    friend AssocSeries operator*(const Rational& s, AssocSeries a) { return a *= s; }
    friend AssocSeries operator-(AssocSeries a) { return a *= Rational(-1); }

    /// Truncated concatenation product.
    friend AssocSeries operator*(const AssocSeries& a, const AssocSeries& b)
    {
        a.check_ambient(b);
        const int N = a.degree();
        AssocSeries out(a.alphabet_, N, a.unital_ && b.unital_);
        Word buf;
        for (int da = 0; da <= N; ++da) {
            const auto& left = a.terms_.degree(da);
            if (left.empty()) continue;
            for (int db = 0; da + db <= N; ++db) {
                const auto& right = b.terms_.degree(db);
                for (const auto& [wa, ca] : left) {
                    for (const auto& [wb, cb] : right) {
                        buf.assign(wa.begin(), wa.end());
                        buf.insert(buf.end(), wb.begin(), wb.end());
                        out.terms_.add(buf, ca * cb);
                    }
                }
            }
        }
        return out;
    }

    friend bool operator==(const AssocSeries& a, const AssocSeries& b)
    {
        return a.alphabet_ == b.alphabet_ && a.degree() == b.degree() && a.terms_ == b.terms_;
    }

    void check_ambient(const AssocSeries& o) const
    {
        require_same(alphabet_, o.alphabet_);
        require_same_degree(degree(), o.degree());
    }

private:
    Alphabet alphabet_;
    GradedTerms terms_;
    bool unital_;
};

inline AssocSeries commutator(const AssocSeries& a, const AssocSeries& b)
{
    return a * b - b * a;
}

inline AssocSeries power(const AssocSeries& a, int k)
{
    AssocSeries r = AssocSeries::one(a.alphabet(), a.degree());
    for (int i = 0; i < k; ++i) r = r * a;
    return r;
}

/// exp(a) = sum a^k / k!, for a without constant term.
inline AssocSeries exp_series(const AssocSeries& a)
{
    if (sgn(a.constant_term()) != 0) throw std::domain_error("exp of a series with constant term");
    AssocSeries result = AssocSeries::one(a.alphabet(), a.degree());
    AssocSeries term = result;
    for (int k = 1; k <= a.degree(); ++k) {
        term = term * a;
        term *= frac(1, k);
        if (term.is_zero()) break;
        result += term;
    }
    return result;
}

/// log(g) = sum (-1)^{k+1} (g-1)^k / k, for g with constant term 1.
inline AssocSeries log_series(const AssocSeries& g)
{
    if (g.constant_term() != 1) throw std::domain_error("log of a series whose constant term is not 1");
    AssocSeries z = g - AssocSeries::one(g.alphabet(), g.degree());
    AssocSeries result(g.alphabet(), g.degree(), true);
    AssocSeries zk = AssocSeries::one(g.alphabet(), g.degree());
    for (int k = 1; k <= g.degree(); ++k) {
        zk = zk * z;
        if (zk.is_zero()) break;
        result += zk * frac(k % 2 == 1 ? 1 : -1, k);
    }
    return result;
}

}  // namespace kvlie
