#pragma once

#include "assoc.hpp"
#include "errors.hpp"

#include <map>
#include <mutex>
#include <span>
#include <vector>

namespace kvlie {

namespace detail {

/// Word expansion of the standard bracketing of a Lyndon word. Letters are plain indices,
/// so one cache serves every alphabet.
inline const std::map<Word, Rational>& lyndon_expansion(const Word& w)
{
    static std::mutex mutex;
    static std::map<Word, std::map<Word, Rational>> cache;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(w); it != cache.end()) return it->second;
    }
    std::map<Word, Rational> expansion;
    if (w.size() == 1) {
        expansion.emplace(w, 1);
    } else {
        auto [u, v] = standard_factorization(w);
        const auto& pu = lyndon_expansion(u);
        const auto& pv = lyndon_expansion(v);
        auto accumulate = [&](const std::map<Word, Rational>& l, const std::map<Word, Rational>& r, int sign) {
            for (const auto& [a, ca] : l)
                for (const auto& [b, cb] : r) {
                    Word ab = a;
                    ab.insert(ab.end(), b.begin(), b.end());
                    Rational& slot = expansion[ab];
                    slot += sign > 0 ? Rational(ca * cb) : Rational(-(ca * cb));
                }
        };
        accumulate(pu, pv, 1);
        accumulate(pv, pu, -1);
        std::erase_if(expansion, [](const auto& kv) { return sgn(kv.second) == 0; });
    }
    std::lock_guard lock(mutex);
    return cache.emplace(w, std::move(expansion)).first->second;
}

}  // namespace detail

/// Truncated element of the free Lie algebra lie_n, stored in the Lyndon basis
/// (standard-factorization bracketing).
class LieSeries {
public:
    LieSeries(Alphabet alphabet, int degree) : alphabet_(std::move(alphabet)), terms_(degree)
    {
        if (degree < 1) throw std::invalid_argument("truncation order must be >= 1");
    }

    static LieSeries generator(const Alphabet& a, int degree, int i)
    {
        LieSeries s(a, degree);
        s.add(Word{static_cast<Letter>(i)}, 1);
        return s;
    }

    /// Basis element for a Lyndon word given by its labels, e.g. "xxy" is [x,[x,y]].
    static LieSeries basis(const Alphabet& a, int degree, std::string_view lyndon, const Rational& c = 1)
    {
        LieSeries s(a, degree);
        s.add(a.parse(lyndon), c);
        return s;
    }

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    int degree() const noexcept { return terms_.max_degree(); }
    const GradedTerms& terms() const noexcept { return terms_; }
    Rational coeff(const Word& lyndon) const { return terms_.coeff(lyndon); }
    bool is_zero() const noexcept { return terms_.empty(); }
    int min_degree() const noexcept { return terms_.min_degree(); }

    void add(const Word& lyndon, const Rational& c)
    {
        for (Letter l : lyndon)
            if (l >= alphabet_.size()) throw std::out_of_range("letter outside the alphabet");
        if (!is_lyndon(lyndon)) throw std::invalid_argument("Lie basis key is not a Lyndon word");
        terms_.add(lyndon, c);
    }

    LieSeries homogeneous(int d) const
    {
        LieSeries out(alphabet_, degree());
        out.terms_ = terms_.homogeneous(d);
        return out;
    }

    LieSeries with_degree(int degree) const
    {
        LieSeries out(alphabet_, degree);
        out.terms_ = terms_.truncated(degree);
        return out;
    }

    AssocSeries to_assoc() const
    {
        AssocSeries out(alphabet_, degree(), false);
        terms_.for_each([&](const Word& w, const Rational& c) {
            for (const auto& [word, k] : detail::lyndon_expansion(w)) out.add(word, c * k);
        });
        return out;
    }

    /// Inverse of to_assoc. Peels off the lexicographically least word of each degree,
    /// which must be Lyndon when the input is primitive.
    static LieSeries from_assoc(const AssocSeries& a)
    {
        if (sgn(a.constant_term()) != 0)
            throw NotPrimitive(0, "series with a constant term is not primitive");
        LieSeries out(a.alphabet(), a.degree());
        for (int d = 1; d <= a.degree(); ++d) {
            std::map<Word, Rational> rest = a.terms().degree(d);
            while (!rest.empty()) {
                const Word w = rest.begin()->first;
                if (!is_lyndon(w))
                    throw NotPrimitive(d, "series is not primitive at degree " + std::to_string(d) +
                                              " (leading word '" + a.alphabet().render(w) + "')");
                const Rational c = rest.begin()->second;
                for (const auto& [word, k] : detail::lyndon_expansion(w)) {
                    Rational& slot = rest[word];
                    slot -= c * k;
                    if (sgn(slot) == 0) rest.erase(word);
                }
                out.terms_.add(w, c);
            }
        }
        return out;
    }

    LieSeries& operator+=(const LieSeries& o)
    {
        check_ambient(o);
        terms_ += o.terms_;
        return *this;
    }

    LieSeries& operator-=(const LieSeries& o)
    {
        check_ambient(o);
        terms_ -= o.terms_;
        return *this;
    }

    LieSeries& operator*=(const Rational& s)
    {
        terms_ *= s;
        return *this;
    }

    friend LieSeries operator+(LieSeries a, const LieSeries& b) { return a += b; }
    friend LieSeries operator-(LieSeries a, const LieSeries& b) { return a -= b; }
    friend LieSeries operator*(LieSeries a, const Rational& s) { return a *= s; }
    friend LieSeries operator*(const Rational& s, LieSeries a) { return a *= s; }
    friend LieSeries operator-(LieSeries a) { return a *= Rational(-1); }

    friend bool operator==(const LieSeries& a, const LieSeries& b)
    {
        return a.alphabet_ == b.alphabet_ && a.degree() == b.degree() && a.terms_ == b.terms_;
    }

    void check_ambient(const LieSeries& o) const
    {
        require_same(alphabet_, o.alphabet_);
        require_same_degree(degree(), o.degree());
    }

private:
    Alphabet alphabet_;
    GradedTerms terms_;
};

inline LieSeries bracket(const LieSeries& a, const LieSeries& b)
{
    a.check_ambient(b);
    return LieSeries::from_assoc(commutator(a.to_assoc(), b.to_assoc()));
}

/// Campbell-Hausdorff series log(e^a e^b), computed in the truncated word algebra.
inline LieSeries bch(const LieSeries& a, const LieSeries& b)
{
    a.check_ambient(b);
    AssocSeries product = exp_series(a.to_assoc()) * exp_series(b.to_assoc());
    return LieSeries::from_assoc(log_series(product));
}

/// Algebra map x_i -> images[i] applied to a word series. Images must share one target
/// algebra whose truncation equals the source truncation.
inline AssocSeries substitute(const AssocSeries& a, std::span<const AssocSeries> images)
{
    if (static_cast<int>(images.size()) != a.alphabet().size())
        throw std::invalid_argument("substitution needs one image per generator (got " +
                                    std::to_string(images.size()) + ", expected " +
                                    std::to_string(a.alphabet().size()) + ")");
    if (images.empty()) throw std::invalid_argument("empty substitution");
    const Alphabet& target = images[0].alphabet();
    const int N = images[0].degree();
    for (const auto& im : images) {
        require_same(target, im.alphabet());
        require_same_degree(N, im.degree());
        if (sgn(im.constant_term()) != 0) throw std::invalid_argument("substitution image has a degree-0 term");
    }
    require_same_degree(a.degree(), N);

    AssocSeries out(target, N, a.unital());
    std::map<Word, AssocSeries> prefix;  // memoized images of word prefixes
    auto image_of = [&](auto&& self, const Word& w) -> const AssocSeries& {
        if (auto it = prefix.find(w); it != prefix.end()) return it->second;
        AssocSeries value = w.empty() ? AssocSeries::one(target, N) : [&] {
            Word head(w.begin(), w.end() - 1);
            return self(self, head) * images[w.back()];
        }();
        return prefix.emplace(w, std::move(value)).first->second;
    };
    a.terms().for_each([&](const Word& w, const Rational& c) {
        const AssocSeries& im = image_of(image_of, w);
        im.terms().for_each([&](const Word& v, const Rational& k) { out.add(v, c * k); });
    });
    return out;
}

inline LieSeries substitute(const LieSeries& a, std::span<const LieSeries> images)
{
    std::vector<AssocSeries> assoc;
    assoc.reserve(images.size());
    for (const auto& im : images) assoc.push_back(im.to_assoc());
    if (static_cast<int>(images.size()) != a.alphabet().size())
        throw std::invalid_argument("substitution needs one image per generator");
    return LieSeries::from_assoc(substitute(a.to_assoc(), assoc));
}

/// Bernoulli numbers B_0..B_N from sum_{k<=m} C(m+1,k) B_k = 0. B_1 = -1/2 here; it never
/// enters the Duflo series.
inline std::vector<Rational> bernoulli_numbers(int N)
{
    std::vector<Rational> b(static_cast<std::size_t>(std::max(N, 0)) + 1);
    b[0] = 1;
    for (int m = 1; m <= N; ++m) {
        Rational s = 0;
        mpz_class binom = 1;  // C(m+1, k)
        for (int k = 0; k < m; ++k) {
            s += binom * b[static_cast<std::size_t>(k)];
            binom = binom * (m + 1 - k) / (k + 1);
        }
        b[static_cast<std::size_t>(m)] = -s / (m + 1);
        b[static_cast<std::size_t>(m)].canonicalize();
    }
    return b;
}

/// Coefficients c_n = B_n / (n * n!) of tr(x^n) in j(x), indices 0..N (entries below 2 are 0).
inline std::vector<Rational> j_series(int N)
{
    if (N < 2) throw std::invalid_argument("j series needs truncation order >= 2");
    auto b = bernoulli_numbers(N);
    std::vector<Rational> c(static_cast<std::size_t>(N) + 1);
    mpz_class factorial = 1;
    for (int n = 1; n <= N; ++n) {
        factorial *= n;
        if (n < 2) continue;
        c[static_cast<std::size_t>(n)] = b[static_cast<std::size_t>(n)] / (n * factorial);
        c[static_cast<std::size_t>(n)].canonicalize();
    }
    return c;
}

}  // namespace kvlie
