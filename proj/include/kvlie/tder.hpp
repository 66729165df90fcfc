#pragma once

#include "cyclic.hpp"

#include <optional>
#include <sstream>

namespace kvlie {

enum class Normalization { project, strict };

/// Tangential derivation u = (a_1, ..., a_n) acting by u(x_i) = [x_i, a_i].
/// a_i is stored without its (inert) linear x_i term.
class TDer {
public:
    TDer(Alphabet alphabet, int degree) : alphabet_(std::move(alphabet)), degree_(degree)
    {
        for (int i = 0; i < alphabet_.size(); ++i) components_.emplace_back(alphabet_, degree_);
    }

    explicit TDer(std::vector<LieSeries> components, Normalization mode = Normalization::project)
        : alphabet_(components.empty() ? throw std::invalid_argument("derivation needs components")
                                       : components[0].alphabet()),
          degree_(components[0].degree()),
          components_(std::move(components))
    {
        if (static_cast<int>(components_.size()) != alphabet_.size())
            throw AmbientMismatch("derivation on " + std::to_string(alphabet_.size()) + " generators needs " +
                                  std::to_string(alphabet_.size()) + " components, got " +
                                  std::to_string(components_.size()));
        for (std::size_t k = 0; k < components_.size(); ++k) {
            components_[0].check_ambient(components_[k]);
            const Word own{static_cast<Letter>(k)};
            const Rational lin = components_[k].coeff(own);
            if (sgn(lin) == 0) continue;
            if (mode == Normalization::strict)
                throw std::invalid_argument("component " + std::to_string(k + 1) + " has a linear term in its own generator");
            components_[k].add(own, -lin);
        }
    }

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    int degree() const noexcept { return degree_; }
    int arity() const noexcept { return alphabet_.size(); }
    const std::vector<LieSeries>& components() const noexcept { return components_; }
    const LieSeries& component(int k) const { return components_.at(static_cast<std::size_t>(k)); }

    bool is_zero() const
    {
        for (const auto& c : components_)
            if (!c.is_zero()) return false;
        return true;
    }

    /// Lowest component degree present, or -1 for zero.
    int min_degree() const
    {
        int m = -1;
        for (const auto& c : components_) {
            int d = c.min_degree();
            if (d >= 0 && (m < 0 || d < m)) m = d;
        }
        return m;
    }

    TDer homogeneous(int d) const
    {
        return map([d](const LieSeries& c) { return c.homogeneous(d); });
    }

    TDer with_degree(int degree) const
    {
        return map([degree](const LieSeries& c) { return c.with_degree(degree); });
    }

    /// u(x_i) = [x_i, a_i] as a Lie series.
    LieSeries image(int i) const
    {
        return bracket(LieSeries::generator(alphabet_, degree_, i), component(i));
    }

    TDer& operator+=(const TDer& o)
    {
        check_ambient(o);
        for (std::size_t k = 0; k < components_.size(); ++k) components_[k] += o.components_[k];
        return *this;
    }

    TDer& operator-=(const TDer& o)
    {
        check_ambient(o);
        for (std::size_t k = 0; k < components_.size(); ++k) components_[k] -= o.components_[k];
        return *this;
    }

    TDer& operator*=(const Rational& s)
    {
        for (auto& c : components_) c *= s;
        return *this;
    }

    friend TDer operator+(TDer a, const TDer& b) { return a += b; }
    friend TDer operator-(TDer a, const TDer& b) { return a -= b; }
    friend TDer operator*(TDer a, const Rational& s) { return a *= s; }
    friend TDer operator*(const Rational& s, TDer a) { return a *= s; }
    friend TDer operator-(TDer a) { return a *= Rational(-1); }
    friend bool operator==(const TDer& a, const TDer& b)
    {
        return a.alphabet_ == b.alphabet_ && a.degree_ == b.degree_ && a.components_ == b.components_;
    }

    void check_ambient(const TDer& o) const
    {
        require_same(alphabet_, o.alphabet_);
        require_same_degree(degree_, o.degree_);
    }

private:
    template <class F>
    TDer map(F&& f) const
    {
        std::vector<LieSeries> out;
        out.reserve(components_.size());
        for (const auto& c : components_) out.push_back(f(c));
        return TDer(std::move(out));
    }

    Alphabet alphabet_;
    int degree_;
    std::vector<LieSeries> components_;
};

/// Derivation extension of x_i -> [x_i, a_i] to the word algebra.
inline AssocSeries tder_apply(const TDer& u, const AssocSeries& s)
{
    require_same(u.alphabet(), s.alphabet());
    require_same_degree(u.degree(), s.degree());
    const int N = s.degree();
    std::vector<AssocSeries> images;
    for (int i = 0; i < u.arity(); ++i) images.push_back(u.image(i).to_assoc());
    AssocSeries out(s.alphabet(), N, false);
    Word buf;
    s.terms().for_each([&](const Word& w, const Rational& c) {
        for (std::size_t p = 0; p < w.size(); ++p) {
            const int room = N - static_cast<int>(w.size()) + 1;
            const auto& im = images[w[p]].terms();
            for (int d = 2; d <= room; ++d)
                for (const auto& [v, k] : im.degree(d)) {
                    buf.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(p));
                    buf.insert(buf.end(), v.begin(), v.end());
                    buf.insert(buf.end(), w.begin() + static_cast<std::ptrdiff_t>(p) + 1, w.end());
                    out.add(buf, c * k);
                }
        }
    });
    return out;
}

inline LieSeries tder_apply(const TDer& u, const LieSeries& s)
{
    return LieSeries::from_assoc(tder_apply(u, s.to_assoc()));
}

inline CycSeries tder_apply(const TDer& u, const CycSeries& s)
{
    return tr_project(tder_apply(u, representative(s)));
}

/// [u,v] with components c_k = u(b_k) - v(a_k) + [a_k, b_k], so that its action is the
/// commutator of the actions.
inline TDer tder_bracket(const TDer& u, const TDer& v)
{
    u.check_ambient(v);
    std::vector<LieSeries> c;
    for (int k = 0; k < u.arity(); ++k) {
        const LieSeries& a = u.component(k);
        const LieSeries& b = v.component(k);
        c.push_back(tder_apply(u, b) - tder_apply(v, a) + bracket(a, b));
    }
    return TDer(std::move(c));
}

/// div(u) = sum_i tr(x_i ∂_i a_i).
inline CycSeries divergence(const TDer& u)
{
    CycSeries out(u.alphabet(), u.degree());
    for (int i = 0; i < u.arity(); ++i) {
        AssocSeries a = u.component(i).to_assoc();
        AssocSeries d = partial_decompose(a, i);
        out += tr_project(AssocSeries::generator(u.alphabet(), u.degree(), i) * d);
    }
    return out;
}

struct Classification {
    bool normalized = true;
    bool special = false;
    bool krv = false;
    std::optional<int> special_witness;  // first degree where sum_i [x_i, a_i] != 0
    std::optional<int> krv_witness;      // first degree where special or div fails
};

inline Classification classify(const TDer& u)
{
    Classification c;
    for (int k = 0; k < u.arity(); ++k)
        if (sgn(u.component(k).coeff(Word{static_cast<Letter>(k)})) != 0) c.normalized = false;
    LieSeries total(u.alphabet(), u.degree());
    for (int i = 0; i < u.arity(); ++i) total += u.image(i);
    c.special = total.is_zero();
    if (!c.special) c.special_witness = total.min_degree();
    const CycSeries div = divergence(u);
    c.krv = c.special && div.is_zero();
    if (!c.krv) {
        int w = c.special_witness.value_or(u.degree() + 1);
        if (!div.is_zero()) w = std::min(w, div.min_degree());
        c.krv_witness = w;
    }
    return c;
}

/// Simplicial map data: group k (0-based) lists the target generators that receive the
/// k-th strand. Targets in no group receive 0.
class Pattern {
public:
    Pattern(std::vector<std::vector<int>> groups, int target_arity) : groups_(std::move(groups)), m_(target_arity)
    {
        if (m_ < 1 || m_ > Alphabet::max_size) throw std::invalid_argument("pattern target arity out of range");
        std::vector<bool> seen(static_cast<std::size_t>(m_), false);
        for (const auto& g : groups_) {
            if (g.empty()) throw std::invalid_argument("pattern group is empty");
            for (int t : g) {
                if (t < 0 || t >= m_) throw std::invalid_argument("pattern index outside 1.." + std::to_string(m_));
                if (seen[static_cast<std::size_t>(t)]) throw std::invalid_argument("pattern groups overlap");
                seen[static_cast<std::size_t>(t)] = true;
            }
        }
        if (groups_.empty()) throw std::invalid_argument("pattern has no groups");
    }

    /// Comma notation with 1-based digits, e.g. "12,3" or "1,23". Target arity defaults to
    /// the largest index mentioned; a trailing " of m" sets it explicitly.
    static Pattern parse(std::string_view text, int target_arity = 0)
    {
        std::string body(text);
        if (auto of = body.find(" of "); of != std::string::npos) {
            const std::string m = body.substr(of + 4);
            if (m.empty() || m.find_first_not_of("0123456789") != std::string::npos)
                throw std::invalid_argument("malformed pattern '" + std::string(text) + "'");
            const int explicit_m = std::stoi(m);
            if (target_arity != 0 && target_arity != explicit_m)
                throw std::invalid_argument("pattern arity disagrees with request");
            target_arity = explicit_m;
            body.resize(of);
        }
        std::vector<std::vector<int>> groups(1);
        int largest = 0;
        for (char ch : body) {
            if (ch == ',') {
                groups.emplace_back();
            } else if (ch >= '1' && ch <= '9') {
                groups.back().push_back(ch - '1');
                largest = std::max(largest, ch - '0');
            } else {
                throw std::invalid_argument("malformed pattern '" + std::string(text) + "'");
            }
        }
        return Pattern(std::move(groups), target_arity == 0 ? largest : target_arity);
    }

    static Pattern identity(int n)
    {
        std::vector<std::vector<int>> g;
        for (int i = 0; i < n; ++i) g.push_back({i});
        return Pattern(std::move(g), n);
    }

    const std::vector<std::vector<int>>& groups() const noexcept { return groups_; }
    int source_arity() const noexcept { return static_cast<int>(groups_.size()); }
    int target_arity() const noexcept { return m_; }

    /// Group index of target t, or -1.
    int group_of(int t) const
    {
        for (std::size_t k = 0; k < groups_.size(); ++k)
            if (std::find(groups_[k].begin(), groups_[k].end(), t) != groups_[k].end()) return static_cast<int>(k);
        return -1;
    }

    std::string str() const
    {
        std::ostringstream os;
        for (std::size_t k = 0; k < groups_.size(); ++k) {
            if (k) os << ',';
            for (int t : groups_[k]) os << t + 1;
        }
        os << " of " << m_;
        return os.str();
    }

    /// Group sums X_k in the target Lie algebra.
    std::vector<LieSeries> group_sums(const Alphabet& target, int degree) const
    {
        std::vector<LieSeries> sums;
        for (const auto& g : groups_) {
            LieSeries s(target, degree);
            for (int t : g) s += LieSeries::generator(target, degree, t);
            sums.push_back(std::move(s));
        }
        return sums;
    }

private:
    std::vector<std::vector<int>> groups_;
    int m_;
};

inline TDer tder_extend(const TDer& u, const Pattern& p, const Alphabet& target)
{
    if (p.source_arity() != u.arity())
        throw std::invalid_argument("pattern has " + std::to_string(p.source_arity()) + " groups for a derivation of arity " +
                                    std::to_string(u.arity()));
    if (target.size() != p.target_arity()) throw AmbientMismatch("target alphabet size differs from pattern arity");
    const auto sums = p.group_sums(target, u.degree());
    std::vector<LieSeries> substituted;
    for (const auto& c : u.components()) substituted.push_back(substitute(c, std::span<const LieSeries>(sums)));
    std::vector<LieSeries> out;
    for (int t = 0; t < p.target_arity(); ++t) {
        int k = p.group_of(t);
        out.push_back(k < 0 ? LieSeries(target, u.degree()) : substituted[static_cast<std::size_t>(k)]);
    }
    return TDer(std::move(out));
}

inline TDer tder_extend(const TDer& u, const Pattern& p)
{
    return tder_extend(u, p, Alphabet(p.target_arity()));
}

}  // namespace kvlie

namespace kvlie {

/// Evaluates a Lie series on two or more derivations: each Lyndon basis element becomes the
/// corresponding iterated tder_bracket of the values.
inline TDer evaluate_lie(const LieSeries& s, std::span<const TDer> values)
{
    if (static_cast<int>(values.size()) != s.alphabet().size())
        throw std::invalid_argument("evaluation needs one derivation per generator");
    const TDer& first = values[0];
    std::map<Word, TDer> memo;
    auto eval = [&](auto&& self, const Word& w) -> const TDer& {
        if (auto it = memo.find(w); it != memo.end()) return it->second;
        TDer v = w.size() == 1 ? values[w[0]] : [&] {
            auto [l, r] = standard_factorization(w);
            return tder_bracket(self(self, l), self(self, r));
        }();
        return memo.emplace(w, std::move(v)).first->second;
    };
    TDer out(first.alphabet(), first.degree());
    s.terms().for_each([&](const Word& w, const Rational& c) {
        const TDer& v = eval(eval, w);
        if (!v.is_zero()) out += v * c;
    });
    return out;
}

/// log(e^u e^v) in tder_n, with the bracket of tder_n.
inline TDer tder_bch(const TDer& u, const TDer& v)
{
    u.check_ambient(v);
    const Alphabet two(2);
    auto c = bch(LieSeries::generator(two, u.degree(), 0), LieSeries::generator(two, u.degree(), 1));
    std::vector<TDer> vals{u, v};
    return evaluate_lie(c, std::span<const TDer>(vals));
}

}  // namespace kvlie
