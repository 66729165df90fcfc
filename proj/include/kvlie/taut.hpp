#pragma once

#include "tder.hpp"

namespace kvlie {

namespace detail {

/// Solves [x_i, a] = r for a Lie element a free of the linear x_i term. Peels r one leading
/// x_i at a time: the words of [x_i, A] not starting with x_i are exactly -B x_i, where B
/// collects the words of A not starting with x_i. The answer is then checked exactly.
inline std::optional<LieSeries> divide_ad(const AssocSeries& r, int i)
{
    const Alphabet& alpha = r.alphabet();
    const int M = r.degree();
    const Letter xi = static_cast<Letter>(i);
    std::map<Word, Rational> rest;
    r.terms().for_each([&](const Word& w, const Rational& c) { rest.emplace(w, c); });
    auto bump = [](std::map<Word, Rational>& m, const Word& w, const Rational& c) {
        Rational& slot = m[w];
        slot += c;
        if (sgn(slot) == 0) m.erase(w);
    };
    AssocSeries quotient(alpha, M, false);
    Word prefix;
    for (int k = 0; !rest.empty(); ++k) {
        if (k > M) return std::nullopt;
        std::vector<std::pair<Word, Rational>> low;
        for (const auto& [w, c] : rest) {
            if (w.empty()) return std::nullopt;
            if (w.front() == xi) continue;
            if (w.back() != xi) return std::nullopt;
            low.emplace_back(Word(w.begin(), w.end() - 1), -c);
        }
        for (const auto& [b, c] : low) {
            Word left{xi};
            left.insert(left.end(), b.begin(), b.end());
            Word right = b;
            right.push_back(xi);
            bump(rest, left, -c);
            bump(rest, right, c);
            Word q = prefix;
            q.insert(q.end(), b.begin(), b.end());
            quotient.add(q, c);
        }
        std::map<Word, Rational> stripped;
        for (const auto& [w, c] : rest) {
            if (w.front() != xi) return std::nullopt;
            stripped.emplace(Word(w.begin() + 1, w.end()), c);
        }
        rest = std::move(stripped);
        prefix.push_back(xi);
    }
    AssocSeries cleaned(alpha, M, false);
    quotient.terms().for_each([&](const Word& w, const Rational& c) {
        if (!std::all_of(w.begin(), w.end(), [&](Letter l) { return l == xi; })) cleaned.add(w, c);
    });
    try {
        LieSeries a = LieSeries::from_assoc(cleaned);
        if (!(commutator(AssocSeries::generator(alpha, M, i), a.to_assoc()) == r)) return std::nullopt;
        return a;
    } catch (const NotPrimitive&) {
        return std::nullopt;
    }
}

/// Ad_{e^g} x = e^g x e^{-g}.
inline LieSeries adjoint_exp(const LieSeries& g, const LieSeries& x)
{
    const AssocSeries ga = g.to_assoc();
    return LieSeries::from_assoc(exp_series(ga) * x.to_assoc() * exp_series(-ga));
}

}  // namespace detail

/// Element of TAut_n stored by the images of the generators. With truncation order N the
/// images are kept through degree N + 1, which is exactly what determines a degree-N
/// logarithm; the action on series of order N uses the images cut at N.
class TAutElem {
public:
    static TAutElem identity(const Alphabet& a, int degree)
    {
        std::vector<LieSeries> im;
        for (int i = 0; i < a.size(); ++i) im.push_back(LieSeries::generator(a, degree + 1, i));
        return TAutElem(std::move(im), TDer(a, degree));
    }

    /// Validates that every image is a conjugate of its generator (throws NotTangential).
    static TAutElem from_images(std::vector<LieSeries> images)
    {
        TAutElem g(std::move(images), std::nullopt);
        for (int i = 0; i < g.arity(); ++i) g.conjugator(i);
        return g;
    }

    /// Images are stored with truncation one above the element's order.
    const Alphabet& alphabet() const noexcept { return images_[0].alphabet(); }
    int degree() const noexcept { return images_[0].degree() - 1; }
    int arity() const noexcept { return static_cast<int>(images_.size()); }
    const std::vector<LieSeries>& images() const noexcept { return images_; }
    const LieSeries& image(int i) const { return images_.at(static_cast<std::size_t>(i)); }
    const std::vector<AssocSeries>& assoc_images() const noexcept { return assoc_; }
    const std::optional<TDer>& log_certificate() const noexcept { return log_; }

    /// γ_i with Ad_{e^{γ_i}} x_i = image_i and no linear x_i term, through degree N.
    LieSeries conjugator(int i) const
    {
        const int M = degree() + 1;
        const LieSeries& target = image(i);
        const LieSeries xi = LieSeries::generator(alphabet(), M, i);
        if (!(target.homogeneous(1) == xi))
            throw NotTangential("image " + std::to_string(i + 1) + " does not start with its generator");
        LieSeries gamma(alphabet(), M);
        for (int d = 1; d < M; ++d) {
            LieSeries r = (target - detail::adjoint_exp(gamma, xi)).homogeneous(d + 1);
            if (r.is_zero()) continue;
            auto a = detail::divide_ad(r.to_assoc(), i);
            if (!a) throw NotTangential("image " + std::to_string(i + 1) + " is not a conjugate of its generator at degree " + std::to_string(d + 1));
            gamma -= *a;
        }
        if (!(detail::adjoint_exp(gamma, xi) == target))
            throw NotTangential("image " + std::to_string(i + 1) + " is not a conjugate of its generator");
        return gamma.with_degree(degree());
    }

    std::vector<LieSeries> conjugators() const
    {
        std::vector<LieSeries> c;
        for (int i = 0; i < arity(); ++i) c.push_back(conjugator(i));
        return c;
    }

    friend bool operator==(const TAutElem& a, const TAutElem& b) { return a.images_ == b.images_; }

    void check_ambient(const TAutElem& o) const
    {
        require_same(alphabet(), o.alphabet());
        require_same_degree(degree(), o.degree());
    }

private:
    template <class T>
    friend TAutElem make_taut(std::vector<LieSeries>, T&&);
    friend TAutElem taut_exp(const TDer&);

    TAutElem(std::vector<LieSeries> images, std::optional<TDer> log) : images_(std::move(images)), log_(std::move(log))
    {
        if (images_.empty()) throw std::invalid_argument("automorphism needs images");
        if (static_cast<int>(images_.size()) != images_[0].alphabet().size())
            throw AmbientMismatch("automorphism needs one image per generator");
        if (images_[0].degree() < 2) throw std::invalid_argument("automorphism truncation order must be >= 1");
        for (const auto& im : images_) images_[0].check_ambient(im);
        for (const auto& im : images_) assoc_.push_back(im.to_assoc());
        if (log_) {
            require_same(log_->alphabet(), alphabet());
            require_same_degree(log_->degree(), degree());
        }
    }

    std::vector<LieSeries> images_;
    std::vector<AssocSeries> assoc_;
    std::optional<TDer> log_;
};

/// Internal constructor for images already known to be tangential.
template <class T>
TAutElem make_taut(std::vector<LieSeries> images, T&& log)
{
    return TAutElem(std::move(images), std::forward<T>(log));
}

/// exp(u): x_i -> sum_k u^k(x_i)/k!.
inline TAutElem taut_exp(const TDer& u)
{
    const int M = u.degree() + 1;
    const TDer w = u.with_degree(M);
    std::vector<LieSeries> images;
    for (int i = 0; i < u.arity(); ++i) {
        LieSeries term = LieSeries::generator(u.alphabet(), M, i);
        LieSeries sum = term;
        for (int k = 1; k < M && !term.is_zero(); ++k) {
            term = tder_apply(w, term) * frac(1, k);
            sum += term;
        }
        images.push_back(std::move(sum));
    }
    return TAutElem(std::move(images), u);
}

/// Algebra-map action on series of the element's own truncation order.
inline AssocSeries taut_apply(const TAutElem& g, const AssocSeries& s)
{
    require_same(g.alphabet(), s.alphabet());
    require_same_degree(g.degree(), s.degree());
    std::vector<AssocSeries> im;
    for (const auto& a : g.assoc_images()) im.push_back(a.with_degree(g.degree()));
    return substitute(s, std::span<const AssocSeries>(im));
}

inline LieSeries taut_apply(const TAutElem& g, const LieSeries& s)
{
    return LieSeries::from_assoc(taut_apply(g, s.to_assoc()));
}

inline CycSeries taut_apply(const TAutElem& g, const CycSeries& s)
{
    return tr_project(taut_apply(g, representative(s)));
}

/// (g h)(s) = g(h(s)).
inline TAutElem taut_compose(const TAutElem& g, const TAutElem& h)
{
    g.check_ambient(h);
    std::vector<LieSeries> images;
    for (int i = 0; i < g.arity(); ++i)
        images.push_back(LieSeries::from_assoc(substitute(h.assoc_images()[static_cast<std::size_t>(i)],
                                                          std::span<const AssocSeries>(g.assoc_images()))));
    return make_taut(std::move(images), std::nullopt);
}

/// Inverse by the iteration h <- h - (g(h) - id) on generators, one degree per step.
inline TAutElem taut_invert(const TAutElem& g)
{
    const int M = g.degree() + 1;
    std::vector<AssocSeries> h;
    for (int i = 0; i < g.arity(); ++i) h.push_back(AssocSeries::generator(g.alphabet(), M, i));
    for (int step = 0; step < M; ++step) {
        std::vector<AssocSeries> next;
        for (int i = 0; i < g.arity(); ++i) {
            AssocSeries gh = substitute(h[static_cast<std::size_t>(i)], std::span<const AssocSeries>(g.assoc_images()));
            next.push_back(h[static_cast<std::size_t>(i)] - (gh - AssocSeries::generator(g.alphabet(), M, i)));
        }
        h = std::move(next);
    }
    std::vector<LieSeries> images;
    for (const auto& a : h) images.push_back(LieSeries::from_assoc(a));
    std::optional<TDer> log;
    if (g.log_certificate()) log = -*g.log_certificate();
    return make_taut(std::move(images), std::move(log));
}

/// Operator logarithm sum_k (-1)^{k+1} (g - id)^k / k on generators, divided by x_i.
inline TDer taut_log(const TAutElem& g)
{
    const int M = g.degree() + 1;
    std::vector<LieSeries> comps;
    for (int i = 0; i < g.arity(); ++i) {
        AssocSeries power = AssocSeries::generator(g.alphabet(), M, i);
        AssocSeries sum(g.alphabet(), M, false);
        for (int k = 1; k < M; ++k) {
            power = substitute(power, std::span<const AssocSeries>(g.assoc_images())) - power;
            if (power.is_zero()) break;
            sum += power * frac(k % 2 == 1 ? 1 : -1, k);
        }
        if (sum.is_zero()) {
            comps.emplace_back(g.alphabet(), g.degree());
            continue;
        }
        auto a = detail::divide_ad(sum, i);
        if (!a) throw NotTangential("logarithm is not tangential on generator " + std::to_string(i + 1));
        comps.push_back(a->with_degree(g.degree()));
    }
    return TDer(std::move(comps));
}

/// Images Ad_{e^{γ_i}} x_i from conjugators γ_i given at the element's truncation order.
inline TAutElem from_conjugators(const std::vector<LieSeries>& gammas)
{
    if (gammas.empty()) throw std::invalid_argument("no conjugators");
    const int M = gammas[0].degree() + 1;
    std::vector<LieSeries> images;
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        gammas[0].check_ambient(gammas[i]);
        images.push_back(detail::adjoint_exp(gammas[i].with_degree(M), LieSeries::generator(gammas[i].alphabet(), M, static_cast<int>(i))));
    }
    if (static_cast<int>(images.size()) != gammas[0].alphabet().size())
        throw AmbientMismatch("one conjugator per generator required");
    return make_taut(std::move(images), std::nullopt);
}

/// Inner automorphism s -> e^w s e^{-w}.
inline TAutElem inner_automorphism(const LieSeries& w)
{
    return from_conjugators(std::vector<LieSeries>(static_cast<std::size_t>(w.alphabet().size()), w));
}

/// J(e^u) = sum_{k>=0} u^k(div u)/(k+1)!.
inline CycSeries j_group_cocycle(const TAutElem& g)
{
    const TDer u = g.log_certificate() ? *g.log_certificate() : taut_log(g);
    CycSeries term = divergence(u);
    CycSeries sum = term;
    for (int k = 1; k <= u.degree() && !term.is_zero(); ++k) {
        term = tder_apply(u, term) * frac(1, k + 1);
        sum += term;
    }
    return sum;
}

/// Group-level simplicial map through the canonical conjugators: a target in group k
/// receives Ad_{e^{γ_k(X)}} with X the group sums.
inline TAutElem taut_extend(const TAutElem& g, const Pattern& p, const Alphabet& target)
{
    if (p.source_arity() != g.arity())
        throw std::invalid_argument("pattern has " + std::to_string(p.source_arity()) + " groups for an automorphism of arity " +
                                    std::to_string(g.arity()));
    if (target.size() != p.target_arity()) throw AmbientMismatch("target alphabet size differs from pattern arity");
    const auto sums = p.group_sums(target, g.degree());
    std::vector<LieSeries> gammas;
    const auto source = g.conjugators();
    std::vector<LieSeries> substituted;
    for (const auto& c : source) substituted.push_back(substitute(c, std::span<const LieSeries>(sums)));
    for (int t = 0; t < p.target_arity(); ++t) {
        int k = p.group_of(t);
        gammas.push_back(k < 0 ? LieSeries(target, g.degree()) : substituted[static_cast<std::size_t>(k)]);
    }
    TAutElem out = from_conjugators(gammas);
    if (g.log_certificate()) out = make_taut(out.images(), tder_extend(*g.log_certificate(), p, target));
    return out;
}

inline TAutElem taut_extend(const TAutElem& g, const Pattern& p)
{
    return taut_extend(g, p, Alphabet(p.target_arity()));
}

namespace detail {

inline LieSeries swap_xy(const LieSeries& s)
{
    const Alphabet& a = s.alphabet();
    std::vector<LieSeries> images{LieSeries::generator(a, s.degree(), 1), LieSeries::generator(a, s.degree(), 0)};
    return substitute(s, std::span<const LieSeries>(images));
}

/// Multiplies the degree-d part by (-1)^(d + shift).
inline LieSeries alternate(const LieSeries& s, int shift)
{
    LieSeries out(s.alphabet(), s.degree());
    for (int d = 1; d <= s.degree(); ++d) {
        LieSeries h = s.homogeneous(d);
        out += (d + shift) % 2 == 0 ? h : -h;
    }
    return out;
}

inline void require_arity(int got, int want, const char* what)
{
    if (got != want)
        throw AmbientMismatch(std::string(what) + " needs arity " + std::to_string(want) + ", got " + std::to_string(got));
}

}  // namespace detail

/// τ1: (F(x,y), G(x,y)) -> (G(y,x), F(y,x)).
inline TDer tau1(const TDer& u)
{
    detail::require_arity(u.arity(), 2, "tau1");
    return TDer({detail::swap_xy(u.component(1)), detail::swap_xy(u.component(0))});
}

inline TAutElem tau1(const TAutElem& g)
{
    detail::require_arity(g.arity(), 2, "tau1");
    std::optional<TDer> log;
    if (g.log_certificate()) log = tau1(*g.log_certificate());
    return make_taut(std::vector<LieSeries>{detail::swap_xy(g.image(1)), detail::swap_xy(g.image(0))}, std::move(log));
}

/// All variables negated: a degree-d component picks up (-1)^d.
inline TDer negate_variables(const TDer& u)
{
    std::vector<LieSeries> c;
    for (const auto& a : u.components()) c.push_back(detail::alternate(a, 0));
    return TDer(std::move(c));
}

/// Same on the group: conjugation by x_i -> -x_i, so a degree-d image part picks up (-1)^(d+1).
inline TAutElem negate_variables(const TAutElem& g)
{
    std::vector<LieSeries> im;
    for (const auto& s : g.images()) im.push_back(detail::alternate(s, 1));
    std::optional<TDer> log;
    if (g.log_certificate()) log = negate_variables(*g.log_certificate());
    return make_taut(std::move(im), std::move(log));
}

inline TDer tau2(const TDer& u)
{
    detail::require_arity(u.arity(), 2, "tau2");
    return negate_variables(u);
}

inline TAutElem tau2(const TAutElem& g)
{
    detail::require_arity(g.arity(), 2, "tau2");
    return negate_variables(g);
}

inline TDer kappa(const TDer& u)
{
    detail::require_arity(u.arity(), 3, "kappa");
    return negate_variables(u);
}

inline TAutElem kappa(const TAutElem& g)
{
    detail::require_arity(g.arity(), 3, "kappa");
    return negate_variables(g);
}

/// R = (e^y, 1): x -> e^y x e^{-y}, y -> y.
inline TAutElem r_element(int degree)
{
    const Alphabet a(2);
    return from_conjugators({LieSeries::generator(a, degree, 1), LieSeries(a, degree)});
}

}  // namespace kvlie
