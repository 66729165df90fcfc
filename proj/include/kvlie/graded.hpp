#pragma once

#include "rational.hpp"
#include "word.hpp"

#include <map>
#include <vector>

namespace kvlie {

/// Sparse word -> coefficient table bucketed by word length, capped at a maximum degree.
/// Zero coefficients are never stored, so table equality is series equality.
class GradedTerms {
public:
    using Bucket = std::map<Word, Rational>;

    explicit GradedTerms(int max_degree = 0)
        : buckets_(static_cast<std::size_t>(max_degree < 0 ? 0 : max_degree) + 1) {}

    int max_degree() const noexcept { return static_cast<int>(buckets_.size()) - 1; }

    /// Adds c to the coefficient of w. Words longer than the cap are dropped silently;
    /// that is what truncation means.
    void add(const Word& w, const Rational& c)
    {
        if (sgn(c) == 0 || static_cast<int>(w.size()) > max_degree()) return;
        auto& bucket = buckets_[w.size()];
        auto [it, inserted] = bucket.try_emplace(w, c);
        if (!inserted) {
            it->second += c;
            if (sgn(it->second) == 0) bucket.erase(it);
        }
    }

    void add(Word&& w, const Rational& c)
    {
        if (sgn(c) == 0 || static_cast<int>(w.size()) > max_degree()) return;
        auto& bucket = buckets_[w.size()];
        auto it = bucket.find(w);
        if (it == bucket.end()) {
            bucket.emplace(std::move(w), c);
        } else {
            it->second += c;
            if (sgn(it->second) == 0) bucket.erase(it);
        }
    }

    Rational coeff(const Word& w) const
    {
        if (static_cast<int>(w.size()) > max_degree()) return 0;
        const auto& bucket = buckets_[w.size()];
        auto it = bucket.find(w);
        return it == bucket.end() ? Rational(0) : it->second;
    }

    const Bucket& degree(int d) const
    {
        static const Bucket empty;
        if (d < 0 || d > max_degree()) return empty;
        return buckets_[static_cast<std::size_t>(d)];
    }

    bool empty() const noexcept
    {
        for (const auto& b : buckets_)
            if (!b.empty()) return false;
        return true;
    }

    std::size_t size() const noexcept
    {
        std::size_t s = 0;
        for (const auto& b : buckets_) s += b.size();
        return s;
    }

    /// Lowest degree carrying a nonzero term, or -1 for the zero table.
    int min_degree() const noexcept
    {
        for (std::size_t d = 0; d < buckets_.size(); ++d)
            if (!buckets_[d].empty()) return static_cast<int>(d);
        return -1;
    }

    template <class F>
    void for_each(F&& f) const
    {
        for (const auto& bucket : buckets_)
            for (const auto& [w, c] : bucket) f(w, c);
    }

    GradedTerms truncated(int max_degree) const
    {
        GradedTerms out(max_degree);
        for (int d = 0; d <= std::min(max_degree, this->max_degree()); ++d)
            out.buckets_[static_cast<std::size_t>(d)] = buckets_[static_cast<std::size_t>(d)];
        return out;
    }

    GradedTerms homogeneous(int d) const
    {
        GradedTerms out(max_degree());
        if (d >= 0 && d <= max_degree()) out.buckets_[static_cast<std::size_t>(d)] = buckets_[static_cast<std::size_t>(d)];
        return out;
    }

    GradedTerms& operator+=(const GradedTerms& o)
    {
        o.for_each([&](const Word& w, const Rational& c) { add(w, c); });
        return *this;
    }

    GradedTerms& operator-=(const GradedTerms& o)
    {
        o.for_each([&](const Word& w, const Rational& c) { add(w, -c); });
        return *this;
    }

    GradedTerms& operator*=(const Rational& s)
    {
        if (sgn(s) == 0) {
            for (auto& b : buckets_) b.clear();
            return *this;
        }
        for (auto& b : buckets_)
            for (auto& [w, c] : b) c *= s;
        return *this;
    }

    friend bool operator==(const GradedTerms& a, const GradedTerms& b)
    {
        const std::size_t n = std::max(a.buckets_.size(), b.buckets_.size());
        for (std::size_t d = 0; d < n; ++d) {
            const Bucket& x = d < a.buckets_.size() ? a.buckets_[d] : empty_bucket();
            const Bucket& y = d < b.buckets_.size() ? b.buckets_[d] : empty_bucket();
            if (x != y) return false;
        }
        return true;
    }

private:
    static const Bucket& empty_bucket()
    {
        static const Bucket e;
        return e;
    }

    std::vector<Bucket> buckets_;
};

}  // namespace kvlie
