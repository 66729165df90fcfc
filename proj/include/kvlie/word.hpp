#pragma once

#include "errors.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kvlie {

using Letter = std::uint8_t;
using Word = std::vector<Letter>;

/// Generators x_1..x_n with single-character display labels.
class Alphabet {
public:
    static constexpr int max_size = 16;

    explicit Alphabet(int n) : Alphabet(n, default_labels(n)) {}

    Alphabet(int n, std::string labels) : n_(n), labels_(std::move(labels))
    {
        if (n < 1 || n > max_size)
            throw std::invalid_argument("alphabet size must be in 1.." + std::to_string(max_size));
        if (static_cast<int>(labels_.size()) != n)
            throw std::invalid_argument("alphabet needs exactly one label per generator");
        for (std::size_t i = 0; i < labels_.size(); ++i)
            if (labels_.find(labels_[i], i + 1) != std::string::npos)
                throw std::invalid_argument("alphabet labels must be pairwise distinct");
    }

    int size() const noexcept { return n_; }
    const std::string& labels() const noexcept { return labels_; }
    char label(int i) const { return labels_.at(static_cast<std::size_t>(i)); }

    std::string render(const Word& w) const
    {
        std::string s;
        s.reserve(w.size());
        for (Letter l : w) s.push_back(label(l));
        return s;
    }

    Word parse(std::string_view text) const
    {
        Word w;
        w.reserve(text.size());
        for (char c : text) {
            auto pos = labels_.find(c);
            if (pos == std::string::npos)
                throw std::invalid_argument(std::string("unknown generator label '") + c + "'");
            w.push_back(static_cast<Letter>(pos));
        }
        return w;
    }

    static std::string default_labels(int n)
    {
        static const std::string small = "xyzw";
        static const std::string large = "abcdefghijklmnop";
        if (n <= 4) return small.substr(0, static_cast<std::size_t>(std::max(n, 0)));
        return large.substr(0, static_cast<std::size_t>(std::min(n, max_size)));
    }

    friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
    int n_;
    std::string labels_;
};

inline void require_same(const Alphabet& a, const Alphabet& b)
{
    if (!(a == b))
        throw AmbientMismatch("alphabet mismatch: '" + a.labels() + "' vs '" + b.labels() + "'");
}

inline void require_same_degree(int a, int b)
{
    if (a != b)
        throw AmbientMismatch("truncation mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

/// Strictly smaller than all of its proper rotations.
inline bool is_lyndon(const Word& w)
{
    if (w.empty()) return false;
    const std::size_t n = w.size();
    for (std::size_t k = 1; k < n; ++k) {
        // compare w with its rotation starting at k
        for (std::size_t i = 0; i < n; ++i) {
            Letter a = w[i], b = w[(i + k) % n];
            if (a < b) break;
            if (a > b) return false;
            if (i + 1 == n) return false;  // periodic
        }
    }
    return true;
}

/// Standard factorization w = uv where v is the longest proper suffix that is Lyndon.
inline std::pair<Word, Word> standard_factorization(const Word& w)
{
    for (std::size_t k = 1; k < w.size(); ++k) {
        Word v(w.begin() + static_cast<std::ptrdiff_t>(k), w.end());
        if (is_lyndon(v)) return {Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k)), v};
    }
    throw std::invalid_argument("standard factorization requires a Lyndon word of length >= 2");
}

/// Lexicographically least rotation (Booth's algorithm); the canonical necklace key.
inline Word least_rotation(const Word& w)
{
    const long n = static_cast<long>(w.size());
    if (n < 2) return w;
    auto at = [&](long i) { return w[static_cast<std::size_t>(i % n)]; };
    std::vector<long> f(static_cast<std::size_t>(2 * n), -1);
    long k = 0;
    for (long j = 1; j < 2 * n; ++j) {
        const Letter sj = at(j);
        long i = f[static_cast<std::size_t>(j - k - 1)];
        while (i != -1 && sj != at(k + i + 1)) {
            if (sj < at(k + i + 1)) k = j - i - 1;
            i = f[static_cast<std::size_t>(i)];
        }
        if (sj != at(k + i + 1)) {  // i == -1 here
            if (sj < at(k)) k = j;
            f[static_cast<std::size_t>(j - k)] = -1;
        } else {
            f[static_cast<std::size_t>(j - k)] = i + 1;
        }
    }
    Word r(w.size());
    for (long i = 0; i < n; ++i) r[static_cast<std::size_t>(i)] = at(k + i);
    return r;
}

/// All Lyndon words of exact length d over n letters, in lexicographic order (Duval).
inline std::vector<Word> lyndon_words(int n, int d)
{
    std::vector<Word> out;
    if (n < 1 || d < 1) return out;
    Word w{0};
    while (!w.empty()) {
        if (static_cast<int>(w.size()) == d) out.push_back(w);
        const std::size_t m = w.size();
        while (static_cast<int>(w.size()) < d) {
            const Letter next = w[w.size() - m];
            w.push_back(next);
        }
        while (!w.empty() && w.back() == n - 1) w.pop_back();
        if (!w.empty()) ++w.back();
    }
    return out;
}

}  // namespace kvlie
