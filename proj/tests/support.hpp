#pragma once

#include <kvlie/lie.hpp>

#include <random>

namespace kvlie::fixtures {

/// Random homogeneous-by-degree Lie element with small integer-over-small coefficients.
inline LieSeries random_lie(std::mt19937& rng, const Alphabet& a, int N, int min_deg, int max_deg,
                            double density = 0.6)
{
    std::uniform_int_distribution<int> num(-3, 3);
    std::uniform_int_distribution<int> den(1, 3);
    std::bernoulli_distribution keep(density);
    LieSeries s(a, N);
    for (int d = min_deg; d <= std::min(max_deg, N); ++d)
        for (const Word& w : lyndon_words(a.size(), d))
            if (keep(rng)) s.add(w, frac(num(rng), den(rng)));
    return s;
}

inline AssocSeries random_assoc(std::mt19937& rng, const Alphabet& a, int N, int min_deg, int max_deg,
                                double density = 0.5)
{
    std::uniform_int_distribution<int> num(-3, 3);
    std::bernoulli_distribution keep(density);
    AssocSeries s(a, N, min_deg == 0);
    for (int d = min_deg; d <= std::min(max_deg, N); ++d) {
        // enumerate all words of length d
        Word w(static_cast<std::size_t>(d), 0);
        while (true) {
            if (keep(rng)) s.add(w, num(rng));
            int i = d - 1;
            while (i >= 0 && w[static_cast<std::size_t>(i)] == a.size() - 1) w[static_cast<std::size_t>(i--)] = 0;
            if (i < 0) break;
            ++w[static_cast<std::size_t>(i)];
        }
    }
    return s;
}

}  // namespace kvlie::fixtures
