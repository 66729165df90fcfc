#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace kvlie {

using Rational = mpq_class;

/// p/q in lowest terms.
inline Rational frac(long p, long q)
{
    if (q == 0) throw std::domain_error("zero denominator");
    Rational r{mpz_class(p), mpz_class(q)};
    r.canonicalize();
    return r;
}

/// Canonical "p/q" text form, q > 0 and gcd(p, q) = 1. Integers are written "p/1".
inline std::string to_string(const Rational& q)
{
    Rational c = q;
    c.canonicalize();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

/// Accepts "p/q" or a bare integer "p". No decimal points, no whitespace.
inline Rational parse_rational(std::string_view text)
{
    auto valid_int = [](std::string_view s) {
        if (s.empty()) return false;
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
        throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    mpz_class n(std::string(num[0] == '+' ? num.substr(1) : num), 10);
    mpz_class d(std::string(den), 10);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

}  // namespace kvlie
