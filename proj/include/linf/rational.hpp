#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace linf {

/// Exact rational scalar. Every coefficient in the library is one of these.
using Q = mpq_class;

/// Parses "p", "-p" or "p/q" (no decimals, no whitespace). Throws ParseError.
Q parse_rational(std::string_view text);

/// Canonical "p" or "p/q" rendering, the inverse of parse_rational.
std::string to_string(const Q& q);

/// n/d in lowest terms (mpq_class(n, d) alone does not canonicalize).
inline Q frac(long n, long d)
{
    Q q(n, d);
    q.canonicalize();
    return q;
}

inline bool is_zero(const Q& q) { return sgn(q) == 0; }

inline Q factorial(int n)
{
    Q r = 1;
    for (int i = 2; i <= n; ++i)
        r *= i;
    return r;
}

inline int parity_sign(long long exponent) { return (exponent % 2 == 0) ? 1 : -1; }

}  // namespace linf
