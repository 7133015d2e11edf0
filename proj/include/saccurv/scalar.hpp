#pragma once

#include <cmath>
#include <cstdlib>
#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace saccurv {

/// Exact rational scalar. All library entry points are templated on the
/// scalar type; instantiating with Rat gives exact arithmetic, with double
/// the floating-point mode. The two never mix inside one computation.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rat: zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

/// Parse "p/q" or "p". Throws std::invalid_argument on malformed input.
inline Rat parse_rat(const std::string& text) {
    Rat q;
    if (q.set_str(text, 10) != 0)
        throw std::invalid_argument("parse_rat: malformed rational '" + text + "'");
    if (q.get_den() == 0)
        throw std::invalid_argument("parse_rat: zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rat& q) { return q.get_str(); }

inline std::string to_string(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline double to_double(const Rat& q) { return q.get_d(); }
inline double to_double(double x) { return x; }

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rat> {
    static constexpr bool is_exact = true;
    static Rat from_rat(const Rat& q) { return q; }
};

template <>
struct scalar_traits<double> {
    static constexpr bool is_exact = false;
    static double from_rat(const Rat& q) { return q.get_d(); }
};

template <class S>
S abs_s(const S& x) {
    return x < S(0) ? S(-x) : x;
}

template <class S>
S pow_s(S base, std::size_t e) {
    S out(1);
    while (e--) out = out * base;
    return out;
}

/// C(n, k) as a scalar; exact in both modes for desk-scale n.
template <class S>
S binomial(std::size_t n, std::size_t k) {
    if (k > n) return S(0);
    if (k > n - k) k = n - k;
    unsigned long long num = 1;
    for (std::size_t i = 0; i < k; ++i) num = num * (n - i) / (i + 1);
    return S(static_cast<long>(num));
}

/// |a - b| <= tol * max(1, |a|, |b|). Used only in float mode.
inline bool near(double a, double b, double tol) {
    double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    return std::fabs(a - b) <= tol * scale;
}

} // namespace saccurv
