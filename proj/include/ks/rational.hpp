#ifndef KS_RATIONAL_HPP
#define KS_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ks {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidFormError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Integer num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer den(const Rational& q) { return boost::multiprecision::denominator(q); }

/// Parses "p/q", "p", or a plain integer string into a rational.
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Integer(s));
        Integer p(s.substr(0, slash));
        Integer q(s.substr(slash + 1));
        if (q == 0) throw ParseError("zero denominator in '" + s + "'");
        return Rational(p, q);
    } catch (const std::runtime_error&) {
        throw ParseError("cannot parse rational '" + s + "'");
    }
}

inline std::string to_string(const Rational& q) {
    if (den(q) == 1) return num(q).str();
    return num(q).str() + "/" + den(q).str();
}

inline bool is_perfect_square(const Integer& x) {
    if (x < 0) return false;
    Integer r = boost::multiprecision::sqrt(x);
    return r * r == x;
}

/// True iff q is the square of a rational.
inline bool is_square(const Rational& q) {
    return q >= 0 && is_perfect_square(num(q)) && is_perfect_square(den(q));
}

/// Squarefree part of a nonzero integer, keeping the sign: x = sf * m^2.
inline Integer squarefree_part(Integer x) {
    if (x == 0) throw UsageError("squarefree_part of zero");
    Integer sign = x < 0 ? -1 : 1;
    x = boost::multiprecision::abs(x);
    Integer sf = 1;
    for (Integer p = 2; p * p <= x; ++p) {
        if (x % p != 0) continue;
        int e = 0;
        while (x % p == 0) { x /= p; ++e; }
        if (e & 1) sf *= p;
    }
    return sign * sf * x;
}

/// Squarefree integer representing the square class of a nonzero rational.
inline Integer square_class(const Rational& q) {
    if (q == 0) throw UsageError("square_class of zero");
    return squarefree_part(num(q) * den(q));
}

/// p-adic valuation.
inline int valuation(Integer x, const Integer& p) {
    if (x == 0) throw UsageError("valuation of zero");
    int v = 0;
    while (x % p == 0) { x /= p; ++v; }
    return v;
}

inline Integer powmod(Integer base, Integer exp, const Integer& mod) {
    base %= mod;
    if (base < 0) base += mod;
    Integer r = 1;
    while (exp > 0) {
        if (exp & 1) r = r * base % mod;
        base = base * base % mod;
        exp >>= 1;
    }
    return r;
}

/// Legendre symbol (a|p) for odd prime p; requires p does not divide a.
inline int legendre(Integer a, const Integer& p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) throw UsageError("legendre: p divides a");
    return powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

inline std::vector<Integer> prime_factors(Integer x) {
    std::vector<Integer> out;
    x = boost::multiprecision::abs(x);
    for (Integer p = 2; p * p <= x; ++p) {
        if (x % p != 0) continue;
        out.push_back(p);
        while (x % p == 0) x /= p;
    }
    if (x > 1) out.push_back(x);
    return out;
}

}  // namespace ks

#endif
