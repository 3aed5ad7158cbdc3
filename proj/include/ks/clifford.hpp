#ifndef KS_CLIFFORD_HPP
#define KS_CLIFFORD_HPP

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <type_traits>
#include <utility>
#include <vector>

#include "ks/linalg.hpp"
#include "ks/qform.hpp"
#include "ks/rational.hpp"

namespace ks {

/// Basis blade e^a encoded as a bitmask: bit i set <=> generator e_{i+1}
/// appears. Blade parity (even/odd popcount) separates C+ from C-.
using Blade = std::uint32_t;

inline int grade(Blade a) { return std::popcount(a); }
inline bool blade_even(Blade a) { return (grade(a) & 1) == 0; }

struct BladeProduct {
    int sign;        // +1 or -1
    Rational scale;  // product of d_i over the common generators
    Blade mask;      // symmetric difference
};

/// e^a * e^b = sign * scale * e^(a xor b). The sign counts the
/// transpositions moving each generator of b leftward past the
/// higher-index generators of a.
inline BladeProduct blade_product(Blade a, Blade b, const DiagonalForm& form) {
    int t = 0;
    for (Blade rest = b; rest;) {
        int i = std::countr_zero(rest);
        rest &= rest - 1;
        t += std::popcount(a >> (i + 1));
    }
    Rational scale = 1;
    for (Blade common = a & b; common;) {
        int i = std::countr_zero(common);
        common &= common - 1;
        scale *= form.d[static_cast<std::size_t>(i)];
    }
    return {(t & 1) ? -1 : 1, std::move(scale), a ^ b};
}

template <class S>
S scalar_from_rational(const Rational& q) {
    if constexpr (std::is_floating_point_v<S>)
        return q.template convert_to<S>();
    else
        return q;
}

template <class S>
bool scalar_is_zero(const S& x) {
    return x == S(0);
}

/// Sparse element of C(Q); scalars are either exact rationals or doubles.
/// Values are immutable in spirit: all operations return new elements.
template <class S>
struct CliffordElement {
    std::shared_ptr<const DiagonalForm> form;
    std::map<Blade, S> coeffs;

    static CliffordElement zero(std::shared_ptr<const DiagonalForm> f) {
        return CliffordElement{std::move(f), {}};
    }
    static CliffordElement scalar(std::shared_ptr<const DiagonalForm> f, S v) {
        CliffordElement e{std::move(f), {}};
        e.set(0, std::move(v));
        return e;
    }
    static CliffordElement blade(std::shared_ptr<const DiagonalForm> f, Blade a, S v = S(1)) {
        CliffordElement e{std::move(f), {}};
        e.set(a, std::move(v));
        return e;
    }

    void set(Blade a, S v) {
        if (scalar_is_zero(v))
            coeffs.erase(a);
        else
            coeffs[a] = std::move(v);
    }
    void accum(Blade a, const S& v) {
        auto it = coeffs.find(a);
        if (it == coeffs.end()) {
            if (!scalar_is_zero(v)) coeffs.emplace(a, v);
        } else {
            it->second += v;
            if (scalar_is_zero(it->second)) coeffs.erase(it);
        }
    }
    S coeff(Blade a) const {
        auto it = coeffs.find(a);
        return it == coeffs.end() ? S(0) : it->second;
    }
    bool is_zero() const { return coeffs.empty(); }
    bool is_even() const {
        for (const auto& [a, c] : coeffs)
            if (!blade_even(a)) return false;
        return true;
    }
    bool is_grade(int k) const {
        for (const auto& [a, c] : coeffs)
            if (grade(a) != k) return false;
        return true;
    }
};

template <class S>
void check_same_form(const CliffordElement<S>& x, const CliffordElement<S>& y) {
    if (x.form != y.form && !(x.form && y.form && *x.form == *y.form))
        throw UsageError("Clifford elements live over different forms");
}

template <class S>
CliffordElement<S> operator+(const CliffordElement<S>& x, const CliffordElement<S>& y) {
    check_same_form(x, y);
    CliffordElement<S> r = x;
    for (const auto& [a, c] : y.coeffs) r.accum(a, c);
    return r;
}

template <class S>
CliffordElement<S> operator-(const CliffordElement<S>& x, const CliffordElement<S>& y) {
    check_same_form(x, y);
    CliffordElement<S> r = x;
    for (const auto& [a, c] : y.coeffs) r.accum(a, -c);
    return r;
}

template <class S>
CliffordElement<S> operator*(const S& s, const CliffordElement<S>& x) {
    CliffordElement<S> r = CliffordElement<S>::zero(x.form);
    if (scalar_is_zero(s)) return r;
    for (const auto& [a, c] : x.coeffs) r.set(a, s * c);
    return r;
}

template <class S>
CliffordElement<S> operator-(const CliffordElement<S>& x) {
    return S(-1) * x;
}

template <class S>
CliffordElement<S> operator*(const CliffordElement<S>& x, const CliffordElement<S>& y) {
    check_same_form(x, y);
    CliffordElement<S> r = CliffordElement<S>::zero(x.form);
    for (const auto& [a, ca] : x.coeffs)
        for (const auto& [b, cb] : y.coeffs) {
            BladeProduct p = blade_product(a, b, *x.form);
            S v = ca * cb * scalar_from_rational<S>(p.scale);
            if (p.sign < 0) v = -v;
            r.accum(p.mask, v);
        }
    return r;
}

/// The anti-involution iota: reverses generator order; on a grade-k blade
/// it is (-1)^(k(k-1)/2).
template <class S>
CliffordElement<S> reversal(const CliffordElement<S>& x) {
    CliffordElement<S> r = CliffordElement<S>::zero(x.form);
    for (const auto& [a, c] : x.coeffs) {
        int k = grade(a);
        r.set(a, ((k * (k - 1) / 2) & 1) ? -c : c);
    }
    return r;
}

template <class S>
CliffordElement<S> even_part(const CliffordElement<S>& x) {
    CliffordElement<S> r = CliffordElement<S>::zero(x.form);
    for (const auto& [a, c] : x.coeffs)
        if (blade_even(a)) r.set(a, c);
    return r;
}

template <class S>
CliffordElement<S> odd_part(const CliffordElement<S>& x) {
    CliffordElement<S> r = CliffordElement<S>::zero(x.form);
    for (const auto& [a, c] : x.coeffs)
        if (!blade_even(a)) r.set(a, c);
    return r;
}

/// Trace of left multiplication x -> c x on C+(Q): 2^(n-1) times the
/// identity-blade coefficient.
template <class S>
S trace(const CliffordElement<S>& c) {
    if (!c.is_even()) throw UsageError("trace requires an even element");
    return S(Integer(1) << (c.form->n - 1)) * c.coeff(0);
}

template <>
inline double trace(const CliffordElement<double>& c) {
    if (!c.is_even()) throw UsageError("trace requires an even element");
    return std::ldexp(c.coeff(0), static_cast<int>(c.form->n) - 1);
}

/// E(v,w) = Tr(alpha iota(v) w) for even v, w.
template <class S>
S bilinear_E(const CliffordElement<S>& alpha, const CliffordElement<S>& v,
             const CliffordElement<S>& w) {
    if (!v.is_even() || !w.is_even()) throw UsageError("bilinear_E requires even elements");
    return trace(alpha * reversal(v) * w);
}

/// Even blade masks of an n-generator algebra, ascending.
inline std::vector<Blade> even_blades(std::size_t n) {
    std::vector<Blade> out;
    out.reserve(std::size_t(1) << (n - 1));
    for (Blade a = 0; a < (Blade(1) << n); ++a)
        if (blade_even(a)) out.push_back(a);
    return out;
}

inline std::vector<Blade> all_blades(std::size_t n) {
    std::vector<Blade> out(std::size_t(1) << n);
    for (Blade a = 0; a < out.size(); ++a) out[a] = a;
    return out;
}

/// Matrix of y -> x y in the given blade basis.
template <class S>
Mat<S> left_mult_matrix(const CliffordElement<S>& x, const std::vector<Blade>& basis) {
    std::map<Blade, std::size_t> index;
    for (std::size_t i = 0; i < basis.size(); ++i) index[basis[i]] = i;
    Mat<S> m(basis.size(), basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) {
        for (const auto& [a, c] : x.coeffs) {
            BladeProduct p = blade_product(a, basis[j], *x.form);
            auto it = index.find(p.mask);
            if (it == index.end()) throw UsageError("left multiplication leaves the basis span");
            S v = c * scalar_from_rational<S>(p.scale);
            m(it->second, j) += p.sign < 0 ? -v : v;
        }
    }
    return m;
}

namespace detail {

template <class S>
bool nearly_scalar(const CliffordElement<S>& x) {
    if constexpr (std::is_floating_point_v<S>) {
        S big = 0;
        for (const auto& [a, c] : x.coeffs) big = std::max(big, std::abs(c));
        for (const auto& [a, c] : x.coeffs)
            if (a != 0 && std::abs(c) > 1e-10 * std::max(big, S(1))) return false;
        return true;
    } else {
        for (const auto& [a, c] : x.coeffs)
            if (a != 0) return false;
        return true;
    }
}

}  // namespace detail

/// nu(g) = iota(g) g; returns (scalar part, whether the product is scalar).
template <class S>
std::pair<S, bool> spinor_norm(const CliffordElement<S>& g) {
    if (!g.is_even()) throw UsageError("spinor_norm requires an even element");
    CliffordElement<S> p = reversal(g) * g;
    return {p.coeff(0), detail::nearly_scalar(p)};
}

/// Inverse of a unit; fast path when iota(g) g is scalar, otherwise an
/// exact/dense linear solve of g x = 1.
template <class S>
CliffordElement<S> inverse(const CliffordElement<S>& g) {
    if (g.is_zero()) throw UsageError("not a unit");
    if (g.is_even()) {
        CliffordElement<S> p = reversal(g) * g;
        if (detail::nearly_scalar(p) && !scalar_is_zero(p.coeff(0)))
            return (S(1) / p.coeff(0)) * reversal(g);
    }
    std::vector<Blade> basis = g.is_even() ? even_blades(g.form->n) : all_blades(g.form->n);
    Mat<S> m = left_mult_matrix(g, basis);
    std::vector<S> rhs(basis.size(), S(0));
    rhs[0] = S(1);  // basis[0] is the identity blade
    auto x = solve(m, rhs);
    if (!x) throw UsageError("not a unit");
    CliffordElement<S> r = CliffordElement<S>::zero(g.form);
    for (std::size_t i = 0; i < basis.size(); ++i) r.set(basis[i], (*x)[i]);
    return r;
}

/// rho(g) v = g v g^-1.
template <class S>
CliffordElement<S> conjugation_rho(const CliffordElement<S>& g, const CliffordElement<S>& v) {
    return g * v * inverse(g);
}

/// Matrix of y -> v y e_1 on C+(Q) for grade-1 v; the embedding
/// V -> End(C+(Q)) underlying V -> C+(Q) (x) C+(Q).
template <class S>
Mat<S> embed_V(const CliffordElement<S>& v) {
    if (!v.is_zero() && !v.is_grade(1)) throw UsageError("embed_V requires a grade-1 element");
    const std::size_t n = v.form->n;
    std::vector<Blade> basis = even_blades(n);
    std::map<Blade, std::size_t> index;
    for (std::size_t i = 0; i < basis.size(); ++i) index[basis[i]] = i;
    CliffordElement<S> e1 = CliffordElement<S>::blade(v.form, 1u);
    Mat<S> m(basis.size(), basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) {
        CliffordElement<S> w = v * CliffordElement<S>::blade(v.form, basis[j]) * e1;
        for (const auto& [a, c] : w.coeffs) m(index.at(a), j) += c;
    }
    return m;
}

/// Brute-force center of C+(Q): exact nullspace of the commutator
/// constraints against the adjacent grade-2 generators. Testing oracle;
/// refuses above the bound.
inline std::vector<CliffordElement<Rational>> center_of_even(
    const std::shared_ptr<const DiagonalForm>& form, std::size_t bound = 6) {
    const std::size_t n = form->n;
    if (n > bound) throw UsageError("center_of_even: dimension exceeds oracle bound");
    std::vector<Blade> basis = even_blades(n);
    const std::size_t dim = basis.size();
    std::map<Blade, std::size_t> index;
    for (std::size_t i = 0; i < dim; ++i) index[basis[i]] = i;

    std::vector<Blade> gens;
    for (std::size_t i = 0; i + 1 < n; ++i) gens.push_back((Blade(1) << i) | (Blade(1) << (i + 1)));

    Mat<Rational> sys(dim * gens.size(), dim);
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
        for (std::size_t j = 0; j < dim; ++j) {
            BladeProduct zg = blade_product(basis[j], gens[gi], *form);
            BladeProduct gz = blade_product(gens[gi], basis[j], *form);
            Rational lhs = zg.sign < 0 ? -zg.scale : zg.scale;
            Rational rhs = gz.sign < 0 ? -gz.scale : gz.scale;
            sys(gi * dim + index.at(zg.mask), j) += lhs;
            sys(gi * dim + index.at(gz.mask), j) -= rhs;
        }
    }
    std::vector<CliffordElement<Rational>> out;
    for (const auto& vec : nullspace(sys)) {
        CliffordElement<Rational> z = CliffordElement<Rational>::zero(form);
        for (std::size_t j = 0; j < dim; ++j) z.set(basis[j], vec[j]);
        out.push_back(std::move(z));
    }
    return out;
}

/// Explicit promotion from exact to floating coefficients (one-way).
inline CliffordElement<double> promote(const CliffordElement<Rational>& x) {
    CliffordElement<double> r = CliffordElement<double>::zero(x.form);
    for (const auto& [a, c] : x.coeffs) r.set(a, c.convert_to<double>());
    return r;
}

}  // namespace ks

#endif
