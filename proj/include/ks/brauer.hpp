#ifndef KS_BRAUER_HPP
#define KS_BRAUER_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ks/qform.hpp"
#include "ks/rational.hpp"

namespace ks {

/// A place of Q: a finite prime or the real place.
struct Place {
    bool infinite = false;
    Integer p = 0;

    static Place infinity() { return {true, 0}; }
    static Place prime(Integer q) { return {false, std::move(q)}; }

    bool operator<(const Place& o) const {
        if (infinite != o.infinite) return !infinite;  // primes sort before infinity
        return p < o.p;
    }
    bool operator==(const Place& o) const { return infinite == o.infinite && p == o.p; }

    std::string str() const { return infinite ? "inf" : p.str(); }
};

/// The pair (a,b) defining the quaternion algebra (a,b)_Q; kept squarefree.
struct QuaternionSymbol {
    Integer a, b;

    QuaternionSymbol(Integer a_, Integer b_)
        : a(squarefree_part(std::move(a_))), b(squarefree_part(std::move(b_))) {
        if (a == 0 || b == 0) throw UsageError("quaternion symbol with zero entry");
    }
};

/// Brauer class of a quaternion algebra over Q: the even set of ramified
/// places. Tensor product is symmetric difference (2-torsion).
struct BrauerClass {
    std::set<Place> ram;

    bool split() const { return ram.empty(); }
    bool operator==(const BrauerClass& o) const { return ram == o.ram; }
};

/// Local Hilbert symbol (a,b)_v: +1 iff z^2 = a x^2 + b y^2 has a
/// nontrivial solution over Q_v. Standard formulas, p = 2 included.
inline int hilbert_symbol(const Rational& ar, const Rational& br, const Place& v) {
    if (ar == 0 || br == 0) throw UsageError("hilbert_symbol with zero argument");
    Integer a = square_class(ar), b = square_class(br);
    if (v.infinite) return (a < 0 && b < 0) ? -1 : 1;
    const Integer& p = v.p;
    int alpha = valuation(a, p), beta = valuation(b, p);
    Integer u = a, w = b;
    for (int i = 0; i < alpha; ++i) u /= p;
    for (int i = 0; i < beta; ++i) w /= p;
    if (p == 2) {
        auto eps = [](const Integer& x) { return static_cast<int>(((x - 1) / 2) % 2 != 0); };
        auto omega = [](const Integer& x) { return static_cast<int>(((x * x - 1) / 8) % 2 != 0); };
        int e = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u);
        return (e & 1) ? -1 : 1;
    }
    int r = 1;
    if ((alpha * beta) & 1)
        if (p % 4 == 3) r = -r;  // (-1|p)
    if (beta & 1) r *= legendre(u, p);
    if (alpha & 1) r *= legendre(w, p);
    return r;
}

/// Ramification set of (a,b)_Q: the places with Hilbert symbol -1.
inline BrauerClass ramification(const QuaternionSymbol& sym) {
    BrauerClass cls;
    std::set<Integer> primes{2};
    for (const auto& q : prime_factors(sym.a * sym.b)) primes.insert(q);
    Rational a(sym.a), b(sym.b);
    for (const auto& q : primes)
        if (hilbert_symbol(a, b, Place::prime(q)) == -1) cls.ram.insert(Place::prime(q));
    if (hilbert_symbol(a, b, Place::infinity()) == -1) cls.ram.insert(Place::infinity());
    if (cls.ram.size() % 2 != 0)
        throw std::logic_error("odd ramification set: Hilbert symbol bug");
    return cls;
}

/// Nontrivial solution of a x^2 + b y^2 = a b z^2 with coordinates <= h.
inline std::optional<std::array<Integer, 3>> isotropy_witness(const QuaternionSymbol& sym,
                                                              long height = 50) {
    for (long x = 0; x <= height; ++x)
        for (long y = 0; y <= height; ++y)
            for (long z = 0; z <= height; ++z) {
                if (x == 0 && y == 0 && z == 0) continue;
                Integer lhs = sym.a * x * x + sym.b * y * y - sym.a * sym.b * z * z;
                if (lhs == 0) return std::array<Integer, 3>{x, y, z};
            }
    return std::nullopt;
}

struct SplitResult {
    bool split;
    std::optional<std::array<Integer, 3>> witness;  // only attempted when split
};

/// (a,b) is split (i.e. M_2(Q)) iff its ramification set is empty; when
/// split, a bounded search may additionally certify an isotropic vector.
/// Hasse-Minkowski guarantees a witness exists but not a small one.
inline SplitResult is_split(const QuaternionSymbol& sym, long witness_height = 50) {
    BrauerClass cls = ramification(sym);
    if (!cls.split()) return {false, std::nullopt};
    auto w = isotropy_witness(sym, witness_height);
    if (w) {
        Integer check = sym.a * (*w)[0] * (*w)[0] + sym.b * (*w)[1] * (*w)[1] -
                        sym.a * sym.b * (*w)[2] * (*w)[2];
        if (check != 0) throw std::logic_error("witness fails exact check");
    }
    return {true, w};
}

inline BrauerClass tensor(const BrauerClass& x, const BrauerClass& y) {
    BrauerClass r;
    for (const auto& v : x.ram)
        if (!y.ram.count(v)) r.ram.insert(v);
    for (const auto& v : y.ram)
        if (!x.ram.count(v)) r.ram.insert(v);
    return r;
}

/// Whether the class becomes split after base change to Q(sqrt(d)):
/// true iff no ramified place splits in Q(sqrt(d)).
inline bool splits_over_quadratic(const BrauerClass& cls, const Integer& d) {
    if (is_perfect_square(d)) throw UsageError("splits_over_quadratic needs a non-square d");
    for (const auto& v : cls.ram) {
        bool v_splits;
        if (v.infinite) {
            v_splits = d > 0;
        } else if (v.p == 2) {
            Integer sf = squarefree_part(d);
            v_splits = (sf % 2 != 0) && (((sf % 8) + 8) % 8 == 1);
        } else {
            v_splits = (d % v.p != 0) && legendre(d, v.p) == 1;
        }
        if (v_splits) return false;
    }
    return true;
}

enum class CenterKind { Q, QuadraticField, QxQ };

/// Structure of C+(Q) as M_k(D): matrix size, center, and the quaternion
/// class of D. For a quadratic center the class is a Q-class together
/// with the discriminant; is_split resolves D there by the
/// no-ramified-place-splits criterion.
struct AlgebraStructure {
    std::size_t n = 0;           // ambient dimension of (V,Q)
    Integer matrix_size = 1;     // k in M_k(D)
    CenterKind center = CenterKind::Q;
    Integer discriminant = 1;    // squarefree d with center Q(sqrt d) / QxQ (d = 1)
    bool quaternion_present = true;
    BrauerClass quaternion_class;  // over Q; base-changed when center is quadratic
    bool is_split = true;

    std::string center_str() const {
        switch (center) {
            case CenterKind::Q: return "Q";
            case CenterKind::QxQ: return "QxQ";
            case CenterKind::QuadraticField: return "Q(sqrt " + discriminant.str() + ")";
        }
        return "?";
    }
};

/// Classification of C+(Q) for a diagonal form, by the peeling recursion:
/// the leading three coefficients contribute the symbol (-d1 d2, -d2 d3)
/// and collapse to <-d1 d2 d3>; classes accumulate by tensor.
inline AlgebraStructure even_clifford_structure(const DiagonalForm& form) {
    const std::size_t n = form.n;
    std::vector<Integer> c;
    c.reserve(n);
    for (const auto& di : form.d) c.push_back(square_class(di));

    BrauerClass acc;
    while (c.size() >= 3) {
        QuaternionSymbol sym(-c[0] * c[1], -c[1] * c[2]);
        acc = tensor(acc, ramification(sym));
        Integer merged = squarefree_part(-c[0] * c[1] * c[2]);
        c.erase(c.begin(), c.begin() + 2);
        c[0] = merged;
    }

    AlgebraStructure s;
    s.n = n;
    if (c.size() == 1) {
        if (n == 1) {  // C+(<d>) = Q
            s.quaternion_present = false;
            s.is_split = true;
            return s;
        }
        const std::size_t m = (n - 1) / 2;
        s.matrix_size = Integer(1) << (m - 1);
        s.center = CenterKind::Q;
        s.quaternion_class = acc;
        s.is_split = acc.split();
        return s;
    }

    // c.size() == 2: even n, discriminant class of (-1)^m d_1 ... d_n.
    Integer disc = squarefree_part(-c[0] * c[1]);
    const std::size_t m = n / 2;
    if (n == 2) {
        s.quaternion_present = false;
        s.is_split = true;
        if (disc == 1) {
            s.center = CenterKind::QxQ;
        } else {
            s.center = CenterKind::QuadraticField;
            s.discriminant = disc;
        }
        return s;
    }
    s.matrix_size = Integer(1) << (m - 2);
    s.quaternion_class = acc;
    if (disc == 1) {
        s.center = CenterKind::QxQ;
        s.is_split = acc.split();
    } else {
        s.center = CenterKind::QuadraticField;
        s.discriminant = disc;
        s.is_split = splits_over_quadratic(acc, disc);
    }
    // Dimension bookkeeping: center degree * k^2 * 4 must equal 2^(n-1).
    Integer total = s.matrix_size * s.matrix_size * 4 * (s.center == CenterKind::Q ? 1 : 2);
    if (total != (Integer(1) << (n - 1)))
        throw std::logic_error("classification dimension mismatch");
    return s;
}

/// One simple isogeny factor of the Kuga-Satake variety.
struct IsogenyFactor {
    std::string description;
    Integer multiplicity;
    Integer dimension;  // complex dimension of the simple factor
    std::string endomorphisms;
};

namespace detail {

inline std::string abelian_name(const Integer& dim) {
    if (dim == 1) return "elliptic curve";
    if (dim == 2) return "abelian surface";
    return "abelian " + dim.str() + "-fold";
}

inline std::string ram_str(const BrauerClass& cls) {
    std::string s = "{";
    bool first = true;
    for (const auto& v : cls.ram) {
        if (!first) s += ",";
        s += v.str();
        first = false;
    }
    return s + "}";
}

}  // namespace detail

/// Translates M_k(D) into isogeny factors of the 2^(n-2)-dimensional
/// Kuga-Satake variety. Simplicity and the endomorphism statements
/// assume the generic case MT(V) = GO(Q).
inline std::vector<IsogenyFactor> isogeny_decomposition(const AlgebraStructure& s,
                                                        std::size_t n) {
    if (n < 3) throw UsageError("isogeny decomposition needs n >= 3");
    Integer ks_dim = Integer(1) << (n - 2);
    std::vector<IsogenyFactor> out;

    auto make = [&](Integer total_dim, Integer k, bool split, const std::string& endo_div,
                    const std::string& endo_split) {
        Integer mult = split ? 2 * k : k;
        Integer dim = total_dim / mult;
        IsogenyFactor f;
        f.multiplicity = mult;
        f.dimension = dim;
        f.endomorphisms = split ? endo_split : endo_div;
        f.description = (mult == 1 ? "simple " : "") + detail::abelian_name(dim);
        if (mult > 1) f.description += " (isogenous copies)";
        out.push_back(std::move(f));
    };

    switch (s.center) {
        case CenterKind::Q:
            make(ks_dim, s.matrix_size, s.is_split,
                 "division quaternion algebra over Q, ram " +
                     detail::ram_str(s.quaternion_class),
                 "Q");
            break;
        case CenterKind::QuadraticField:
            make(ks_dim, s.matrix_size, s.is_split,
                 "division quaternion algebra over Q(sqrt " + s.discriminant.str() + ")",
                 "Q(sqrt " + s.discriminant.str() + ")");
            break;
        case CenterKind::QxQ:
            // Two central factors, each M_k(D) over Q; halves need not be
            // isogenous to each other.
            make(ks_dim / 2, s.matrix_size, s.is_split,
                 "division quaternion algebra over Q, ram " +
                     detail::ram_str(s.quaternion_class),
                 "Q");
            out.push_back(out.back());
            break;
    }
    return out;
}

}  // namespace ks

#endif
