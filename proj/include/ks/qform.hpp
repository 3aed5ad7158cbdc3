#ifndef KS_QFORM_HPP
#define KS_QFORM_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "ks/linalg.hpp"
#include "ks/rational.hpp"

namespace ks {

struct DiagonalForm;

/// Symmetric nondegenerate Gram matrix over Q.
struct GramForm {
    std::size_t n;
    Mat<Rational> entries;

    GramForm(std::size_t dim, Mat<Rational> g) : n(dim), entries(std::move(g)) {
        if (n == 0 || entries.rows != n || entries.cols != n)
            throw InvalidFormError("Gram matrix has wrong shape");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (entries(i, j) != entries(j, i))
                    throw InvalidFormError("Gram matrix not symmetric");
        if (determinant() == 0) throw InvalidFormError("degenerate form");
    }

    Rational determinant() const {
        Mat<Rational> m = entries;
        Rational det = 1;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = k;
            while (p < n && m(p, k) == 0) ++p;
            if (p == n) return Rational(0);
            if (p != k) {
                for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(k, j));
                det = -det;
            }
            det *= m(k, k);
            for (std::size_t i = k + 1; i < n; ++i) {
                Rational f = m(i, k) / m(k, k);
                for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
            }
        }
        return det;
    }
};

/// Diagonal form sum d_i X_i^2, all d_i nonzero. When obtained from a
/// GramForm G, change_of_basis B satisfies B^T G B = diag(d) exactly.
struct DiagonalForm {
    std::size_t n;
    std::vector<Rational> d;
    std::optional<Mat<Rational>> change_of_basis;

    explicit DiagonalForm(std::vector<Rational> coeffs,
                          std::optional<Mat<Rational>> basis = std::nullopt)
        : n(coeffs.size()), d(std::move(coeffs)), change_of_basis(std::move(basis)) {
        if (n == 0) throw InvalidFormError("empty diagonal form");
        for (const auto& di : d)
            if (di == 0) throw InvalidFormError("degenerate form: zero diagonal coefficient");
    }

    bool operator==(const DiagonalForm& o) const { return d == o.d; }
};

/// (negative count, positive count).
inline std::pair<std::size_t, std::size_t> signature(const DiagonalForm& f) {
    std::size_t neg = 0, pos = 0;
    for (const auto& di : f.d) (di < 0 ? neg : pos)++;
    return {neg, pos};
}

/// Congruence-diagonalizes G by symmetric elimination over Q; the output
/// coefficients are ordered negatives first (by magnitude, then index).
inline DiagonalForm diagonalize(const GramForm& g) {
    const std::size_t n = g.n;
    Mat<Rational> m = g.entries;
    Mat<Rational> b(n, n);
    for (std::size_t i = 0; i < n; ++i) b(i, i) = 1;

    auto add_col = [&](Mat<Rational>& mat, std::size_t dst, std::size_t src, const Rational& f) {
        for (std::size_t i = 0; i < mat.rows; ++i) mat(i, dst) += f * mat(i, src);
    };
    auto add_row = [&](Mat<Rational>& mat, std::size_t dst, std::size_t src, const Rational& f) {
        for (std::size_t j = 0; j < mat.cols; ++j) mat(dst, j) += f * mat(src, j);
    };

    for (std::size_t k = 0; k < n; ++k) {
        if (m(k, k) == 0) {
            // First column with nonzero coupling; push it into the pivot.
            std::size_t j = k + 1;
            while (j < n && m(k, j) == 0) ++j;
            if (j == n) throw InvalidFormError("degenerate form");
            Rational f = (m(j, j) + 2 * m(k, j) != 0) ? Rational(1) : Rational(-1);
            add_col(m, k, j, f);
            add_row(m, k, j, f);
            add_col(b, k, j, f);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            if (m(i, k) == 0) continue;
            Rational f = -m(i, k) / m(k, k);
            add_col(m, i, k, f);
            add_row(m, i, k, f);
            add_col(b, i, k, f);
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        bool ni = m(i, i) < 0, nj = m(j, j) < 0;
        if (ni != nj) return ni;
        Rational ai = boost::multiprecision::abs(m(i, i));
        Rational aj = boost::multiprecision::abs(m(j, j));
        if (ai != aj) return ai < aj;
        return i < j;
    });

    std::vector<Rational> diag(n);
    Mat<Rational> bp(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        diag[c] = m(order[c], order[c]);
        for (std::size_t r = 0; r < n; ++r) bp(r, c) = b(r, order[c]);
    }
    return DiagonalForm(std::move(diag), std::move(bp));
}

inline std::pair<std::size_t, std::size_t> signature(const GramForm& f) {
    return signature(diagonalize(f));
}

/// Rescales each basis vector so d_i becomes its squarefree integer part.
/// The Clifford/Brauer classification only depends on the d_i up to squares.
inline DiagonalForm squarefree_scale(const DiagonalForm& f) {
    std::vector<Rational> d(f.n);
    std::optional<Mat<Rational>> b = f.change_of_basis;
    for (std::size_t i = 0; i < f.n; ++i) {
        Integer sf = square_class(f.d[i]);
        d[i] = Rational(sf);
        if (b) {
            // d_i = sf * c^2 with c = m/q; scale column i by 1/c.
            Rational c2 = f.d[i] / Rational(sf);
            Integer m = boost::multiprecision::sqrt(num(c2));
            Rational c(m, boost::multiprecision::sqrt(den(c2)));
            for (std::size_t r = 0; r < f.n; ++r) (*b)(r, i) /= c;
        }
    }
    return DiagonalForm(std::move(d), std::move(b));
}

}  // namespace ks

#endif
