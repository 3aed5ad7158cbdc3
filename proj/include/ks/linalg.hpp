#ifndef KS_LINALG_HPP
#define KS_LINALG_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <type_traits>
#include <vector>

#include "ks/rational.hpp"

namespace ks {

/// Minimal dense row-major matrix; used for exact solves over Q and
/// small floating systems that do not warrant Eigen.
template <class S>
struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<S> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, S(0)) {}

    S& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const S& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

namespace detail {

template <class S>
bool pivot_ok(const S& x) {
    if constexpr (std::is_floating_point_v<S>)
        return std::abs(x) > 1e-13;
    else
        return x != S(0);
}

template <class S>
std::size_t pick_pivot(const Mat<S>& m, std::size_t col, std::size_t from) {
    if constexpr (std::is_floating_point_v<S>) {
        std::size_t best = from;
        S bv = std::abs(m(from, col));
        for (std::size_t i = from + 1; i < m.rows; ++i)
            if (std::abs(m(i, col)) > bv) { bv = std::abs(m(i, col)); best = i; }
        return best;
    } else {
        for (std::size_t i = from; i < m.rows; ++i)
            if (m(i, col) != S(0)) return i;
        return from;
    }
}

}  // namespace detail

/// Reduced row echelon form in place; returns pivot columns.
template <class S>
std::vector<std::size_t> rref(Mat<S>& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
        std::size_t p = detail::pick_pivot(m, col, row);
        if (!detail::pivot_ok(m(p, col))) continue;
        if (p != row)
            for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(p, j), m(row, j));
        S inv = S(1) / m(row, col);
        for (std::size_t j = col; j < m.cols; ++j) m(row, j) *= inv;
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == row) continue;
            S f = m(i, col);
            if (f == S(0)) continue;
            for (std::size_t j = col; j < m.cols; ++j) m(i, j) -= f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

/// Basis of the right nullspace of m.
template <class S>
std::vector<std::vector<S>> nullspace(Mat<S> m) {
    auto pivots = rref(m);
    std::vector<bool> is_pivot(m.cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<S>> basis;
    for (std::size_t free = 0; free < m.cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<S> v(m.cols, S(0));
        v[free] = S(1);
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Solves m x = b; empty optional when the system is singular/inconsistent.
template <class S>
std::optional<std::vector<S>> solve(Mat<S> m, const std::vector<S>& b) {
    const std::size_t n = m.cols;
    Mat<S> aug(m.rows, n + 1);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n) = b[i];
    }
    auto pivots = rref(aug);
    std::vector<S> x(n, S(0));
    std::size_t row = 0;
    for (auto c : pivots) {
        if (c == n) return std::nullopt;  // inconsistent
        x[c] = aug(row, n);
        ++row;
    }
    if (pivots.size() < n) return std::nullopt;  // underdetermined: treat as failure
    return x;
}

}  // namespace ks

#endif
