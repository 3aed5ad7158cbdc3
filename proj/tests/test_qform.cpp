#include <doctest.h>

#include <random>

#include "ks/qform.hpp"

using namespace ks;

namespace {

DiagonalForm diag_form(std::vector<long> d) {
    return DiagonalForm(std::vector<Rational>(d.begin(), d.end()));
}

GramForm gram(std::size_t n, std::vector<long> entries) {
    Mat<Rational> m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = entries[i * n + j];
    return GramForm(n, std::move(m));
}

bool congruence_holds(const GramForm& g, const DiagonalForm& f) {
    REQUIRE(f.change_of_basis.has_value());
    const auto& b = *f.change_of_basis;
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = 0; j < g.n; ++j) {
            Rational v = 0;
            for (std::size_t r = 0; r < g.n; ++r)
                for (std::size_t c = 0; c < g.n; ++c) v += b(r, i) * g.entries(r, c) * b(c, j);
            if (i == j ? v != f.d[i] : v != 0) return false;
        }
    return true;
}

}  // namespace

TEST_CASE("signature counts signs of diagonal coefficients") {
    CHECK(signature(diag_form({-1, -1, 1, 1, 1, 3})) == std::pair<std::size_t, std::size_t>{2, 4});
    CHECK(signature(gram(4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1})) ==
          std::pair<std::size_t, std::size_t>{0, 4});
    // Hyperbolic plane.
    CHECK(signature(gram(2, {0, 1, 1, 0})) == std::pair<std::size_t, std::size_t>{1, 1});
}

TEST_CASE("diagonalize: already diagonal input") {
    auto f = diagonalize(gram(3, {-1, 0, 0, 0, -1, 0, 0, 0, 3}));
    CHECK(f.d == std::vector<Rational>{-1, -1, 3});
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK((*f.change_of_basis)(i, j) == (i == j ? 1 : 0));
}

TEST_CASE("diagonalize: hyperbolic plane needs the zero-pivot fix") {
    auto g = gram(2, {0, 1, 1, 0});
    auto f = diagonalize(g);
    CHECK(f.d[0] * f.d[1] < 0);
    CHECK(congruence_holds(g, f));
}

TEST_CASE("diagonalize reorders negatives first") {
    auto f = diagonalize(gram(3, {3, 0, 0, 0, -1, 0, 0, 0, -1}));
    CHECK(f.d == std::vector<Rational>{-1, -1, 3});
}

TEST_CASE("degenerate forms are rejected at construction") {
    CHECK_THROWS_AS(gram(2, {1, 1, 1, 1}), InvalidFormError);
    CHECK_THROWS_AS(DiagonalForm({Rational(1), Rational(0)}), InvalidFormError);
}

TEST_CASE("squarefree_scale") {
    CHECK(squarefree_scale(diag_form({-4, -9, 8})).d == std::vector<Rational>{-1, -1, 2});
    CHECK(squarefree_scale(diag_form({-1, -1, 3})).d == std::vector<Rational>{-1, -1, 3});
    CHECK(squarefree_scale(diag_form({-18, -2, 50})).d == std::vector<Rational>{-2, -2, 2});

    // Rational coefficients reduce to the integer square class.
    DiagonalForm f({Rational(1, 2), Rational(-27, 4)});
    CHECK(squarefree_scale(f).d == std::vector<Rational>{2, -3});
}

TEST_CASE("squarefree_scale keeps the congruence identity") {
    auto g = gram(2, {0, 3, 3, 0});
    auto f = squarefree_scale(diagonalize(g));
    CHECK(congruence_holds(g, f));
}

TEST_CASE("random symmetric forms: exact congruence and stable signature") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> entry(-4, 4);
    int built = 0;
    while (built < 40) {
        std::size_t n = 2 + rng() % 7;  // up to 8
        Mat<Rational> m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = entry(rng);
        try {
            GramForm g(n, std::move(m));
            auto f = diagonalize(g);
            CHECK(congruence_holds(g, f));
            CHECK(signature(f) == signature(g));
            CHECK(signature(squarefree_scale(f)) == signature(f));
            ++built;
        } catch (const InvalidFormError&) {
            // degenerate draw; try again
        }
    }
}
