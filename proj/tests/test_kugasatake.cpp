#include <doctest.h>

#include <memory>
#include <random>

#include "ks/kugasatake.hpp"

using namespace ks;

namespace {

std::shared_ptr<const DiagonalForm> mkform(std::vector<long> d) {
    return std::make_shared<const DiagonalForm>(std::vector<Rational>(d.begin(), d.end()));
}

HodgeStructure2 aligned_plane(const std::shared_ptr<const DiagonalForm>& form) {
    const auto n = static_cast<Eigen::Index>(form->n);
    Eigen::VectorXd v = Eigen::VectorXd::Unit(n, 0), w = Eigen::VectorXd::Unit(n, 1);
    return from_plane(form, v, w);
}

}  // namespace

TEST_CASE("ks_report on the split n = 3 form") {
    auto form = mkform({-1, -1, 1});
    auto rep = ks_report(form, aligned_plane(form));
    CHECK(rep.ks_dim == 2);
    CHECK(rep.structure.is_split);
    CHECK(rep.structure.center == CenterKind::Q);
    REQUIRE(rep.factors.size() == 1);
    CHECK(rep.factors[0].multiplicity == 2);
    CHECK(rep.factors[0].dimension == 1);
    CHECK(rep.period_matrix.rows() == 2);
    CHECK(rep.period_matrix.cols() == 4);
    CHECK(rep.assumes_generic);
    for (const auto& c : rep.checks) {
        INFO(c.name, " deviation ", c.deviation);
        CHECK(c.pass);
    }
}

TEST_CASE("ks_report on the n = 6 example form") {
    auto form = mkform({-1, -1, 1, 1, 1, 3});
    auto rep = ks_report(form, aligned_plane(form));
    CHECK(rep.ks_dim == 16);
    CHECK(rep.structure.center == CenterKind::QuadraticField);
    CHECK(rep.structure.discriminant == -3);
    CHECK(rep.structure.matrix_size == 2);
    CHECK(rep.structure.is_split);
    Integer total = 0;
    for (const auto& f : rep.factors) total += f.multiplicity * f.dimension;
    CHECK(total == rep.ks_dim);
    for (const auto& c : rep.checks) {
        INFO(c.name, " deviation ", c.deviation);
        CHECK(c.pass);
    }
}

TEST_CASE("ks_report rejects bad input") {
    CHECK_THROWS_AS(ks_report(mkform({-1, -1}), aligned_plane(mkform({-1, -1}))), UsageError);
    // Signature check fires before any Hodge data is used, so a plane
    // borrowed from a good form suffices to reach it.
    auto wrong = mkform({-1, 1, 1});
    CHECK_THROWS_AS(ks_report(wrong, aligned_plane(mkform({-1, -1, 1}))), InvalidFormError);
}

TEST_CASE("integral polarization is alternating and primitive-ish") {
    auto form = mkform({-2, -3, 5, 7});
    auto rep = ks_report(form, aligned_plane(form));
    const auto dim = rep.polarization_matrix.rows;
    bool any = false;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            CHECK(rep.polarization_matrix(i, j) == -rep.polarization_matrix(j, i));
            if (rep.polarization_matrix(i, j) != 0) any = true;
        }
    CHECK(any);
}

TEST_CASE("period matrix determines a genuine complex structure") {
    auto form = mkform({-1, -2, 3, 1});
    Eigen::VectorXd v(4), w(4);
    v << 1, 0.1, 0.2, 0;
    w << -0.2, 1, 0, 0.15;
    auto plane = from_plane(form, v, w);
    auto rep = ks_report(form, plane);
    const Eigen::Index g = rep.period_matrix.rows();
    // [Pi; conj(Pi)] must be invertible: lattice spans C^g over R.
    Eigen::MatrixXcd big(2 * g, 2 * g);
    big.topRows(g) = rep.period_matrix;
    big.bottomRows(g) = rep.period_matrix.conjugate();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(big);
    CHECK(svd.singularValues().minCoeff() > 1e-8 * svd.singularValues().maxCoeff());
}

TEST_CASE("verify_embedding") {
    std::mt19937 rng(17);
    std::normal_distribution<double> gd;
    for (auto d : {std::vector<long>{-1, -1, 1}, {-2, -1, 3, 5}, {-1, -3, 2, 1, 7}}) {
        auto form = mkform(d);
        const auto n = static_cast<Eigen::Index>(d.size());
        Eigen::VectorXd v = Eigen::VectorXd::Unit(n, 0), w = Eigen::VectorXd::Unit(n, 1);
        for (Eigen::Index i = 0; i < n; ++i) {
            v[i] += 0.05 * gd(rng);
            w[i] += 0.05 * gd(rng);
        }
        auto plane = from_plane(form, v, w);
        std::vector<std::pair<Complex, Eigen::VectorXd>> samples;
        samples.emplace_back(Complex(1, 0), Eigen::VectorXd::Zero(n));  // trivial case
        for (int t = 0; t < 5; ++t) {
            Eigen::VectorXd x(n);
            for (Eigen::Index i = 0; i < n; ++i) x[i] = gd(rng);
            samples.emplace_back(Complex(gd(rng), gd(rng) + 3.0), x);
        }
        CHECK(verify_embedding(plane, samples) < 1e-8);
    }
}
