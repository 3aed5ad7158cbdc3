#include <doctest.h>

#include <memory>
#include <random>

#include "ks/hodge.hpp"

using namespace ks;

namespace {

std::shared_ptr<const DiagonalForm> mkform(std::vector<long> d) {
    return std::make_shared<const DiagonalForm>(std::vector<Rational>(d.begin(), d.end()));
}

constexpr double kTol = 1e-10;

}  // namespace

TEST_CASE("from_plane normalizes and orients") {
    auto form = mkform({-1, -1, 1});
    Eigen::VectorXd v(3), w(3);
    v << 2, 0, 0;
    w << 1, 1, 0;
    auto hs = from_plane(form, v, w);
    CHECK((hs.f1 - Eigen::Vector3d(1, 0, 0)).norm() < kTol);
    CHECK((hs.f2 - Eigen::Vector3d(0, 1, 0)).norm() < kTol);
    CHECK(qdot(*form, hs.f1, hs.f1) == doctest::Approx(-1));
    CHECK(qdot(*form, hs.f2, hs.f2) == doctest::Approx(-1));
    CHECK(qdot(*form, hs.f1, hs.f2) == doctest::Approx(0));

    Eigen::VectorXd bad(3);
    bad << 0, 0, 1;  // Q(bad) = 1 > 0
    CHECK_THROWS_AS(from_plane(form, bad, w), HodgeError);
    CHECK_THROWS_AS(from_plane(form, v, v), HodgeError);  // degenerate span
}

TEST_CASE("from_parameters spans the expected plane") {
    auto form = mkform({-1, -1, 1, 1});
    Eigen::VectorXd ap(2), bp(2);
    ap << 0.25, 0;
    bp << 0, -0.5;
    auto hs = from_parameters(form, ap, bp);
    // f1 proportional to (1,0,1/4,0), f2 in the span of both generators.
    CHECK(std::abs(hs.f1[1]) < kTol);
    CHECK(hs.f1[2] / hs.f1[0] == doctest::Approx(0.25));
    CHECK_THROWS_AS(from_parameters(form, Eigen::VectorXd::Zero(1), bp), UsageError);
}

TEST_CASE("hodge_action: identity, real scaling, eigenvector") {
    auto form = mkform({-2, -3, 5, 7});
    std::mt19937 rng(7);
    std::normal_distribution<double> g;
    Eigen::VectorXd v(4), w(4);
    v << g(rng), g(rng), 0.1 * g(rng), 0.1 * g(rng);
    w << g(rng), g(rng), 0.1 * g(rng), 0.1 * g(rng);
    auto hs = from_plane(form, v, w);

    CHECK((hodge_action(hs, 1.0) - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-9);
    // Real t acts as t^2 on all of V (weight two).
    CHECK((hodge_action(hs, 1.5) - 2.25 * Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-9);

    Complex z(0.6, 0.8);
    Eigen::MatrixXd h = hodge_action(hs, z);
    Eigen::VectorXcd f = hs.f1.cast<Complex>() + Complex(0, 1) * hs.f2.cast<Complex>();
    CHECK((h.cast<Complex>() * f - z * z * f).norm() < 1e-9);

    // Q is preserved up to |z|^4 (two copies of the weight-two scaling).
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(4, 4);
    for (int i = 0; i < 4; ++i) gram(i, i) = form->d[i].convert_to<double>();
    Complex z2(1.0, -2.0);
    Eigen::MatrixXd h2 = hodge_action(hs, z2);
    double t2 = std::norm(z2);
    CHECK((h2.transpose() * gram * h2 - t2 * t2 * gram).norm() < 1e-7 * t2 * t2);
}

TEST_CASE("Weil element on aligned and generic planes") {
    auto form = mkform({-2, -3, 5});
    Eigen::VectorXd e1 = Eigen::Vector3d(1, 0, 0), e2 = Eigen::Vector3d(0, 1, 0);
    auto hs = from_plane(form, e1, e2);
    auto w = weil_element(hs);
    // Aligned plane: J = c e1 e2 with c = (d1 d2)^{-1/2}.
    CHECK(w.J.coeff(3u) == doctest::Approx(1.0 / std::sqrt(6.0)));
    CHECK(w.J.coeffs.size() == 1);

    // Rotating the frame inside the plane leaves J fixed.
    auto hs2 = from_plane(form, 0.6 * e1 + 0.8 * e2, -0.8 * e1 + 0.6 * e2);
    auto w2 = weil_element(hs2);
    CHECK(std::abs(w2.J.coeff(3u) - w.J.coeff(3u)) < 1e-9);

    // Reversing the orientation negates J.
    auto hs3 = from_plane(form, e2, e1);
    CHECK(std::abs(weil_element(hs3).J.coeff(3u) + w.J.coeff(3u)) < 1e-9);

    // A tilted plane still gives J^2 = -1 (checked inside weil_element).
    auto form4 = mkform({-1, -1, 1, 3});
    Eigen::VectorXd v(4), u(4);
    v << 1, 0, 0.3, -0.2;
    u << 0.1, 1, -0.4, 0.1;
    CHECK_NOTHROW(weil_element(from_plane(form4, v, u)));
}

TEST_CASE("hs_action is a homomorphism with h_s(i) = -J") {
    auto form = mkform({-1, -1, 2, 3});
    Eigen::VectorXd v(4), u(4);
    v << 1, 0.2, 0.1, 0;
    u << -0.3, 1, 0, 0.2;
    auto hs = from_plane(form, v, u);
    auto w = weil_element(hs);

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> ur(-2, 2);
    CliffordElement<double> x = CliffordElement<double>::zero(form);
    for (Blade b : even_blades(4)) x.set(b, ur(rng));

    // i . i = -1.
    auto once = hs_action(hs, w, Complex(0, 1), x);
    auto twice = hs_action(hs, w, Complex(0, 1), once);
    auto neg = (-1.0) * x;
    for (Blade b : even_blades(4)) CHECK(std::abs(twice.coeff(b) - neg.coeff(b)) < 1e-9);

    Complex z1(1.2, -0.7), z2(-0.4, 2.1);
    auto lhs = hs_element(hs, w, z1) * hs_element(hs, w, z2);
    auto rhs = hs_element(hs, w, z1 * z2);
    for (Blade b : even_blades(4)) CHECK(std::abs(lhs.coeff(b) - rhs.coeff(b)) < 1e-9);

    CHECK_THROWS_AS(hs_action(hs, w, Complex(0, 1),
                              CliffordElement<double>::blade(form, 1u)),
                    UsageError);
}

TEST_CASE("polarization: alternating, positive, Riemann relation") {
    for (auto d : {std::vector<long>{-1, -1, 1}, {-2, -3, 5, 7}, {-1, -1, 1, 1, 1, 3}}) {
        auto form = mkform(d);
        const auto n = static_cast<Eigen::Index>(d.size());
        Eigen::VectorXd v = Eigen::VectorXd::Zero(n), u = Eigen::VectorXd::Zero(n);
        v[0] = 1;
        u[1] = 1;
        if (n > 2) { v[2] = 0.2; u[2] = -0.1; }
        auto hs = from_plane(form, v, u);
        auto w = weil_element(hs);
        auto pol = polarization_E(hs, w);

        double scale = pol.gram.cwiseAbs().maxCoeff();
        CHECK((pol.gram + pol.gram.transpose()).cwiseAbs().maxCoeff() < 1e-9 * scale);
        CHECK((pol.weil_gram - pol.weil_gram.transpose()).cwiseAbs().maxCoeff() <
              1e-7 * scale);
        Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (pol.weil_gram + pol.weil_gram.transpose()));
        CHECK(llt.info() == Eigen::Success);

        // E(h_s(z) x, h_s(z) y) = |z|^2 E(x, y).
        Complex z(0.8, -1.1);
        Eigen::MatrixXd h = hs_matrix(hs, w, z);
        CHECK((h.transpose() * pol.gram * h - std::norm(z) * pol.gram).cwiseAbs().maxCoeff() <
              1e-7 * scale);
    }
}

TEST_CASE("aligned polarization is diagonal in the paired basis") {
    // Plane aligned with e1, e2: E(e^a, h_s(i) e^b) is diagonal on even blades.
    auto form = mkform({-1, -1, 2, 3});
    auto hs = from_plane(form, Eigen::Vector4d(1, 0, 0, 0), Eigen::Vector4d(0, 1, 0, 0));
    auto w = weil_element(hs);
    auto pol = polarization_E(hs, w);
    Eigen::MatrixXd off = pol.weil_gram;
    off.diagonal().setZero();
    CHECK(off.cwiseAbs().maxCoeff() < 1e-8 * pol.weil_gram.cwiseAbs().maxCoeff());
    CHECK(pol.weil_gram.diagonal().minCoeff() > 0);
}

TEST_CASE("verify_cspin on sampled planes") {
    std::mt19937 rng(23);
    std::normal_distribution<double> g;
    for (auto d : {std::vector<long>{-1, -1, 1}, {-2, -1, 3, 5}, {-1, -3, 1, 2, 7}}) {
        auto form = mkform(d);
        const auto n = static_cast<Eigen::Index>(d.size());
        // Small tilts of the aligned plane stay negative definite.
        Eigen::VectorXd v = Eigen::VectorXd::Unit(n, 0), u = Eigen::VectorXd::Unit(n, 1);
        for (Eigen::Index i = 0; i < n; ++i) {
            v[i] += 0.05 * g(rng);
            u[i] += 0.05 * g(rng);
        }
        HodgeStructure2 hs = from_plane(form, v, u);
        auto w = weil_element(hs);
        auto checks = verify_cspin(hs, w, {Complex(1, 0), Complex(0, 2), Complex(0.6, 0.8),
                                           Complex(-1.3, 0.4)},
                                   1e-8);
        for (const auto& c : checks) {
            INFO(c.name, " deviation ", c.deviation);
            CHECK(c.pass);
        }
    }
}
