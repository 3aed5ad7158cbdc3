#ifndef KS_KUGASATAKE_HPP
#define KS_KUGASATAKE_HPP

#include <Eigen/Dense>

#include <complex>
#include <random>
#include <vector>

#include "ks/brauer.hpp"
#include "ks/hodge.hpp"

namespace ks {

/// Kuga-Satake data for (V,Q,h): the weight-one structure (C+(Q), h_s, E)
/// viewed as the torus C+(Q)_R / (blade lattice) with complex structure
/// h_s(i), plus the endomorphism-algebra classification.
struct KugaSatakeReport {
    std::size_t n = 0;
    Integer ks_dim;                       // 2^(n-2)
    AlgebraStructure structure;
    std::vector<IsogenyFactor> factors;
    Eigen::MatrixXcd period_matrix;       // ks_dim x 2^(n-1)
    Mat<Integer> polarization_matrix;     // E on blades, cleared to integers
    std::vector<CheckResult> checks;
    bool assumes_generic = true;
};

namespace detail {

/// Exact E(e^a,e^b) Gram for alpha = sign * e1 e2.
inline Mat<Rational> e_gram_exact(const DiagonalForm& form, int sign) {
    auto basis = even_blades(form.n);
    Mat<Rational> g(basis.size(), basis.size());
    Rational tr(Integer(1) << (form.n - 1));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        Blade a = basis[i];
        int k = grade(a);
        int riota = (k * (k - 1) / 2) & 1;
        for (std::size_t j = 0; j < basis.size(); ++j) {
            Blade b = basis[j];
            if ((a ^ b) != 3u) continue;
            BladeProduct p1 = blade_product(a, b, form);
            BladeProduct p2 = blade_product(3u, p1.mask, form);
            Rational v = tr * p1.scale * p2.scale * (p1.sign * p2.sign * sign);
            if (riota) v = -v;
            g(i, j) = v;
        }
    }
    return g;
}

/// Deterministic complex basis for (C+(Q)_R, W): pairs (u_k, W u_k) chosen
/// greedily over blade indices. Returns the real 2g x 2g basis matrix
/// [u_1..u_g | W u_1..W u_g].
inline Eigen::MatrixXd complex_basis(const Eigen::MatrixXd& weil) {
    const Eigen::Index dim = weil.rows();
    const Eigen::Index g = dim / 2;
    Eigen::MatrixXd basis(dim, dim);
    Eigen::MatrixXd ortho(dim, dim);  // orthonormalized span tracker
    Eigen::Index have = 0;
    for (Eigen::Index j = 0; j < dim && have < g; ++j) {
        Eigen::VectorXd u = Eigen::VectorXd::Unit(dim, j);
        Eigen::VectorXd wu = weil.col(j);
        Eigen::VectorXd ru = u, rwu = wu;
        for (Eigen::Index k = 0; k < 2 * have; ++k) {
            ru -= ortho.col(k).dot(ru) * ortho.col(k);
            rwu -= ortho.col(k).dot(rwu) * ortho.col(k);
        }
        if (ru.norm() < 1e-8) continue;
        ru.normalize();
        rwu -= ru.dot(rwu) * ru;
        if (rwu.norm() < 1e-8) continue;
        rwu.normalize();
        basis.col(have) = u;
        basis.col(g + have) = wu;
        ortho.col(2 * have) = ru;
        ortho.col(2 * have + 1) = rwu;
        ++have;
    }
    if (have != g) throw std::logic_error("complex structure pairing failed");
    return basis;
}

}  // namespace detail

/// Assembles the full report: classification, isogeny factors, period
/// matrix of the blade lattice, integral polarization, Riemann checks.
inline KugaSatakeReport ks_report(const std::shared_ptr<const DiagonalForm>& form,
                                  const HodgeStructure2& plane, double tol = 1e-9) {
    const std::size_t n = form->n;
    if (n < 3) throw UsageError("Kuga-Satake report needs n >= 3");
    auto [neg, pos] = signature(*form);
    if (neg != 2) throw InvalidFormError("form must have signature (2-,(n-2)+)");

    KugaSatakeReport rep;
    rep.n = n;
    rep.ks_dim = Integer(1) << (n - 2);
    rep.structure = even_clifford_structure(*form);
    rep.factors = isogeny_decomposition(rep.structure, n);

    WeilElement w = weil_element(plane);
    PolarizationData pol = polarization_E(plane, w);
    Eigen::MatrixXd weil = hs_matrix(plane, w, Complex(0, 1));
    const Eigen::Index dim = weil.rows();

    // Period matrix: coordinates of the blade-lattice basis in the chosen
    // complex basis of C+(Q)^{1,0}.
    Eigen::MatrixXd basis = detail::complex_basis(weil);
    Eigen::MatrixXd coords = basis.partialPivLu().solve(Eigen::MatrixXd::Identity(dim, dim));
    const Eigen::Index g = dim / 2;
    rep.period_matrix =
        coords.topRows(g).cast<Complex>() + Complex(0, 1) * coords.bottomRows(g).cast<Complex>();

    // Exact polarization on the blade lattice, cleared to integers.
    Mat<Rational> gram = detail::e_gram_exact(*form, pol.sign);
    Integer lcm = 1;
    for (const auto& v : gram.a)
        if (v != 0) lcm = boost::multiprecision::lcm(lcm, den(v));
    rep.polarization_matrix = Mat<Integer>(gram.rows, gram.cols);
    for (std::size_t i = 0; i < gram.rows; ++i)
        for (std::size_t j = 0; j < gram.cols; ++j) {
            Rational v = gram(i, j) * Rational(lcm);
            rep.polarization_matrix(i, j) = num(v);
        }

    // Riemann relation checks.
    bool alternating = true;
    for (std::size_t i = 0; i < gram.rows && alternating; ++i)
        for (std::size_t j = 0; j < gram.cols; ++j)
            if (gram(i, j) != -gram(j, i)) { alternating = false; break; }
    rep.checks.push_back({"polarization_alternating", alternating ? 0.0 : 1.0, 0.0,
                          alternating});

    double inv_dev = (weil.transpose() * pol.gram * weil - pol.gram).cwiseAbs().maxCoeff() /
                     std::max(1.0, pol.gram.cwiseAbs().maxCoeff());
    rep.checks.push_back({"E_weil_invariant", inv_dev, tol, inv_dev < tol});

    Eigen::MatrixXd sym = 0.5 * (pol.weil_gram + pol.weil_gram.transpose());
    Eigen::LLT<Eigen::MatrixXd> llt(sym);
    bool pd = llt.info() == Eigen::Success;
    rep.checks.push_back({"E_weil_positive", pd ? 0.0 : 1.0, 0.0, pd});

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(rep.period_matrix);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > 1e-8 * svd.singularValues()[0]) ++rank;
    bool full = rank == g;
    rep.checks.push_back({"period_matrix_rank", full ? 0.0 : 1.0, 0.0, full});

    return rep;
}

/// Max residual of the intertwining h_s(z) M_v h_s(z)^-1 = M_{rho(h_s(z)) v}
/// over the given (z, v) samples.
inline double verify_embedding(const HodgeStructure2& plane,
                               const std::vector<std::pair<Complex, Eigen::VectorXd>>& samples) {
    WeilElement w = weil_element(plane);
    auto basis = even_blades(plane.form->n);
    double worst = 0;
    for (const auto& [z, vvec] : samples) {
        Complex zu = z / std::abs(z);
        CliffordElement<double> g = hs_element(plane, w, zu);
        CliffordElement<double> v = vector_to_clifford(plane.form, vvec);
        Mat<double> mv = embed_V(v);
        Mat<double> lg = left_mult_matrix(g, basis);
        Mat<double> lginv = left_mult_matrix(inverse(g), basis);
        CliffordElement<double> rv = conjugation_rho(g, v);
        CliffordElement<double> rv1 = CliffordElement<double>::zero(plane.form);
        for (const auto& [a, c] : rv.coeffs)
            if (grade(a) == 1) rv1.set(a, c);  // drop conjugation noise off grade 1
        Mat<double> mrv = embed_V(rv1);
        const auto dim = static_cast<Eigen::Index>(basis.size());
        auto to_eigen = [dim](const Mat<double>& m) {
            Eigen::MatrixXd e(dim, dim);
            for (Eigen::Index i = 0; i < dim; ++i)
                for (Eigen::Index j = 0; j < dim; ++j)
                    e(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            return e;
        };
        double dev = (to_eigen(lg) * to_eigen(mv) * to_eigen(lginv) - to_eigen(mrv))
                         .cwiseAbs()
                         .maxCoeff();
        worst = std::max(worst, dev);
    }
    return worst;
}

}  // namespace ks

#endif
