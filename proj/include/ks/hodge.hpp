#ifndef KS_HODGE_HPP
#define KS_HODGE_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "ks/clifford.hpp"
#include "ks/qform.hpp"

namespace ks {

using Complex = std::complex<double>;

/// Q(x,y) = sum d_i x_i y_i in the diagonal basis (floating).
inline double qdot(const DiagonalForm& form, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    double s = 0;
    for (std::size_t i = 0; i < form.n; ++i)
        s += form.d[i].convert_to<double>() * x[static_cast<Eigen::Index>(i)] *
             y[static_cast<Eigen::Index>(i)];
    return s;
}

struct HodgeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Oriented negative-definite 2-plane in V_R: the weight-two Hodge
/// structure with V^{2,0} = <f1 + i f2>, Q(f1) = Q(f2) = -1, Q(f1,f2) = 0.
struct HodgeStructure2 {
    std::shared_ptr<const DiagonalForm> form;
    Eigen::VectorXd f1, f2;
};

/// Orientation-preserving Gram-Schmidt inside span(v,w), normalized to
/// Q = -1 on both vectors.
inline HodgeStructure2 from_plane(std::shared_ptr<const DiagonalForm> form,
                                  const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
    const auto n = static_cast<Eigen::Index>(form->n);
    if (v.size() != n || w.size() != n) throw UsageError("plane vectors have wrong dimension");
    double qvv = qdot(*form, v, v);
    double qww = qdot(*form, w, w);
    double qvw = qdot(*form, v, w);
    // Negative definiteness of the restricted Gram [[qvv,qvw],[qvw,qww]].
    if (!(qvv < 0) || !(qvv * qww - qvw * qvw > 0))
        throw HodgeError("plane fails (2-) condition");
    Eigen::VectorXd f1 = v / std::sqrt(-qvv);
    Eigen::VectorXd wp = w + qdot(*form, w, f1) * f1;  // Q(f1,f1) = -1
    double qpp = qdot(*form, wp, wp);
    if (!(qpp < 0)) throw HodgeError("plane fails (2-) condition");
    Eigen::VectorXd f2 = wp / std::sqrt(-qpp);
    return {std::move(form), std::move(f1), std::move(f2)};
}

/// Plane span((1,0,a'),(0,1,b')) on the normalized form (-1,-1,1,...,1).
inline HodgeStructure2 from_parameters(std::shared_ptr<const DiagonalForm> form,
                                       const Eigen::VectorXd& ap, const Eigen::VectorXd& bp) {
    const auto n = static_cast<Eigen::Index>(form->n);
    if (ap.size() != n - 2 || bp.size() != n - 2)
        throw UsageError("parameter vectors must have length n-2");
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n), w = Eigen::VectorXd::Zero(n);
    v[0] = 1;
    w[1] = 1;
    v.tail(n - 2) = ap;
    w.tail(n - 2) = bp;
    return from_plane(std::move(form), v, w);
}

/// h(z) on V_R: |z|^2 (rotation on the plane + identity on the
/// complement), with f1 + i f2 an eigenvector of eigenvalue z^2 on the
/// unit circle.
inline Eigen::MatrixXd hodge_action(const HodgeStructure2& hs, Complex z) {
    if (z == Complex(0, 0)) throw UsageError("hodge_action at z = 0");
    const auto n = static_cast<Eigen::Index>(hs.form->n);
    double t2 = std::norm(z);
    double phi = std::arg(z);
    double c = std::cos(2 * phi), s = std::sin(2 * phi);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::VectorXd v = Eigen::VectorXd::Unit(n, j);
        double a = -qdot(*hs.form, v, hs.f1);  // Q(f1,f1) = -1
        double b = -qdot(*hs.form, v, hs.f2);
        Eigen::VectorXd perp = v - a * hs.f1 - b * hs.f2;
        m.col(j) = t2 * ((c * a + s * b) * hs.f1 + (-s * a + c * b) * hs.f2 + perp);
    }
    return m;
}

/// The Weil element J = f1 f2 in C+(Q)_R; grade 2, J^2 = -1.
struct WeilElement {
    CliffordElement<double> J;
};

inline CliffordElement<double> vector_to_clifford(const std::shared_ptr<const DiagonalForm>& form,
                                                  const Eigen::VectorXd& v) {
    CliffordElement<double> e = CliffordElement<double>::zero(form);
    for (Eigen::Index i = 0; i < v.size(); ++i)
        e.accum(Blade(1) << i, v[i]);
    return e;
}

inline Eigen::VectorXd clifford_to_vector(const CliffordElement<double>& x) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(x.form->n));
    for (const auto& [a, c] : x.coeffs) {
        if (grade(a) != 1) throw UsageError("element is not a vector");
        v[std::countr_zero(a)] = c;
    }
    return v;
}

inline WeilElement weil_element(const HodgeStructure2& hs) {
    auto c1 = vector_to_clifford(hs.form, hs.f1);
    auto c2 = vector_to_clifford(hs.form, hs.f2);
    CliffordElement<double> j = even_part(c1 * c2);  // scalar part is Q(f1,f2) ~ 0
    j.coeffs.erase(0);
    CliffordElement<double> jj = j * j;
    double dev = std::abs(jj.coeff(0) + 1.0);
    for (const auto& [a, c] : jj.coeffs)
        if (a != 0) dev = std::max(dev, std::abs(c));
    if (dev > 1e-7) throw std::logic_error("Weil element fails J^2 = -1: normalization bug");
    return {std::move(j)};
}

/// The even Clifford element a - b J representing h_s(a + b i); note
/// h_s(t) = t for real t, the weight-one scaling.
inline CliffordElement<double> hs_element(const HodgeStructure2& hs, const WeilElement& w,
                                          Complex z) {
    return CliffordElement<double>::scalar(hs.form, z.real()) + (-z.imag()) * w.J;
}

/// h_s(z) x = (a - b J) x for z = a + i b; left multiplication.
inline CliffordElement<double> hs_action(const HodgeStructure2& hs, const WeilElement& w,
                                         Complex z, const CliffordElement<double>& x) {
    if (!x.is_even()) throw UsageError("hs_action requires an even element");
    return hs_element(hs, w, z) * x;
}

/// Matrix of h_s(z) on the even-blade basis.
inline Eigen::MatrixXd hs_matrix(const HodgeStructure2& hs, const WeilElement& w, Complex z) {
    auto basis = even_blades(hs.form->n);
    Mat<double> m = left_mult_matrix(hs_element(hs, w, z), basis);
    Eigen::MatrixXd out(static_cast<Eigen::Index>(m.rows), static_cast<Eigen::Index>(m.cols));
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
    return out;
}

struct PolarizationData {
    int sign;                              // alpha = sign * e1 e2
    CliffordElement<Rational> alpha;
    Eigen::MatrixXd gram;                  // E(e^a, e^b) on even blades
    Eigen::MatrixXd weil_gram;             // E(e^a, h_s(i) e^b), symmetric PD
};

namespace detail {

/// E(e^a, e^b) for alpha = e1 e2, exact: identity coefficient of
/// alpha iota(e^a) e^b times 2^(n-1).
inline Eigen::MatrixXd e_gram_base(const DiagonalForm& form) {
    auto basis = even_blades(form.n);
    const auto dim = static_cast<Eigen::Index>(basis.size());
    double tr = std::ldexp(1.0, static_cast<int>(form.n) - 1);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        Blade a = basis[i];
        int k = grade(a);
        int riota = (k * (k - 1) / 2) & 1;
        for (Eigen::Index j = 0; j < dim; ++j) {
            Blade b = basis[j];
            if ((a ^ b) != 3u) continue;  // need iota(e^a) e^b ~ e1 e2 for an identity part
            BladeProduct p1 = blade_product(a, b, form);
            BladeProduct p2 = blade_product(3u, p1.mask, form);
            double v = (p1.scale * p2.scale).convert_to<double>() * p1.sign * p2.sign;
            if (riota) v = -v;
            g(i, j) = tr * v;
        }
    }
    return g;
}

}  // namespace detail

/// Chooses alpha = +/- e1 e2 so that E(x, h_s(i) y) is symmetric positive
/// definite (decided by a Cholesky factorization), and returns the Gram
/// matrices of E on the even-blade basis.
inline PolarizationData polarization_E(const HodgeStructure2& hs, const WeilElement& w) {
    Eigen::MatrixXd g = detail::e_gram_base(*hs.form);
    Eigen::MatrixXd weil = hs_matrix(hs, w, Complex(0, 1));
    for (int sign : {+1, -1}) {
        Eigen::MatrixXd s = static_cast<double>(sign) * (g * weil);
        Eigen::MatrixXd sym = 0.5 * (s + s.transpose());
        if ((s - sym).cwiseAbs().maxCoeff() > 1e-7 * std::max(1.0, sym.cwiseAbs().maxCoeff()))
            continue;
        Eigen::LLT<Eigen::MatrixXd> llt(sym);
        if (llt.info() == Eigen::Success) {
            CliffordElement<Rational> alpha =
                CliffordElement<Rational>::blade(hs.form, 3u, Rational(sign));
            return {sign, std::move(alpha), static_cast<double>(sign) * g, std::move(s)};
        }
    }
    throw std::logic_error("polarization failure: neither sign is positive definite");
}

/// One named numerical check.
struct CheckResult {
    std::string name;
    double deviation;
    double tolerance;
    bool pass;
};

/// CSpin membership and compatibility checks for h_s at sampled z.
inline std::vector<CheckResult> verify_cspin(const HodgeStructure2& hs, const WeilElement& w,
                                             const std::vector<Complex>& samples,
                                             double tol = 1e-9) {
    const std::size_t n = hs.form->n;
    double dev_grade1 = 0, dev_rho = 0, dev_nu = 0;
    for (Complex z : samples) {
        Complex zu = z / std::abs(z);
        CliffordElement<double> g = hs_element(hs, w, zu);
        CliffordElement<double> ginv = inverse(g);
        Eigen::MatrixXd h = hodge_action(hs, z);
        double t2 = std::norm(z);
        for (std::size_t i = 0; i < n; ++i) {
            CliffordElement<double> ei = CliffordElement<double>::blade(hs.form, Blade(1) << i);
            CliffordElement<double> im = g * ei * ginv;
            Eigen::VectorXd col = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
            for (const auto& [a, c] : im.coeffs) {
                if (grade(a) == 1)
                    col[std::countr_zero(a)] = c;
                else
                    dev_grade1 = std::max(dev_grade1, std::abs(c));
            }
            dev_rho = std::max(dev_rho, (t2 * col - h.col(static_cast<Eigen::Index>(i)))
                                            .cwiseAbs()
                                            .maxCoeff());
        }
        auto [nu, scalar] = spinor_norm(hs_element(hs, w, z));
        dev_nu = std::max(dev_nu, std::abs(nu - t2));
        if (!scalar) dev_nu = std::max(dev_nu, 1.0);
    }
    return {
        {"cspin_membership_grade1", dev_grade1, tol, dev_grade1 < tol},
        {"rho_matches_hodge_action", dev_rho, tol, dev_rho < tol},
        {"spinor_norm_is_norm", dev_nu, tol, dev_nu < tol},
    };
}

}  // namespace ks

#endif
