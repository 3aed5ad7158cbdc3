#ifndef KS_SELFTEST_HPP
#define KS_SELFTEST_HPP

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ks/brauer.hpp"
#include "ks/clifford.hpp"
#include "ks/hodge.hpp"
#include "ks/kugasatake.hpp"
#include "ks/qform.hpp"

namespace ks {

struct RunConfig {
    double tolerance = 1e-9;
    long witness_height = 50;
    std::size_t oracle_bound = 6;
    unsigned seed = 12345;

    void validate() const {
        if (!(tolerance > 0)) throw UsageError("tolerance must be positive");
        if (witness_height < 1) throw UsageError("witness height must be >= 1");
    }
};

struct CriterionResult {
    int id;
    std::string name;
    bool pass;
    std::string detail;
    double seconds;
};

namespace selftest {

inline std::shared_ptr<const DiagonalForm> make_form(std::vector<long> d) {
    std::vector<Rational> r(d.begin(), d.end());
    return std::make_shared<const DiagonalForm>(std::move(r));
}

inline std::shared_ptr<const DiagonalForm> random_hodge_form(std::size_t n, std::mt19937& rng) {
    std::uniform_int_distribution<long> negc(1, 3), posc(1, 3);
    std::vector<long> d(n);
    d[0] = -negc(rng);
    d[1] = -negc(rng);
    for (std::size_t i = 2; i < n; ++i) d[i] = posc(rng);
    return make_form(std::move(d));
}

inline HodgeStructure2 random_plane(const std::shared_ptr<const DiagonalForm>& form,
                                    std::mt19937& rng, double spread = 0.25) {
    const auto n = static_cast<Eigen::Index>(form->n);
    std::uniform_real_distribution<double> u(-spread, spread);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n), w = Eigen::VectorXd::Zero(n);
    v[0] = 1;
    w[1] = 1;
    for (Eigen::Index i = 2; i < n; ++i) {
        v[i] = u(rng);
        w[i] = u(rng);
    }
    return from_plane(form, v, w);
}

inline CliffordElement<double> random_even_element(const std::shared_ptr<const DiagonalForm>& form,
                                                   std::mt19937& rng, int terms = 4) {
    auto blades = even_blades(form->n);
    std::uniform_int_distribution<std::size_t> pick(0, blades.size() - 1);
    std::uniform_real_distribution<double> u(-1, 1);
    CliffordElement<double> x = CliffordElement<double>::zero(form);
    for (int t = 0; t < terms; ++t) x.accum(blades[pick(rng)], u(rng));
    return x;
}

// --- criterion 1: trace lemma ------------------------------------------

inline CriterionResult criterion_trace_lemma(const RunConfig& cfg) {
    std::mt19937 rng(cfg.seed + 1);
    std::uniform_int_distribution<long> coeff(1, 3);
    std::uniform_int_distribution<int> sign(0, 1);
    std::ostringstream detail;
    bool ok = true;
    for (std::size_t n = 1; n <= 8 && ok; ++n) {
        for (int rep = 0; rep < 4 && ok; ++rep) {
            std::vector<long> d(n);
            for (auto& di : d) di = (sign(rng) ? 1 : -1) * coeff(rng);
            auto form = make_form(d);
            Rational lead(Integer(1) << (n - 1));
            for (Blade a = 0; a < (Blade(1) << n) && ok; ++a) {
                for (Blade b = 0; b < (Blade(1) << n) && ok; ++b) {
                    if (blade_even(a) != blade_even(b)) continue;  // iota(e^a) e^b must be even
                    auto ea = CliffordElement<Rational>::blade(form, a);
                    auto eb = CliffordElement<Rational>::blade(form, b);
                    Rational tr = trace(reversal(ea) * eb);
                    Rational expect = 0;
                    if (a == b) {
                        expect = lead;
                        for (std::size_t i = 0; i < n; ++i)
                            if (a & (Blade(1) << i)) expect *= form->d[i];
                    }
                    if (tr != expect) {
                        ok = false;
                        detail << "mismatch at n=" << n << " a=" << a << " b=" << b;
                    }
                }
            }
        }
    }
    if (ok) detail << "Tr(iota(e^a) e^b) exact for sampled forms, n <= 8";
    return {1, "trace lemma reproduction", ok, detail.str(), 0};
}

// --- criterion 2: classification goldens -------------------------------

inline CriterionResult criterion_classification_goldens(const RunConfig&) {
    std::ostringstream detail;
    bool ok = true;
    auto check = [&](std::vector<long> d, CenterKind center, long msize, bool split,
                     const Integer& disc, const std::string& label) {
        AlgebraStructure s = even_clifford_structure(*make_form(std::move(d)));
        bool good = s.center == center && s.matrix_size == msize && s.is_split == split &&
                    (center != CenterKind::QuadraticField || s.discriminant == disc);
        if (!good) {
            ok = false;
            detail << label << " misclassified as " << s.center_str() << " k="
                   << s.matrix_size.str() << (s.is_split ? " split; " : " division; ");
        }
    };
    check({-1, -1, 1}, CenterKind::Q, 1, true, 1, "(-1,-1,1)");
    for (long d : {3L, 7L, 11L})
        check({-1, -1, d}, CenterKind::Q, 1, false, 1, "(-1,-1,d)");
    for (long d : {1L, 2L, 3L, 5L})
        check({-1, -1, 1, 1, 1, d}, CenterKind::QuadraticField, 2, true, Integer(-d),
              "(-1,-1,1,1,1,d)");
    if (ok) detail << "M2(Q); division for d in {3,7,11}; M4 over Q(sqrt -d) split";
    return {2, "classification goldens", ok, detail.str(), 0};
}

// --- criterion 3: center oracle equivalence ----------------------------

inline CriterionResult criterion_center_oracle(const RunConfig& cfg) {
    std::ostringstream detail;
    bool ok = true;
    long checked = 0;
    const std::vector<long> mags{1, 2, 3, 5};
    const std::size_t nmax = std::min<std::size_t>(5, cfg.oracle_bound);
    for (std::size_t n = 2; n <= nmax && ok; ++n) {
        std::vector<std::size_t> idx(n, 0);
        // Two negative slots, all magnitude combinations.
        for (std::size_t p1 = 0; p1 < n && ok; ++p1)
            for (std::size_t p2 = p1 + 1; p2 < n && ok; ++p2) {
                std::fill(idx.begin(), idx.end(), 0);
                while (true) {
                    std::vector<long> d(n);
                    for (std::size_t i = 0; i < n; ++i) {
                        d[i] = mags[idx[i]];
                        if (i == p1 || i == p2) d[i] = -d[i];
                    }
                    auto form = make_form(d);
                    AlgebraStructure s = even_clifford_structure(*form);
                    auto basis = center_of_even(form, cfg.oracle_bound);
                    std::size_t want_dim = (n % 2 == 1) ? 1 : 2;
                    if (basis.size() != want_dim) {
                        ok = false;
                        detail << "center dim mismatch at n=" << n;
                        break;
                    }
                    if (n % 2 == 0) {
                        // Nonscalar central element; idempotents exist iff
                        // its square is a rational square.
                        CliffordElement<Rational> w = basis[0];
                        if (detail::nearly_scalar(w)) w = basis[1];
                        w.coeffs.erase(0);
                        CliffordElement<Rational> ww = w * w;
                        if (!detail::nearly_scalar(ww)) {
                            ok = false;
                            detail << "central element square not scalar at n=" << n;
                            break;
                        }
                        bool idem = is_square(ww.coeff(0));
                        bool predicted = s.center == CenterKind::QxQ;
                        if (idem != predicted) {
                            ok = false;
                            detail << "QxQ prediction mismatch at n=" << n << " d=(";
                            for (auto x : d) detail << x << ",";
                            detail << ")";
                            break;
                        }
                    } else if (s.center != CenterKind::Q && s.quaternion_present) {
                        ok = false;
                        detail << "odd-n center not Q";
                        break;
                    }
                    ++checked;
                    // Next magnitude tuple.
                    std::size_t k = 0;
                    while (k < n && ++idx[k] == mags.size()) idx[k++] = 0;
                    if (k == n) break;
                }
            }
    }
    if (ok) detail << checked << " forms: center dimension and QxQ test agree with oracle";
    return {3, "center oracle equivalence", ok, detail.str(), 0};
}

// --- criterion 4: Hilbert product formula ------------------------------

inline CriterionResult criterion_hilbert_product(const RunConfig& cfg) {
    std::mt19937 rng(cfg.seed + 4);
    std::uniform_int_distribution<long> pick(-40, 40);
    std::ostringstream detail;
    bool ok = true;
    for (int t = 0; t < 500 && ok; ++t) {
        long a = pick(rng), b = pick(rng);
        if (a == 0 || b == 0) { --t; continue; }
        QuaternionSymbol sym{Integer(a), Integer(b)};
        int prod = hilbert_symbol(Rational(sym.a), Rational(sym.b), Place::infinity());
        std::set<Integer> primes{2};
        for (const auto& q : prime_factors(sym.a * sym.b)) primes.insert(q);
        for (const auto& q : primes)
            prod *= hilbert_symbol(Rational(sym.a), Rational(sym.b), Place::prime(q));
        if (prod != 1) {
            ok = false;
            detail << "product formula fails for (" << a << "," << b << ")";
        }
        if (ramification(sym).ram.size() % 2 != 0) {
            ok = false;
            detail << "odd ramification for (" << a << "," << b << ")";
        }
    }
    if (ok) detail << "500 pairs: product of local symbols = +1, |ram| even";
    return {4, "Hilbert product formula", ok, detail.str(), 0};
}

// --- criterion 5: Hodge verification sweep -----------------------------

inline CriterionResult criterion_hodge_sweep(const RunConfig& cfg) {
    std::mt19937 rng(cfg.seed + 5);
    std::uniform_real_distribution<double> uphase(0, 2 * M_PI);
    std::uniform_real_distribution<double> umod(0.7, 1.4);
    std::ostringstream detail;
    bool ok = true;
    double worst_j = 0, worst_riemann = 0, worst_sym = 0, worst_cspin = 0, worst_rho = 0;
    for (std::size_t n = 3; n <= 8 && ok; ++n) {
        for (int rep = 0; rep < 20 && ok; ++rep) {
            auto form = random_hodge_form(n, rng);
            HodgeStructure2 hs = random_plane(form, rng);
            WeilElement w = weil_element(hs);

            CliffordElement<double> jj = w.J * w.J;
            double jdev = std::abs(jj.coeff(0) + 1.0);
            for (const auto& [a, c] : jj.coeffs)
                if (a != 0) jdev = std::max(jdev, std::abs(c));
            worst_j = std::max(worst_j, jdev);
            if (jdev >= cfg.tolerance) { ok = false; detail << "J^2 != -1 at n=" << n; break; }

            PolarizationData pol = [&]() -> PolarizationData {
                return polarization_E(hs, w);  // throws on sign-selection failure
            }();

            double scale = pol.weil_gram.cwiseAbs().maxCoeff();
            double symdev =
                (pol.weil_gram - pol.weil_gram.transpose()).cwiseAbs().maxCoeff() / scale;
            worst_sym = std::max(worst_sym, symdev);
            if (symdev >= cfg.tolerance) { ok = false; detail << "E(.,Wy) asymmetric"; break; }

            auto blades = even_blades(n);
            auto coords = [&](const CliffordElement<double>& x) {
                Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(blades.size()));
                for (std::size_t i = 0; i < blades.size(); ++i) v[i] = x.coeff(blades[i]);
                return v;
            };
            double escale = pol.gram.cwiseAbs().maxCoeff();
            for (int t = 0; t < 10; ++t) {
                Complex z = std::polar(umod(rng), uphase(rng));
                auto x = random_even_element(form, rng);
                auto y = random_even_element(form, rng);
                double lhs = coords(hs_action(hs, w, z, x)).dot(pol.gram * coords(hs_action(hs, w, z, y)));
                double rhs = std::norm(z) * coords(x).dot(pol.gram * coords(y));
                double dev = std::abs(lhs - rhs) / escale;
                worst_riemann = std::max(worst_riemann, dev);
                if (dev >= 1e-8) { ok = false; detail << "Riemann relation fails"; break; }
            }
            if (!ok) break;

            std::vector<Complex> samples;
            for (int t = 0; t < 6; ++t) samples.push_back(std::polar(1.0, uphase(rng)));
            samples.push_back(std::polar(umod(rng), uphase(rng)));
            auto checks = verify_cspin(hs, w, samples, cfg.tolerance);
            for (const auto& c : checks) {
                if (c.name == "cspin_membership_grade1") worst_cspin = std::max(worst_cspin, c.deviation);
                if (c.name == "rho_matches_hodge_action") worst_rho = std::max(worst_rho, c.deviation);
                if (!c.pass) { ok = false; detail << c.name << " fails at n=" << n; }
            }
        }
    }
    if (ok)
        detail << "max dev: J^2 " << worst_j << ", Riemann " << worst_riemann << ", sym "
               << worst_sym << ", cspin " << worst_cspin << ", rho " << worst_rho;
    return {5, "Hodge verification sweep", ok, detail.str(), 0};
}

// --- criterion 6: aligned-plane closed form ----------------------------

inline CriterionResult criterion_aligned_closed_form(const RunConfig& cfg) {
    std::mt19937 rng(cfg.seed + 6);
    std::uniform_int_distribution<long> negc(1, 4), posc(1, 3);
    std::ostringstream detail;
    bool ok = true;
    double worst = 0;
    bool exact_covered = false;
    for (std::size_t n = 3; n <= 8 && ok; ++n) {
        for (int rep = 0; rep < 3 && ok; ++rep) {
            std::vector<long> d(n);
            d[0] = -negc(rng);
            d[1] = (rep == 0) ? d[0] : -negc(rng);  // rep 0: d1 d2 a perfect square
            for (std::size_t i = 2; i < n; ++i) d[i] = posc(rng);
            auto form = make_form(d);
            const auto dim = static_cast<Eigen::Index>(std::size_t(1) << (n - 1));
            Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
            Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
            v[0] = 1;
            u[1] = 1;
            HodgeStructure2 hs = from_plane(form, v, u);
            WeilElement w = weil_element(hs);
            PolarizationData pol = polarization_E(hs, w);

            auto blades = even_blades(n);
            double c = 1.0 / std::sqrt(double(d[0]) * double(d[1]));
            double scale = 0;
            Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(dim, dim);
            for (Eigen::Index i = 0; i < dim; ++i) {
                Blade a = blades[static_cast<std::size_t>(i)];
                double e = std::ldexp(1.0, static_cast<int>(n) - 1) * c * d[0] * d[1];
                int a12 = static_cast<int>(a & 1u) + static_cast<int>((a >> 1) & 1u);
                if (a12 & 1) e = -e;
                for (std::size_t k = 0; k < n; ++k)
                    if (a & (Blade(1) << k)) e *= double(d[k]);
                expect(i, i) = e;
                scale = std::max(scale, std::abs(e));
            }
            double dev = (pol.weil_gram - expect).cwiseAbs().maxCoeff() / scale;
            worst = std::max(worst, dev);
            if (dev >= cfg.tolerance) {
                ok = false;
                detail << "closed form mismatch at n=" << n;
            }

            // Exact route when d1 d2 is a perfect square: J is rational.
            Integer d1d2 = Integer(d[0]) * Integer(d[1]);
            if (ok && is_perfect_square(d1d2)) {
                exact_covered = true;
                Rational cr(1, boost::multiprecision::sqrt(d1d2));
                auto alpha = CliffordElement<Rational>::blade(form, 3u, Rational(pol.sign));
                auto jr = CliffordElement<Rational>::blade(form, 3u, cr);
                for (std::size_t i = 0; i < blades.size() && ok; ++i)
                    for (std::size_t j = 0; j < blades.size() && ok; ++j) {
                        auto ea = CliffordElement<Rational>::blade(form, blades[i]);
                        auto eb = CliffordElement<Rational>::blade(form, blades[j]);
                        Rational val = bilinear_E(alpha, ea, -(jr * eb));
                        Rational want = 0;
                        if (i == j) {
                            want = Rational(Integer(1) << (n - 1)) * cr * d[0] * d[1];
                            Blade a = blades[i];
                            if ((static_cast<int>(a & 1u) + static_cast<int>((a >> 1) & 1u)) & 1)
                                want = -want;
                            for (std::size_t k = 0; k < n; ++k)
                                if (a & (Blade(1) << k)) want *= Rational(d[k]);
                        }
                        if (val != want) {
                            ok = false;
                            detail << "exact closed form mismatch at n=" << n;
                        }
                    }
            }
        }
    }
    if (ok)
        detail << "diagonal formula matches, max rel dev " << worst
               << (exact_covered ? "; exact route verified" : "");
    return {6, "aligned-plane closed form", ok, detail.str(), 0};
}

// --- criterion 7: Kuga-Satake reports ----------------------------------

inline CriterionResult criterion_ks_reports(const RunConfig& cfg) {
    std::mt19937 rng(cfg.seed + 7);
    std::ostringstream detail;
    bool ok = true;

    auto run = [&](std::vector<long> d) {
        auto form = make_form(std::move(d));
        HodgeStructure2 hs = random_plane(form, rng, 0.15);
        return ks_report(form, hs, cfg.tolerance);
    };

    auto rep3 = run({-1, -1, 1});
    if (!(rep3.ks_dim == 2 && rep3.factors.size() == 1 && rep3.factors[0].multiplicity == 2 &&
          rep3.factors[0].dimension == 1 &&
          rep3.factors[0].description.find("elliptic curve") != std::string::npos)) {
        ok = false;
        detail << "n=3 split form is not two isogenous elliptic curves; ";
    }
    auto rep3d = run({-1, -1, 3});
    if (!(rep3d.factors.size() == 1 && rep3d.factors[0].multiplicity == 1 &&
          rep3d.factors[0].dimension == 2 &&
          rep3d.factors[0].description.find("simple abelian surface") != std::string::npos)) {
        ok = false;
        detail << "n=3 d=3 is not a simple abelian surface; ";
    }
    auto rep6 = run({-1, -1, 1, 1, 1, 3});
    if (!(rep6.ks_dim == 16 && rep6.factors.size() == 1 && rep6.factors[0].multiplicity == 4 &&
          rep6.factors[0].dimension == 4 &&
          rep6.factors[0].endomorphisms.find("sqrt -3") != std::string::npos)) {
        ok = false;
        detail << "n=6 Lombardo form is not A^4 with dim A = 4 over Q(sqrt -3); ";
    }

    for (const auto* rep : {&rep3, &rep3d, &rep6}) {
        if (rep->ks_dim != (Integer(1) << (rep->n - 2))) { ok = false; detail << "ks_dim; "; }
        Integer total = 0;
        for (const auto& f : rep->factors) total += f.multiplicity * f.dimension;
        if (total != rep->ks_dim) { ok = false; detail << "factor dimension sum; "; }
        for (const auto& c : rep->checks) {
            double lim = c.tolerance > 0 ? 1e-8 : 0.5;
            if (!(c.pass && c.deviation < lim)) {
                ok = false;
                detail << "Riemann check " << c.name << "; ";
            }
        }
    }
    if (ok) detail << "goldens and Riemann residuals pass for n = 3, 3(d=3), 6";
    return {7, "Kuga-Satake reports", ok, detail.str(), 0};
}

// --- criterion 8: embedding equivariance -------------------------------

inline CriterionResult criterion_embedding(const RunConfig& cfg) {
    std::mt19937 rng(cfg.seed + 8);
    std::uniform_real_distribution<double> uphase(0, 2 * M_PI);
    std::uniform_real_distribution<double> uc(-1, 1);
    std::ostringstream detail;
    bool ok = true;
    double worst = 0;
    for (std::size_t n = 3; n <= 6 && ok; ++n) {
        for (int t = 0; t < 10 && ok; ++t) {
            auto form = random_hodge_form(n, rng);
            HodgeStructure2 hs = random_plane(form, rng);
            Eigen::VectorXd v(static_cast<Eigen::Index>(n));
            for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = uc(rng);
            Complex z = std::polar(1.0, uphase(rng));
            double dev = verify_embedding(hs, {{z, v}});
            worst = std::max(worst, dev);
            if (dev >= cfg.tolerance) {
                ok = false;
                detail << "equivariance residual " << dev << " at n=" << n;
            }
        }
    }
    if (ok) detail << "max residual " << worst;
    return {8, "embedding equivariance", ok, detail.str(), 0};
}

}  // namespace selftest

inline std::vector<CriterionResult> run_selftest(const RunConfig& cfg) {
    cfg.validate();
    using Fn = CriterionResult (*)(const RunConfig&);
    const Fn criteria[] = {
        selftest::criterion_trace_lemma,      selftest::criterion_classification_goldens,
        selftest::criterion_center_oracle,    selftest::criterion_hilbert_product,
        selftest::criterion_hodge_sweep,      selftest::criterion_aligned_closed_form,
        selftest::criterion_ks_reports,       selftest::criterion_embedding,
    };
    std::vector<CriterionResult> out;
    for (Fn fn : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        CriterionResult r = [&]() {
            try {
                return fn(cfg);
            } catch (const std::exception& e) {
                return CriterionResult{0, "criterion threw", false, e.what(), 0};
            }
        }();
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace ks

#endif
