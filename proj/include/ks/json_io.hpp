#ifndef KS_JSON_IO_HPP
#define KS_JSON_IO_HPP

#include <json.hpp>

#include <memory>
#include <string>

#include "ks/brauer.hpp"
#include "ks/clifford.hpp"
#include "ks/hodge.hpp"
#include "ks/kugasatake.hpp"
#include "ks/qform.hpp"

namespace ks {

using Json = nlohmann::ordered_json;

inline Rational rational_from_json(const Json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    throw ParseError("expected a rational as \"p/q\" string or integer");
}

/// Accepts {"diag":[...]} or {"gram":[[...]]}; Gram input is diagonalized.
inline DiagonalForm form_from_json(const Json& j) {
    if (j.contains("diag")) {
        std::vector<Rational> d;
        for (const auto& e : j.at("diag")) d.push_back(rational_from_json(e));
        return DiagonalForm(std::move(d));
    }
    if (j.contains("gram")) {
        const auto& rows = j.at("gram");
        std::size_t n = rows.size();
        Mat<Rational> g(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            if (rows[i].size() != n) throw ParseError("gram matrix is not square");
            for (std::size_t k = 0; k < n; ++k) g(i, k) = rational_from_json(rows[i][k]);
        }
        return diagonalize(GramForm(n, std::move(g)));
    }
    throw ParseError("form needs a \"diag\" or \"gram\" key");
}

inline Json form_to_json(const DiagonalForm& f) {
    Json d = Json::array();
    for (const auto& di : f.d) d.push_back(to_string(di));
    return Json{{"diag", d}};
}

/// Debug serialization of a Clifford element: {"mask-bits": coefficient}.
inline Json clifford_to_json(const CliffordElement<Rational>& x) {
    Json j = Json::object();
    for (const auto& [a, c] : x.coeffs) j[std::to_string(a)] = to_string(c);
    return j;
}

inline Json brauer_to_json(const BrauerClass& cls) {
    Json ram = Json::array();
    for (const auto& v : cls.ram) {
        if (v.infinite)
            ram.push_back("inf");
        else
            ram.push_back(v.p.convert_to<long long>());
    }
    return Json{{"ram", ram}};
}

inline Json structure_to_json(const AlgebraStructure& s) {
    Json j;
    j["matrix_size"] = s.matrix_size.convert_to<long long>();
    j["center"] = s.center_str();
    j["quaternion"] = brauer_to_json(s.quaternion_class);
    j["split"] = s.is_split;
    j["assumes_generic"] = true;
    return j;
}

inline Json factors_to_json(const std::vector<IsogenyFactor>& factors) {
    Json arr = Json::array();
    for (const auto& f : factors)
        arr.push_back(Json{{"factor", f.description},
                           {"multiplicity", f.multiplicity.convert_to<long long>()},
                           {"dimension", f.dimension.convert_to<long long>()},
                           {"endomorphisms", f.endomorphisms}});
    return arr;
}

inline Json checks_to_json(const std::vector<CheckResult>& checks) {
    Json arr = Json::array();
    for (const auto& c : checks)
        arr.push_back(Json{{"check", c.name},
                           {"max_deviation", c.deviation},
                           {"tolerance", c.tolerance},
                           {"pass", c.pass}});
    return arr;
}

inline Json report_to_json(const KugaSatakeReport& rep) {
    Json j;
    j["n"] = rep.n;
    j["ks_dim"] = rep.ks_dim.convert_to<long long>();
    j["structure"] = structure_to_json(rep.structure);
    j["factors"] = factors_to_json(rep.factors);
    Json pm = Json::array();
    for (Eigen::Index i = 0; i < rep.period_matrix.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < rep.period_matrix.cols(); ++k)
            row.push_back(Json::array(
                {rep.period_matrix(i, k).real(), rep.period_matrix(i, k).imag()}));
        pm.push_back(row);
    }
    j["period_matrix"] = pm;
    Json pol = Json::array();
    for (std::size_t i = 0; i < rep.polarization_matrix.rows; ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < rep.polarization_matrix.cols; ++k)
            row.push_back(rep.polarization_matrix(i, k).convert_to<long long>());
        pol.push_back(row);
    }
    j["polarization_matrix"] = pol;
    j["checks"] = checks_to_json(rep.checks);
    j["assumes_generic"] = rep.assumes_generic;
    return j;
}

}  // namespace ks

#endif
