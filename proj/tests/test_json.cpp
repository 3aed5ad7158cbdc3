#include <doctest.h>

#include "ks/json_io.hpp"

using namespace ks;

TEST_CASE("form_from_json: diag and gram inputs") {
    auto f = form_from_json(Json::parse(R"({"diag": ["-1", "-1", "3/2"]})"));
    CHECK(f.n == 3);
    CHECK(f.d[2] == Rational(3, 2));

    // Gram input is diagonalized with negatives first.
    auto g = form_from_json(Json::parse(R"({"gram": [[0, 1], [1, 0]]})"));
    CHECK(g.n == 2);
    CHECK(g.d[0] < 0);
    CHECK(g.d[1] > 0);

    CHECK_THROWS_AS(form_from_json(Json::parse(R"({"nope": 1})")), ParseError);
    CHECK_THROWS_AS(form_from_json(Json::parse(R"({"gram": [[1, 0]]})")), ParseError);
    CHECK_THROWS_AS(form_from_json(Json::parse(R"({"diag": ["1/0"]})")), ParseError);
    CHECK_THROWS_AS(form_from_json(Json::parse(R"({"diag": [1.5]})")), ParseError);
}

TEST_CASE("rational round trip through JSON") {
    for (const char* s : {"0", "7", "-3/4", "22/7"}) {
        Rational r = rational_from_json(Json(std::string(s)));
        CHECK(parse_rational(to_string(r)) == r);
    }
    CHECK(rational_from_json(Json(5)) == Rational(5));
}

TEST_CASE("classification JSON schema") {
    auto s = even_clifford_structure(
        DiagonalForm({Rational(-1), Rational(-1), Rational(3)}));
    Json j = structure_to_json(s);
    CHECK(j.at("matrix_size") == 1);
    CHECK(j.at("center") == "Q");
    CHECK(j.at("quaternion").at("ram") == Json::parse("[2, 3]"));
    CHECK(j.at("split") == false);
    CHECK(j.at("assumes_generic") == true);

    auto s6 = even_clifford_structure(DiagonalForm(
        {Rational(-1), Rational(-1), Rational(1), Rational(1), Rational(1), Rational(3)}));
    Json j6 = structure_to_json(s6);
    CHECK(j6.at("center") == "Q(sqrt -3)");
    CHECK(j6.at("matrix_size") == 2);
    CHECK(j6.at("split") == true);
}

TEST_CASE("report JSON is complete and deterministic") {
    auto form = std::make_shared<const DiagonalForm>(
        std::vector<Rational>{Rational(-1), Rational(-1), Rational(2), Rational(5)});
    Eigen::VectorXd v(4), w(4);
    v << 1, 0, 0.2, 0;
    w << 0, 1, 0, -0.1;
    auto run = [&] { return report_to_json(ks_report(form, from_plane(form, v, w))).dump(2); };
    std::string a = run(), b = run();
    CHECK(a == b);  // byte-identical across runs

    Json j = Json::parse(a);
    for (const char* key : {"n", "ks_dim", "structure", "factors", "period_matrix",
                            "polarization_matrix", "checks", "assumes_generic"})
        CHECK(j.contains(key));
    CHECK(j.at("period_matrix").size() == 4);
    CHECK(j.at("period_matrix")[0].size() == 8);
    for (const auto& c : j.at("checks")) CHECK(c.at("pass") == true);
}
