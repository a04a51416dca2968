#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <cstdio>
#include <string>
#include <vector>

#include "weldfactor/json_io.hpp"
#include "weldfactor/svg.hpp"

using namespace weldfactor;

TEST_CASE("complex numbers and sphere points serialize exactly") {
    Complex z(0.1 + 1e-17, -2.5);
    Json j = to_json(z);
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 2);
    CHECK(j[0].get<double>() == z.real());
    CHECK(j[1].get<double>() == z.imag());
    Complex back = complex_from_json(j);
    CHECK(back.real() == z.real());
    CHECK(back.imag() == z.imag());

    CHECK(to_json(PlanePoint::infinity()) == Json("infinity"));
    CHECK(plane_point_from_json(Json("infinity")).is_infinite());
    PlanePoint p = plane_point_from_json(to_json(PlanePoint(z)));
    CHECK(p.value() == z);
}

TEST_CASE("curves, domains, and correspondences round-trip bit-exact") {
    AnalyticCurve c(-2, {Complex(0.03, -0.01), Complex(0.0), Complex(0.4, 0.2),
                         Complex(1.0, 0.0), Complex(0.05, 0.07)},
                    CurveSide::Right);
    AnalyticCurve back = curve_from_json(to_json(c));
    CHECK(back.k_min() == c.k_min());
    CHECK(back.domain_side() == c.domain_side());
    REQUIRE(back.coeffs().size() == c.coeffs().size());
    for (size_t i = 0; i < c.coeffs().size(); ++i) CHECK(back.coeffs()[i] == c.coeffs()[i]);

    DomainSpec d;
    d.curves = {c, AnalyticCurve::circle(Complex(3.0, 0.0), 0.5, CurveSide::Right)};
    d.base_point = PlanePoint::infinity();
    DomainSpec d2 = domain_from_json(to_json(d));
    CHECK(d2.curves.size() == 2);
    CHECK(d2.base_point.is_infinite());
    CHECK(d2.curves[1].coeffs() == d.curves[1].coeffs());

    BoundaryCorrespondence w(-2, {Complex(0.01, 0.02), Complex(0.0), Complex(0.1),
                                  Complex(0.0), Complex(0.01, -0.02)},
                             false);
    BoundaryCorrespondence w2 = correspondence_from_json(to_json(w));
    CHECK(w2.k_min() == w.k_min());
    CHECK(w2.forward() == w.forward());
    CHECK(w2.periodic_coeffs() == w.periodic_coeffs());
}

TEST_CASE("maps round-trip through tagged JSON including compositions") {
    ConformalMap mb(MoebiusMap(Complex(1.0, 0.2), Complex(0.3), Complex(0.0, 0.1), Complex(1.0)));
    ConformalMap ps(PowerSeriesMap({Complex(0.0), Complex(1.0), Complex(0.2, -0.1)}));
    LaurentSeriesMap ls;
    ls.lambda = Complex(1.1, 0.0);
    ls.coeffs = {Complex(0.5), Complex(0.3, 0.1)};
    ConformalMap comp = compose({mb, ConformalMap(ls), ps});

    Json j = to_json(comp);
    ConformalMap back = map_from_json(j);
    for (int k = 0; k < 16; ++k) {
        Complex z = 1.4 * std::polar(1.0, kTwoPi * k / 16);
        Complex a = eval_map(comp, z);
        Complex b = eval_map(back, z);
        CHECK(a.real() == b.real());
        CHECK(a.imag() == b.imag());
    }
    // Serialization itself is deterministic.
    CHECK(to_json(back).dump() == j.dump());
}

TEST_CASE("documents carry schema version and kind") {
    Json doc = make_document("problem", Json::object());
    CHECK(doc["schema_version"].get<int>() == kSchemaVersion);
    CHECK(doc["kind"].get<std::string>() == "problem");
    CHECK_NOTHROW(open_document(doc, "problem"));
    try {
        open_document(doc, "result");
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
    }
    Json stale = doc;
    stale["schema_version"] = kSchemaVersion + 1;
    CHECK_THROWS_AS(open_document(stale, "problem"), Error);
}

TEST_CASE("factorization problems survive a file round trip") {
    FixtureSpec spec;
    spec.n = 2;
    spec.seed = 8;
    auto fx = make_fixture(spec);

    std::string path = "/tmp/weldfactor_io_test_problem.json";
    Json doc = make_document("problem", to_json(fx.problem));
    write_file_atomic(path, doc.dump(2));
    Json loaded = parse_file(path);
    FactorizationProblem back = problem_from_json(open_document(loaded, "problem"));

    REQUIRE(back.domain.curves.size() == fx.problem.domain.curves.size());
    for (size_t i = 0; i < back.domain.curves.size(); ++i) {
        CHECK(back.domain.curves[i].coeffs() == fx.problem.domain.curves[i].coeffs());
        CHECK(back.boundary_data[i].target.coeffs() == fx.problem.boundary_data[i].target.coeffs());
        CHECK(back.boundary_data[i].w.periodic_coeffs() ==
              fx.problem.boundary_data[i].w.periodic_coeffs());
    }
    REQUIRE(back.interior_samples.size() == fx.problem.interior_samples.size());
    for (size_t i = 0; i < back.interior_samples.size(); ++i) {
        CHECK(back.interior_samples[i].first == fx.problem.interior_samples[i].first);
        CHECK(back.interior_samples[i].second == fx.problem.interior_samples[i].second);
    }
    // Re-serialization is byte-identical.
    CHECK(make_document("problem", to_json(back)).dump(2) == doc.dump(2));
    std::remove(path.c_str());
}

TEST_CASE("SVG rendering is deterministic") {
    std::vector<PlotCurve> curves;
    curves.push_back({AnalyticCurve::circle(Complex(0.0), 1.0), "unit"});
    curves.push_back({AnalyticCurve(-1, {Complex(0.3), Complex(0.1, 0.2), Complex(1.0)}), "wobble"});

    std::string a = render_svg(curves);
    std::string b = render_svg(curves);
    CHECK(a == b);
    CHECK(a.find("<svg") != std::string::npos);
    CHECK(a.find("unit") != std::string::npos);
    CHECK(a.find("wobble") != std::string::npos);
    CHECK(a.find("</svg>") != std::string::npos);

    curves[0].label = "renamed";
    CHECK(render_svg(curves) != a);
}
