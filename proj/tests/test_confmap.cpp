#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "weldfactor/confmap.hpp"

using namespace weldfactor;

namespace {
Complex I(0.0, 1.0);
}

TEST_CASE("moebius basics") {
    MoebiusMap m(Complex(1.0), Complex(-0.3), Complex(-0.3), Complex(1.0));  // (z-0.3)/(1-0.3z)
    CHECK(std::abs(m.apply(Complex(0.3)).value()) < 1e-14);
    CHECK(std::abs(m.apply(Complex(1.0)).value() - Complex(1.0)) < 1e-14);
    CHECK(std::abs(m.apply(Complex(-1.0)).value() + Complex(1.0)) < 1e-14);

    // inverse composes to the identity
    MoebiusMap inv = m.inverse();
    for (double t : {0.1, 0.7, 2.3, 5.1}) {
        Complex z = 0.8 * std::exp(I * t);
        CHECK(std::abs(inv.apply(m.apply(z)).value() - z) < 1e-13);
    }

    // pole and infinity on the sphere
    MoebiusMap inv2(Complex(0.0), Complex(1.0), Complex(1.0), Complex(0.0));  // 1/z
    CHECK(inv2.apply(Complex(0.0)).is_infinite());
    CHECK(std::abs(inv2.apply(PlanePoint::infinity()).value()) < 1e-14);
}

TEST_CASE("power series eval and derivative") {
    PowerSeriesMap id;  // a_0 = 0, a_1 = 1
    CHECK(std::abs(id.eval(Complex(0.3, 0.4)) - Complex(0.3, 0.4)) < 1e-15);

    PowerSeriesMap p({Complex(0.0), Complex(1.0), Complex(0.2)});  // z + 0.2 z^2
    CHECK(std::abs(p.eval(Complex(0.5)) - Complex(0.55)) < 1e-15);
    CHECK(std::abs(p.derivative(Complex(0.5)) - Complex(1.2)) < 1e-15);
}

TEST_CASE("laurent series eval and derivative") {
    LaurentSeriesMap l(Complex(1.0), {Complex(0.0), Complex(0.3)});  // z + 0.3/z
    CHECK(std::abs(l.eval(Complex(1.0)) - Complex(1.3)) < 1e-15);
    CHECK(std::abs(l.eval(I) - Complex(0.0, 0.7)) < 1e-15);
    CHECK(std::abs(l.derivative(Complex(2.0)) - Complex(1.0 - 0.3 / 4.0)) < 1e-15);
}

TEST_CASE("newton inversion of a power map") {
    // z + 0.2 z^2 = 0.55 has root z = 0.5 (the one inside the disk)
    ConformalMap p(PowerSeriesMap({Complex(0.0), Complex(1.0), Complex(0.2)}));
    PlanePoint z = invert_map(p, Complex(0.55), Complex(0.55));
    CHECK(std::abs(z.value() - Complex(0.5)) < 1e-12);

    // random boundary points round-trip
    for (int j = 0; j < 8; ++j) {
        Complex zeta = std::exp(I * (0.13 + 0.77 * j));
        Complex w = eval_map(p, zeta);
        PlanePoint back = invert_map(p, w, zeta + Complex(0.05, -0.02));
        CHECK(std::abs(back.value() - zeta) < 1e-11);
    }
}

TEST_CASE("newton inversion of a laurent map") {
    ConformalMap l(LaurentSeriesMap(Complex(1.0), {Complex(0.1, 0.05), Complex(0.3)}));
    for (int j = 0; j < 8; ++j) {
        Complex zeta = (1.0 + 0.3 * j) * std::exp(I * (0.41 * j));
        Complex w = eval_map(l, zeta);
        PlanePoint back = invert_map(l, w, w);
        CHECK(std::abs(back.value() - zeta) < 1e-10 * (1.0 + std::abs(zeta)));
    }
}

TEST_CASE("composition applies right to left and flattens") {
    ConformalMap a(MoebiusMap::affine(Complex(2.0), Complex(1.0)));      // 2z + 1
    ConformalMap b(PowerSeriesMap({Complex(0.0), Complex(1.0), Complex(0.2)}));
    ConformalMap ab = compose({a, b});
    Complex z(0.5);
    CHECK(std::abs(eval_map(ab, z) - (2.0 * Complex(0.55) + 1.0)) < 1e-14);

    // associativity through nesting
    ConformalMap c(MoebiusMap::affine(Complex(0.0, 1.0), Complex(0.0)));
    ConformalMap left = compose({compose({c, a}), b});
    ConformalMap right = compose({c, compose({a, b})});
    for (double t : {0.0, 1.1, 2.9, 4.4}) {
        Complex zz = 0.7 * std::exp(I * t);
        CHECK(std::abs(eval_map(left, zz) - eval_map(right, zz)) < 1e-13);
    }
    // flattening happened: no nested composites
    const auto* comp = left.as<CompositeMap>();
    REQUIRE(comp != nullptr);
    for (const auto& f : comp->factors) CHECK(f.map->as<CompositeMap>() == nullptr);
}

TEST_CASE("inverted factor evaluates the inverse") {
    ConformalMap p(PowerSeriesMap({Complex(0.0), Complex(1.0), Complex(0.2)}));
    ConformalMap pinv = inverted(p);
    CHECK(std::abs(eval_map(pinv, Complex(0.55)) - Complex(0.5)) < 1e-11);
    // p o p^{-1} = id
    ConformalMap round = compose({p, pinv});
    for (int j = 0; j < 6; ++j) {
        Complex w = eval_map(p, 0.8 * std::exp(I * (0.9 * j)));
        CHECK(std::abs(eval_map(round, w) - w) < 1e-10);
    }
}

TEST_CASE("map_derivative chain rule") {
    ConformalMap a(MoebiusMap::affine(Complex(2.0, 1.0), Complex(0.3)));
    ConformalMap b(PowerSeriesMap({Complex(0.0), Complex(1.0), Complex(0.2)}));
    ConformalMap ab = compose({a, b});
    Complex z(0.4, -0.2);
    Complex expect = Complex(2.0, 1.0) * (Complex(1.0) + 0.4 * z);
    CHECK(std::abs(map_derivative(ab, z) - expect) < 1e-13);

    // derivative of an inverted factor: 1/f'(f^{-1}(w))
    ConformalMap binv = inverted(b);
    Complex w = eval_map(b, z);
    CHECK(std::abs(map_derivative(binv, w) * map_derivative(b, z) - Complex(1.0)) < 1e-10);
}

TEST_CASE("boundary correspondence eval/invert/monotone") {
    BoundaryCorrespondence id = BoundaryCorrespondence::identity();
    CHECK(id.eval(1.3) == doctest::Approx(1.3));
    CHECK(id.is_monotone());

    BoundaryCorrespondence rot = BoundaryCorrespondence::rotation(0.7);
    CHECK(rot.eval(0.0) == doctest::Approx(0.7));
    CHECK(rot.invert(0.7) == doctest::Approx(0.0).epsilon(1e-10));

    // small perturbation stays monotone, eta(theta + 2pi) = eta(theta) + 2pi
    BoundaryCorrespondence eta(-1, {Complex(0.05, 0.02), Complex(0.0), Complex(0.05, -0.02)});
    CHECK(eta.is_monotone());
    CHECK(eta.eval(1.0 + kTwoPi) - eta.eval(1.0) == doctest::Approx(kTwoPi));
    for (double y : {0.3, 2.0, 5.9}) CHECK(eta.eval(eta.invert(y)) == doctest::Approx(y).epsilon(1e-11));
}

TEST_CASE("correspondence from samples reproduces a known map") {
    BoundaryCorrespondence eta(-2, {Complex(0.01, 0.03), Complex(0.06, -0.02), Complex(0.0),
                                    Complex(0.06, 0.02), Complex(0.01, -0.03)});
    int m = 129;
    std::vector<double> vals(m);
    for (int j = 0; j < m; ++j) vals[j] = eta.eval(kTwoPi * j / m);
    BoundaryCorrespondence fit = BoundaryCorrespondence::from_samples(vals, 4);
    for (double t : {0.0, 0.9, 3.3, 5.8}) CHECK(fit.eval(t) == doctest::Approx(eta.eval(t)).epsilon(1e-10));
}

TEST_CASE("moebius circle correspondence matches the closed form") {
    // m(z) = (z - 0.3)/(1 - 0.3 z) maps the unit circle to itself
    MoebiusMap m(Complex(1.0), Complex(-0.3), Complex(-0.3), Complex(1.0));
    AnalyticCurve circle = AnalyticCurve::circle(Complex(0.0), 1.0);
    BoundaryCorrespondence eta = boundary_correspondence(ConformalMap(m), circle, circle, 64);
    // oracle: continuous lift of arg m(e^{i theta})
    double prev = std::arg(m.apply(Complex(1.0)).value());
    double lift = prev;
    for (int j = 0; j <= 256; ++j) {
        double t = kTwoPi * j / 256.0;
        double a = std::arg(m.apply(std::exp(I * t)).value());
        double d = a - prev;
        while (d > kPi) d -= kTwoPi;
        while (d < -kPi) d += kTwoPi;
        lift += d;
        prev = a;
        double got = eta.eval(t);
        double diff = std::remainder(got - lift, kTwoPi);
        CHECK(std::abs(diff) < 1e-10);
    }
}

TEST_CASE("verify_injective accepts a conformal map and rejects a double cover") {
    DomainSpec disk{{AnalyticCurve::circle(Complex(0.0), 1.0)}, PlanePoint(Complex(0.0))};
    ConformalMap good(PowerSeriesMap({Complex(0.0), Complex(1.0), Complex(0.2)}));
    auto rep = verify_injective(good, disk);
    CHECK(rep.pass);
    CHECK(rep.winding_failures == 0);

    // z^2 double-covers; winding about interior images is 2
    DomainSpec annulus_free{{AnalyticCurve::circle(Complex(0.0), 1.0)}, PlanePoint(Complex(0.5))};
    ConformalMap square(PowerSeriesMap({Complex(0.0), Complex(0.0), Complex(1.0)}));
    auto bad = verify_injective(square, annulus_free);
    CHECK_FALSE(bad.pass);
}

TEST_CASE("interior samples land inside the domain") {
    DomainSpec dom{{AnalyticCurve::circle(Complex(1.0, 0.5), 2.0),
                    AnalyticCurve::circle(Complex(1.0, 0.5), 0.5, CurveSide::Right)},
                   PlanePoint(Complex(2.2, 0.5))};
    auto pts = interior_samples(dom, 100);
    CHECK(pts.size() == 100);
    for (Complex z : pts) {
        double r = std::abs(z - Complex(1.0, 0.5));
        CHECK(r < 2.0);
        CHECK(r > 0.5);
    }
    // deterministic in the domain
    auto again = interior_samples(dom, 100);
    for (size_t i = 0; i < pts.size(); ++i) CHECK(pts[i] == again[i]);
}
