#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "weldfactor/riemann.hpp"

using namespace weldfactor;

namespace {

const Complex I(0.0, 1.0);

// Newton-refined distance to the curve (trace_distance alone is limited by the
// sample spacing).
double curve_distance(const AnalyticCurve& curve, Complex w) {
    double s = curve.nearest_parameter(w);
    return std::abs(w - curve.point(s));
}

double coeff_error_interior(const PowerSeriesMap& got, const std::vector<Complex>& want) {
    double e = 0.0;
    size_t n = std::max(got.coeffs.size(), want.size());
    for (size_t k = 0; k < n; ++k) {
        Complex g = k < got.coeffs.size() ? got.coeffs[k] : Complex(0.0);
        Complex w = k < want.size() ? want[k] : Complex(0.0);
        e = std::max(e, std::abs(g - w));
    }
    return e;
}

}  // namespace

TEST_CASE("disk to itself is the identity") {
    AnalyticCurve circle = AnalyticCurve::circle(Complex(0.0), 1.0);
    auto sol = riemann_interior(circle, Complex(0.0));
    const auto* p = sol.map.as<PowerSeriesMap>();
    REQUIRE(p != nullptr);
    CHECK(std::abs(p->coeffs[0]) < 1e-10);
    CHECK(std::abs(p->coeffs[1] - Complex(1.0)) < 1e-10);
    for (size_t k = 2; k < p->coeffs.size(); ++k) CHECK(std::abs(p->coeffs[k]) < 1e-10);
    CHECK(sol.residual < 1e-10);
}

TEST_CASE("shifted scaled circle gives the affine map") {
    Complex c(0.7, -0.4);
    double r = 1.8;
    AnalyticCurve circle = AnalyticCurve::circle(c, r);
    auto sol = riemann_interior(circle, c);
    const auto* p = sol.map.as<PowerSeriesMap>();
    REQUIRE(p != nullptr);
    CHECK(std::abs(p->coeffs[0] - c) < 1e-9);
    CHECK(std::abs(p->coeffs[1] - Complex(r)) < 1e-9);
    CHECK(p->coeffs[1].real() > 0.0);  // normalisation f'(0) > 0
}

TEST_CASE("interior oracle: quadratic polynomial curve") {
    // P(zeta) = zeta + 0.2 zeta^2 maps the disk conformally; its boundary image
    // is an exact degree-2 curve, so the solver must recover P itself.
    std::vector<Complex> gen = {Complex(0.0), Complex(1.0), Complex(0.2)};
    AnalyticCurve curve(0, gen);
    RiemannOptions opts;
    opts.order = 64;
    auto sol = riemann_interior(curve, Complex(0.0), opts);
    const auto* p = sol.map.as<PowerSeriesMap>();
    REQUIRE(p != nullptr);
    CHECK(coeff_error_interior(*p, gen) < 1e-8);

    // boundary correspondence is the identity here (f(e^{it}) = gamma(t))
    for (double t : {0.0, 1.0, 2.5, 5.0})
        CHECK(std::abs(std::remainder(sol.correspondence.eval(t) - t, kTwoPi)) < 1e-8);
}

TEST_CASE("exterior oracle: ellipse from a Laurent map") {
    // L(zeta) = zeta + 0.3/zeta traces an ellipse; exact exterior map is L.
    AnalyticCurve ellipse(-1, {Complex(0.3), Complex(0.0), Complex(1.0)});
    RiemannOptions opts;
    opts.order = 64;
    auto sol = riemann_exterior(ellipse, opts);
    const auto* l = sol.map.as<LaurentSeriesMap>();
    REQUIRE(l != nullptr);
    CHECK(std::abs(l->lambda - Complex(1.0)) < 1e-8);
    CHECK(std::abs(l->coeff(0)) < 1e-8);
    CHECK(std::abs(l->coeff(-1) - Complex(0.3)) < 1e-8);
    for (int k = -2; k >= -8; --k) CHECK(std::abs(l->coeff(k)) < 1e-8);
}

TEST_CASE("solution maps the circle onto the curve on a denser grid") {
    AnalyticCurve curve(0, {Complex(0.1, 0.2), Complex(1.0), Complex(0.15, 0.05), Complex(0.0, -0.06)});
    RiemannOptions opts;
    opts.order = 48;
    auto sol = riemann_interior(curve, Complex(0.1, 0.2), opts);
    const auto* p = sol.map.as<PowerSeriesMap>();
    REQUIRE(p != nullptr);
    double worst = 0.0;
    int m = 4 * (2 * opts.order + 1);
    for (int j = 0; j < m; ++j) {
        double t = kTwoPi * j / m;
        worst = std::max(worst, curve_distance(curve, p->eval(std::exp(I * t))));
    }
    CHECK(worst < 1e-7 * curve.diameter());
}

TEST_CASE("exterior solve of a perturbed circle stays close on the trace") {
    AnalyticCurve curve(-2, {Complex(0.04, -0.03), Complex(0.12), Complex(0.2, 0.1), Complex(1.0)});
    auto sol = riemann_exterior(curve);
    const auto* l = sol.map.as<LaurentSeriesMap>();
    REQUIRE(l != nullptr);
    CHECK(l->lambda.real() > 0.0);
    CHECK(std::abs(l->lambda.imag()) < 1e-12);
    double worst = 0.0;
    for (int j = 0; j < 512; ++j) {
        double t = kTwoPi * j / 512;
        worst = std::max(worst, curve_distance(curve, l->eval(std::exp(I * t))));
    }
    CHECK(worst < 1e-7 * curve.diameter());
    CHECK(sol.correspondence.is_monotone());
}

TEST_CASE("newton converges superlinearly near the solution") {
    AnalyticCurve curve(0, {Complex(0.0), Complex(1.0), Complex(0.18), Complex(0.0, 0.05)});
    auto sol = riemann_interior(curve, Complex(0.0));
    // the recorded residual history should show at least one strongly
    // contracting step (quadratic-like convergence, not linear grinding)
    REQUIRE(sol.residual_history.size() >= 2);
    bool sharp_drop = false;
    for (size_t i = 1; i < sol.residual_history.size(); ++i) {
        if (sol.residual_history[i - 1] > 1e-13 &&
            sol.residual_history[i] < 1e-2 * sol.residual_history[i - 1])
            sharp_drop = true;
    }
    CHECK(sharp_drop);
    CHECK(sol.newton_iterations < 30);
}

TEST_CASE("spectral convergence on an analytic non-polynomial curve") {
    // boundary of the image of the disk under z/(1 - 0.35 z): coefficients decay
    // geometrically, so doubling the order should slash the boundary defect.
    std::vector<Complex> c(24, Complex(0.0));
    for (int k = 1; k < 24; ++k) c[k] = std::pow(0.35, k - 1);
    AnalyticCurve curve(0, c);

    auto defect = [&](int order) {
        RiemannOptions o;
        o.order = order;
        auto s = riemann_interior(curve, Complex(0.0), o);
        const auto* p = s.map.as<PowerSeriesMap>();
        double worst = 0.0;
        for (int j = 0; j < 600; ++j) {
            double t = kTwoPi * j / 600;
            worst = std::max(worst, curve_distance(curve, p->eval(std::exp(I * t))));
        }
        return worst;
    };
    double d8 = defect(8);
    double d16 = defect(16);
    CHECK(d16 < 0.05 * d8);
}

TEST_CASE("centre off the bounded side is rejected") {
    AnalyticCurve circle = AnalyticCurve::circle(Complex(0.0), 1.0);
    CHECK_THROWS_AS(riemann_interior(circle, Complex(3.0)), Error);
}
