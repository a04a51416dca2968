#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "weldfactor/fixtures.hpp"

using namespace weldfactor;

namespace {

std::vector<std::vector<Complex>> boundary_images(const Fixture& fx) {
    std::vector<std::vector<Complex>> images;
    for (const auto& c : fx.problem.domain.curves) {
        std::vector<Complex> img;
        for (int j = 0; j < 64; ++j) img.push_back(eval_map(fx.truth, c.point(kTwoPi * j / 64)));
        images.push_back(std::move(img));
    }
    return images;
}

}  // namespace

TEST_CASE("component matching pairs curves with nearest targets") {
    DomainSpec sources;
    sources.curves = {AnalyticCurve::circle(Complex(-2.0, 0.0), 0.5, CurveSide::Right),
                      AnalyticCurve::circle(Complex(2.0, 0.0), 0.5, CurveSide::Right)};
    sources.base_point = PlanePoint(Complex(0.0));

    std::vector<std::vector<Complex>> images(2);
    for (int j = 0; j < 32; ++j) {
        double t = kTwoPi * j / 32;
        images[0].push_back(Complex(5.0, 1.0) + 0.4 * std::polar(1.0, t));
        images[1].push_back(Complex(-5.0, -1.0) + 0.6 * std::polar(1.0, t));
    }

    DomainSpec targets;
    targets.curves = {AnalyticCurve::circle(Complex(-5.0, -1.0), 0.6, CurveSide::Right),
                      AnalyticCurve::circle(Complex(5.0, 1.0), 0.4, CurveSide::Right)};
    targets.base_point = PlanePoint(Complex(0.0));

    auto perm = match_components(sources, images, targets);
    REQUIRE(perm.size() == 2);
    CHECK(perm[0] == 1);
    CHECK(perm[1] == 0);

    // Two equally plausible targets must be rejected, not guessed.
    DomainSpec close;
    close.curves = {AnalyticCurve::circle(Complex(5.0, 1.0), 0.4, CurveSide::Right),
                    AnalyticCurve::circle(Complex(5.0, 1.0), 0.41, CurveSide::Right)};
    close.base_point = PlanePoint(Complex(0.0));
    try {
        match_components(sources, images, close);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::AmbiguousMatch);
    }
}

TEST_CASE("single-hole problems factor into one map") {
    FixtureSpec spec;
    spec.n = 1;
    spec.seed = 7;
    auto fx = make_fixture(spec);

    auto res = factorize(fx.problem);
    REQUIRE(res.factors.size() == 1);
    CHECK(res.connectivity_trace == std::vector<int>{1, 0});
    CHECK(res.moebius_fit_residual < 1e-8);

    auto metrics = verify_factorization(res, fx.problem);
    double scale = fx.problem.domain.curves[0].diameter();
    CHECK(metrics.max_interior_error < 1e-8 * scale);
    for (double d : metrics.boundary_defects) CHECK(d < 1e-6 * scale);
    for (const auto& rep : metrics.factor_reports) CHECK(rep.pass);
}

TEST_CASE("two-hole factorization works in either peel order") {
    FixtureSpec spec;
    spec.n = 2;
    spec.seed = 11;
    auto fx = make_fixture(spec);
    double scale = 0.0;
    for (const auto& c : fx.problem.domain.curves) scale = std::max(scale, c.diameter());

    for (std::vector<int> order : {std::vector<int>{0, 1}, std::vector<int>{1, 0}}) {
        FactorizationOptions opts;
        opts.peel_order = order;
        auto res = factorize(fx.problem, opts);
        REQUIRE(res.factors.size() == 2);
        CHECK(res.connectivity_trace == std::vector<int>{2, 1, 0});
        REQUIRE(res.diagnostics.size() == 2);
        CHECK(res.diagnostics[0].original_index == order[0]);
        CHECK(res.diagnostics[1].original_index == order[1]);

        auto metrics = verify_factorization(res, fx.problem);
        CHECK(metrics.max_interior_error < 1e-7 * scale);
        for (const auto& rep : metrics.factor_reports) CHECK(rep.pass);
    }
}

TEST_CASE("peeling reduces connectivity one curve at a time") {
    FixtureSpec spec;
    spec.n = 3;
    spec.seed = 21;
    auto fx = make_fixture(spec);

    FactorizationOptions opts;
    auto state = initial_state(fx.problem);
    CHECK(state.connectivity() == 3);

    auto [g, next] = peel_factor(state, 0, opts);
    CHECK(next.connectivity() == 2);
    CHECK(next.data.size() == 2);
    CHECK(next.original_index.size() == 2);
    // The peeled factor is conformal where it is used.
    REQUIRE(g.domain().has_value());
    CHECK(verify_injective(g, *g.domain()).pass);

    auto res = factorize(fx.problem, opts);
    CHECK(res.connectivity_trace == std::vector<int>{3, 2, 1, 0});
    auto metrics = verify_factorization(res, fx.problem);
    double scale = 0.0;
    for (const auto& c : fx.problem.domain.curves) scale = std::max(scale, c.diameter());
    CHECK(metrics.max_interior_error < 1e-5 * scale);
}

TEST_CASE("verification flags a corrupted factorization") {
    FixtureSpec spec;
    spec.n = 1;
    spec.seed = 3;
    auto fx = make_fixture(spec);
    auto res = factorize(fx.problem);
    auto good = verify_factorization(res, fx.problem);

    auto bad = res;
    bad.factors[0] = ConformalMap(MoebiusMap::affine(Complex(1.05), Complex(0.02, -0.01)));
    auto metrics = verify_factorization(bad, fx.problem);
    CHECK(metrics.max_interior_error > 100.0 * good.max_interior_error);
    CHECK(metrics.max_interior_error > 1e-3);
}

TEST_CASE("factorization is invariant under a Moebius gauge change") {
    FixtureSpec spec;
    spec.n = 1;
    spec.seed = 17;
    auto fx = make_fixture(spec);

    // Post-compose the data with m(w) = (0.9 + 0.2i) w + (1 - 0.5i): the
    // composition m o G is another admissible map and must factor too.
    const Complex gsc(0.9, 0.2), gsh(1.0, -0.5);
    MoebiusMap m = MoebiusMap::affine(gsc, gsh);
    FactorizationProblem prob = fx.problem;
    for (auto& d : prob.boundary_data) {
        std::vector<Complex> mapped;
        for (Complex c : d.target.coeffs()) mapped.push_back(gsc * c);
        mapped[static_cast<size_t>(-d.target.k_min())] += gsh;
        d.target = AnalyticCurve(d.target.k_min(), mapped, d.target.domain_side());
    }
    for (auto& [z, gz] : prob.interior_samples) gz = m.apply(PlanePoint(gz)).value();

    auto res = factorize(prob);
    auto metrics = verify_factorization(res, prob);
    double scale = prob.domain.curves[0].diameter();
    CHECK(metrics.max_interior_error < 1e-8 * scale);
}

TEST_CASE("least-squares Moebius fit recovers exact maps") {
    MoebiusMap truth(Complex(1.2, 0.3), Complex(0.4, -0.2), Complex(0.1, 0.05), Complex(1.0));
    std::vector<Complex> z, w;
    for (int j = 0; j < 24; ++j) {
        Complex p = 2.0 * std::polar(1.0, kTwoPi * j / 24) + Complex(0.1, 0.2);
        z.push_back(p);
        w.push_back(truth.apply(PlanePoint(p)).value());
    }
    auto [fit, resid] = fit_moebius(z, w);
    CHECK(resid < 1e-10);
    for (Complex p : z) CHECK(std::abs(fit.apply(PlanePoint(p)).value() - truth.apply(PlanePoint(p)).value()) < 1e-10);
}
