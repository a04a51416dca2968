#include "weldfactor/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "weldfactor/rng.hpp"

namespace weldfactor {

namespace {

Complex unit_phase(SplitMix64& rng) {
    double a = rng.uniform(0.0, kTwoPi);
    return Complex(std::cos(a), std::sin(a));
}

// z + c / (z - p) written inside the representation union: a Laurent series in
// the chart zeta = (z - p) / rho.
ConformalMap pole_block(Complex p, Complex c, double rho) {
    MoebiusMap chart = MoebiusMap::affine(Complex(1.0 / rho), -p / rho);
    LaurentSeriesMap tail(Complex(rho), {p, c / rho});
    return compose({ConformalMap(tail), ConformalMap(chart)});
}

AnalyticCurve project_closed_curve(const std::function<Complex(double)>& f, int order,
                                   CurveSide side, double* defect_out) {
    const int m = std::max(4 * (order + 1), 256);
    std::vector<Complex> vals(m);
    for (int j = 0; j < m; ++j) vals[j] = f(kTwoPi * j / m);
    auto coeffs = detail::fourier_project(vals, order);
    AnalyticCurve curve(-order, std::move(coeffs), side);
    if (defect_out) {
        double defect = 0.0;
        for (int j = 0; j < m; ++j) {
            double th = kTwoPi * (j + 0.5) / m;
            defect = std::max(defect, std::abs(curve.point(th) - f(th)));
        }
        *defect_out = defect;
    }
    return curve;
}

}  // namespace

DomainSpec Fixture::targets() const {
    DomainSpec d;
    for (const auto& bd : problem.boundary_data) d.curves.push_back(bd.target);
    d.base_point = target_base_;
    return d;
}

DomainSpec Fixture::shuffled_targets() const {
    DomainSpec d;
    d.curves.resize(problem.boundary_data.size());
    for (size_t i = 0; i < problem.boundary_data.size(); ++i)
        d.curves[label_permutation[i]] = problem.boundary_data[i].target;
    d.base_point = target_base_;
    return d;
}

Fixture make_fixture(const FixtureSpec& spec) {
    if (spec.n < 1 || spec.n > 12)
        throw Error(ErrorCode::BoundViolated, "component count out of the supported range");
    if (spec.pole_strength < 0.0 || spec.pole_strength > 0.3 || spec.perturbation > 0.1 ||
        spec.reparam_amplitude > 0.4)
        throw Error(ErrorCode::BoundViolated, "fixture parameters outside the injectivity-safe range");

    SplitMix64 rng(spec.seed);
    std::ostringstream log;

    const int n = spec.n;
    std::vector<Complex> centres(n);
    std::vector<double> radii(n);
    for (int j = 0; j < n; ++j) {
        if (n == 1) {
            centres[j] = Complex(0.3, 0.2) + 0.2 * Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
        } else {
            double ang = kTwoPi * j / n;
            centres[j] = 3.0 * Complex(std::cos(ang), std::sin(ang)) +
                         0.3 * Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
        }
        radii[j] = spec.hole_radius * (1.0 + spec.radius_jitter * (2.0 * rng.uniform() - 1.0));
    }

    // Source holes: perturbed circles, counter-clockwise, domain on the
    // unbounded (right) side.
    std::vector<AnalyticCurve> curves;
    for (int j = 0; j < n; ++j) {
        std::vector<Complex> coeffs(7, Complex(0.0));  // k = -3..3
        coeffs[3] = centres[j];
        coeffs[4] = Complex(radii[j]);
        for (int k : {-3, -2, 2, 3}) {
            double amp = spec.perturbation * radii[j] * rng.uniform() / std::abs(k);
            coeffs[k + 3] = amp * unit_phase(rng);
        }
        curves.emplace_back(-3, std::move(coeffs), CurveSide::Right);
    }

    PlanePoint base = (n == 1) ? PlanePoint(centres[0] + Complex(3.5 * radii[0], 0.0))
                               : PlanePoint(Complex(0.0));

    DomainSpec domain{curves, base};
    auto dreport = validate_domain(domain);
    if (!dreport.accepted()) throw Error(ErrorCode::CannotCertify, "generated source domain invalid");

    // Ground-truth factors: one pole perturbation per hole plus a leading
    // affine map, each certified injective on the region it must cover.
    std::vector<ConformalMap> blocks;
    Complex alpha = (0.9 + 0.2 * rng.uniform()) * unit_phase(rng);
    Complex beta = 0.5 * Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
    blocks.push_back(ConformalMap(MoebiusMap::affine(alpha, beta)));
    for (int j = 0; j < n; ++j) {
        Complex p = centres[j] + 0.1 * radii[j] * Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
        Complex c = spec.pole_strength * radii[j] * radii[j] * unit_phase(rng);
        double rho = 0.7 * radii[j];
        DomainSpec block_domain;
        block_domain.curves = {AnalyticCurve::circle(p, rho, CurveSide::Right)};
        block_domain.base_point = PlanePoint(p + Complex(2.0 * radii[j], 0.0));
        bool certified = false;
        for (int halving = 0; halving <= 6; ++halving) {
            ConformalMap block = pole_block(p, c, rho);
            auto rep = verify_injective(block, block_domain);
            if (rep.pass) {
                blocks.push_back(block);
                certified = true;
                log << "block " << j << " strength " << std::abs(c) << " after " << halving
                    << " halvings\n";
                break;
            }
            c *= 0.5;
        }
        if (!certified)
            throw Error(ErrorCode::CannotCertify, "pole block " + std::to_string(j) +
                                                      " failed injectivity after 6 halvings");
    }
    ConformalMap truth = compose(blocks).with_domain(domain);
    auto greport = verify_injective(truth, domain);
    if (!greport.pass) throw Error(ErrorCode::CannotCertify, "composed map failed injectivity");

    // Boundary data: monotone analytic reparametrisations and projected images.
    Fixture fx;
    fx.problem.domain = domain;
    for (int j = 0; j < n; ++j) {
        double amp = spec.reparam_amplitude;
        std::vector<Complex> p(5, Complex(0.0));  // k = -2..2
        p[2] = Complex(0.3 * (2.0 * rng.uniform() - 1.0));
        Complex p1 = 0.5 * amp * rng.uniform() * unit_phase(rng);
        Complex p2 = 0.25 * amp * rng.uniform() * unit_phase(rng);
        p[3] = p1;
        p[1] = std::conj(p1);
        p[4] = p2;
        p[0] = std::conj(p2);
        BoundaryCorrespondence w(-2, std::move(p));
        if (!w.is_monotone()) throw Error(ErrorCode::CannotCertify, "reparametrisation not monotone");

        double defect = 0.0;
        AnalyticCurve target = project_closed_curve(
            [&](double s) { return eval_map(truth, curves[j].point(w.invert(s))); }, spec.order,
            CurveSide::Right, &defect);
        log << "target " << j << " projection defect " << defect << "\n";
        fx.problem.boundary_data.push_back({target, w});
    }

    // Interior verification samples with their ground-truth images.
    {
        double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
        for (const auto& c : curves) {
            const int m = c.geometric_samples();
            for (int j = 0; j < m; ++j) {
                Complex z = c.point(kTwoPi * j / m);
                xmin = std::min(xmin, z.real());
                xmax = std::max(xmax, z.real());
                ymin = std::min(ymin, z.imag());
                ymax = std::max(ymax, z.imag());
            }
        }
        double pad = 0.6 * std::max(xmax - xmin, ymax - ymin) + 1.0;
        xmin -= pad;
        xmax += pad;
        ymin -= pad;
        ymax += pad;
        int attempts = 0;
        while (static_cast<int>(fx.problem.interior_samples.size()) < spec.interior_count &&
               attempts < 400 * spec.interior_count) {
            ++attempts;
            Complex z(rng.uniform(xmin, xmax), rng.uniform(ymin, ymax));
            bool ok = true;
            for (int j = 0; j < n; ++j) {
                if (std::abs(z - centres[j]) < 1.6 * radii[j]) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            fx.problem.interior_samples.emplace_back(z, eval_map(truth, z));
        }
        if (static_cast<int>(fx.problem.interior_samples.size()) < spec.interior_count)
            throw Error(ErrorCode::CannotCertify, "interior sampling starved");
    }

    // Label shuffle for the component-matching oracle: label_permutation[i] is
    // the position of source i's target in shuffled_targets().
    {
        std::vector<int> sigma(n);
        for (int i = 0; i < n; ++i) sigma[i] = i;
        for (int i = n - 1; i > 0; --i) {
            int k = static_cast<int>(rng.next() % static_cast<std::uint64_t>(i + 1));
            std::swap(sigma[i], sigma[k]);
        }
        fx.label_permutation = sigma;
    }

    fx.truth = truth;
    fx.target_base_ = base.is_infinite() ? PlanePoint::infinity()
                                         : PlanePoint(eval_map(truth, base.value()));
    fx.log = log.str();
    return fx;
}

std::pair<AnalyticCurve, ConformalMap> exact_polynomial_curve(int k_min,
                                                              const std::vector<Complex>& coeffs) {
    if (coeffs.empty()) throw Error(ErrorCode::EmptyList, "no coefficients");
    const int k_max = k_min + static_cast<int>(coeffs.size()) - 1;
    auto coeff_at = [&](int k) -> Complex {
        if (k < k_min || k > k_max) return Complex(0.0);
        return coeffs[k - k_min];
    };
    Complex c1 = coeff_at(1);
    double bound = 0.0;
    for (int k = k_min; k <= k_max; ++k)
        if (k != 1) bound += std::abs(k) * std::abs(coeff_at(k));
    if (!(bound < std::abs(c1)))
        throw Error(ErrorCode::BoundViolated,
                    "injectivity bound sum |k||c_k| < |c_1| violated (" + std::to_string(bound) + ")");

    ConformalMap map;
    if (k_min >= 0) {
        std::vector<Complex> a(k_max + 1, Complex(0.0));
        for (int k = k_min; k <= k_max; ++k) a[k] = coeff_at(k);
        map = ConformalMap(PowerSeriesMap(std::move(a)));
    } else {
        if (k_max > 1)
            throw Error(ErrorCode::BoundViolated, "exterior generator must be c_1 zeta + lower order");
        std::vector<Complex> c;
        for (int k = 0; k >= k_min; --k) c.push_back(coeff_at(k));
        map = ConformalMap(LaurentSeriesMap(c1, std::move(c)));
    }
    AnalyticCurve curve(k_min, coeffs, CurveSide::Left);
    std::string why;
    if (!curve.is_valid(&why)) throw Error(ErrorCode::BoundViolated, "generated curve invalid: " + why);
    return {curve, map};
}

}  // namespace weldfactor
