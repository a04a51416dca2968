#include "weldfactor/confmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "weldfactor/rng.hpp"

namespace weldfactor {

MoebiusMap::MoebiusMap(Complex a_, Complex b_, Complex c_, Complex d_) : a(a_), b(b_), c(c_), d(d_) {
    Complex det = a * d - b * c;
    if (std::abs(det) < 1e-300) throw Error(ErrorCode::BadNormalization, "singular Moebius coefficients");
    Complex s = std::sqrt(det);
    a /= s;
    b /= s;
    c /= s;
    d /= s;
}

MoebiusMap MoebiusMap::inverse() const { return MoebiusMap(d, -b, -c, a); }

PlanePoint MoebiusMap::apply(const PlanePoint& z) const {
    if (z.is_infinite()) {
        if (std::abs(c) == 0.0) return PlanePoint::infinity();
        return PlanePoint(a / c);
    }
    Complex w = z.value();
    Complex den = c * w + d;
    if (std::abs(den) == 0.0) return PlanePoint::infinity();
    return PlanePoint((a * w + b) / den);
}

Complex MoebiusMap::derivative(Complex z) const {
    Complex den = c * z + d;
    return Complex(1.0) / (den * den);  // (ad - bc) = 1
}

Complex PowerSeriesMap::eval(Complex z) const {
    Complex acc(0.0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
}

Complex PowerSeriesMap::derivative(Complex z) const {
    Complex acc(0.0);
    for (int k = static_cast<int>(coeffs.size()) - 1; k >= 1; --k)
        acc = acc * z + static_cast<double>(k) * coeffs[k];
    return acc;
}

AnalyticCurve PowerSeriesMap::boundary_curve(CurveSide domain_side) const {
    return AnalyticCurve(0, coeffs, domain_side);
}

Complex LaurentSeriesMap::eval(Complex z) const {
    if (std::abs(z) == 0.0) throw Error(ErrorCode::OutOfChart, "Laurent map at 0");
    Complex inv = Complex(1.0) / z;
    Complex acc(0.0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * inv + *it;
    return lambda * z + acc;
}

Complex LaurentSeriesMap::derivative(Complex z) const {
    Complex inv = Complex(1.0) / z;
    Complex acc(0.0);
    for (int k = static_cast<int>(coeffs.size()) - 1; k >= 1; --k)
        acc = acc * inv - static_cast<double>(k) * coeffs[k];
    return lambda + acc * inv * inv;
}

AnalyticCurve LaurentSeriesMap::boundary_curve(CurveSide domain_side) const {
    // k runs from -K to 1.
    std::vector<Complex> c(coeffs.rbegin(), coeffs.rend());
    c.push_back(lambda);
    return AnalyticCurve(-(static_cast<int>(coeffs.size()) - 1), std::move(c), domain_side);
}

BoundaryCorrespondence BoundaryCorrespondence::from_samples(const std::vector<double>& values, int order) {
    const int m = static_cast<int>(values.size());
    std::vector<Complex> p(m);
    for (int j = 0; j < m; ++j) p[j] = Complex(values[j] - kTwoPi * j / m, 0.0);
    auto proj = detail::fourier_project(p, order);
    // Hermitian symmetrisation keeps eta real.
    std::vector<Complex> sym(2 * order + 1);
    for (int k = -order; k <= order; ++k)
        sym[k + order] = 0.5 * (proj[k + order] + std::conj(proj[-k + order]));
    return BoundaryCorrespondence(-order, std::move(sym));
}

double BoundaryCorrespondence::eval(double theta) const {
    Complex acc(0.0);
    for (int k = k_min(); k <= k_max(); ++k)
        acc += periodic_[k - k_min_] * Complex(std::cos(k * theta), std::sin(k * theta));
    return theta + std::real(acc);
}

double BoundaryCorrespondence::derivative(double theta) const {
    Complex acc(0.0);
    for (int k = k_min(); k <= k_max(); ++k)
        acc += periodic_[k - k_min_] * Complex(0.0, static_cast<double>(k)) *
               Complex(std::cos(k * theta), std::sin(k * theta));
    return 1.0 + std::real(acc);
}

double BoundaryCorrespondence::invert(double y) const {
    // eta(theta) - theta is bounded by the coefficient l1 norm.
    double bound = 0.0;
    for (const auto& c : periodic_) bound += std::abs(c);
    double lo = y - bound - 1e-12, hi = y + bound + 1e-12;
    double t = y;
    for (int it = 0; it < 100; ++it) {
        double f = eval(t) - y;
        if (std::abs(f) < 1e-14) return t;
        if (f > 0.0)
            hi = std::min(hi, t);
        else
            lo = std::max(lo, t);
        double d = derivative(t);
        double tn = (d > 1e-12) ? t - f / d : 0.5 * (lo + hi);
        if (tn <= lo || tn >= hi) tn = 0.5 * (lo + hi);
        t = tn;
    }
    return t;
}

double BoundaryCorrespondence::monotonicity_margin() const {
    const int m = std::max(8 * order(), 256);
    double margin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) margin = std::min(margin, derivative(kTwoPi * j / m));
    return margin;
}

namespace {

PlanePoint eval_rep(const ConformalMap& map, const PlanePoint& z);

PlanePoint default_guess(const ConformalMap& map, const PlanePoint& w);

PlanePoint invert_rep(const ConformalMap& map, const PlanePoint& w, const PlanePoint& guess,
                      const InvertOptions& opts);

struct EvalVisitor {
    const PlanePoint& z;

    PlanePoint operator()(const MoebiusMap& m) const { return m.apply(z); }

    PlanePoint operator()(const PowerSeriesMap& m) const {
        if (z.is_infinite()) throw Error(ErrorCode::OutOfChart, "power series at infinity");
        return PlanePoint(m.eval(z.value()));
    }

    PlanePoint operator()(const LaurentSeriesMap& m) const {
        if (z.is_infinite()) return PlanePoint::infinity();
        return PlanePoint(m.eval(z.value()));
    }

    PlanePoint operator()(const CompositeMap& m) const {
        if (m.factors.empty()) throw Error(ErrorCode::EmptyList, "empty composite");
        PlanePoint cur = z;
        for (auto it = m.factors.rbegin(); it != m.factors.rend(); ++it) {
            if (it->inverted)
                cur = invert_rep(*it->map, cur, default_guess(*it->map, cur), InvertOptions{});
            else
                cur = eval_rep(*it->map, cur);
        }
        return cur;
    }
};

PlanePoint eval_rep(const ConformalMap& map, const PlanePoint& z) {
    return std::visit(EvalVisitor{z}, map.rep());
}

PlanePoint default_guess(const ConformalMap& map, const PlanePoint& w) {
    if (const auto* p = map.as<PowerSeriesMap>()) {
        if (w.is_infinite()) throw Error(ErrorCode::OutOfChart, "inverting power series at infinity");
        Complex a0 = p->coeffs.empty() ? Complex(0.0) : p->coeffs[0];
        Complex a1 = p->coeffs.size() > 1 ? p->coeffs[1] : Complex(1.0);
        if (std::abs(a1) == 0.0) a1 = Complex(1.0);
        return PlanePoint((w.value() - a0) / a1);
    }
    if (const auto* l = map.as<LaurentSeriesMap>()) {
        if (w.is_infinite()) return PlanePoint::infinity();
        return PlanePoint((w.value() - l->coeff(0)) / l->lambda);
    }
    return w;  // Moebius is closed form; composite propagates per factor
}

// Damped Newton on a series representation.
PlanePoint newton_invert(const ConformalMap& map, Complex w, Complex z0, const InvertOptions& opts) {
    double scale = std::max(1.0, std::abs(w));
    Complex z = z0;
    Complex r = eval_rep(map, PlanePoint(z)).value() - w;
    for (int it = 0; it < opts.max_iter; ++it) {
        if (std::abs(r) < opts.tol * scale) return PlanePoint(z);
        Complex d = map_derivative(map, z);
        if (std::abs(d) < 1e-300) throw Error(ErrorCode::NoConvergence, "vanishing derivative in inversion");
        Complex step = r / d;
        // Damping factor 1/2 on residual increase.
        for (int h = 0; h < 30; ++h) {
            Complex zn = z - step;
            Complex rn;
            try {
                rn = eval_rep(map, PlanePoint(zn)).value() - w;
            } catch (const Error&) {
                step *= 0.5;
                continue;
            }
            if (std::abs(rn) <= std::abs(r) || std::abs(rn) < opts.tol * scale) {
                z = zn;
                r = rn;
                break;
            }
            step *= 0.5;
        }
    }
    if (std::abs(r) < opts.tol * scale) return PlanePoint(z);
    throw Error(ErrorCode::NoConvergence, "map inversion did not converge");
}

PlanePoint invert_rep(const ConformalMap& map, const PlanePoint& w, const PlanePoint& guess,
                      const InvertOptions& opts) {
    if (const auto* m = map.as<MoebiusMap>()) return m->inverse().apply(w);
    if (const auto* comp = map.as<CompositeMap>()) {
        if (comp->factors.empty()) throw Error(ErrorCode::EmptyList, "empty composite");
        // Invert factor-by-factor from the left; inverse of an inverted factor
        // is a forward evaluation.
        PlanePoint cur = w;
        for (const auto& f : comp->factors) {
            if (f.inverted)
                cur = eval_rep(*f.map, cur);
            else
                cur = invert_rep(*f.map, cur, default_guess(*f.map, cur), opts);
        }
        return cur;
    }
    if (w.is_infinite()) {
        if (map.as<LaurentSeriesMap>()) return PlanePoint::infinity();
        throw Error(ErrorCode::OutOfChart, "inverting series map at infinity");
    }
    PlanePoint g = guess.is_infinite() ? default_guess(map, w) : guess;
    if (g.is_infinite()) throw Error(ErrorCode::OutOfChart, "infinite initial guess");
    return newton_invert(map, w.value(), g.value(), opts);
}

}  // namespace

PlanePoint eval_map(const ConformalMap& map, const PlanePoint& z) { return eval_rep(map, z); }

Complex eval_map(const ConformalMap& map, Complex z) { return eval_rep(map, PlanePoint(z)).value(); }

Complex map_derivative(const ConformalMap& map, Complex z) {
    if (const auto* m = map.as<MoebiusMap>()) return m->derivative(z);
    if (const auto* p = map.as<PowerSeriesMap>()) return p->derivative(z);
    if (const auto* l = map.as<LaurentSeriesMap>()) return l->derivative(z);
    const auto* comp = map.as<CompositeMap>();
    if (comp->factors.empty()) throw Error(ErrorCode::EmptyList, "empty composite");
    Complex d(1.0);
    Complex cur = z;
    for (auto it = comp->factors.rbegin(); it != comp->factors.rend(); ++it) {
        if (it->inverted) {
            Complex pre = invert_rep(*it->map, PlanePoint(cur), default_guess(*it->map, PlanePoint(cur)),
                                     InvertOptions{})
                              .value();
            d /= map_derivative(*it->map, pre);
            cur = pre;
        } else {
            d *= map_derivative(*it->map, cur);
            cur = eval_rep(*it->map, PlanePoint(cur)).value();
        }
    }
    return d;
}

PlanePoint invert_map(const ConformalMap& map, const PlanePoint& w, const PlanePoint& guess,
                      const InvertOptions& opts) {
    return invert_rep(map, w, guess, opts);
}

ConformalMap compose(const std::vector<ConformalMap>& factors) {
    if (factors.empty()) throw Error(ErrorCode::EmptyList, "compose of empty list");
    CompositeMap out;
    for (const auto& f : factors) {
        if (const auto* comp = f.as<CompositeMap>()) {
            for (const auto& inner : comp->factors) out.factors.push_back(inner);
        } else {
            out.factors.push_back({std::make_shared<ConformalMap>(f), false});
        }
    }
    return ConformalMap(std::move(out));
}

ConformalMap inverted(const ConformalMap& map) {
    if (const auto* m = map.as<MoebiusMap>()) return ConformalMap(m->inverse());
    CompositeMap out;
    out.factors.push_back({std::make_shared<ConformalMap>(map), true});
    return ConformalMap(std::move(out));
}

BoundaryCorrespondence boundary_correspondence(const ConformalMap& map, const AnalyticCurve& source,
                                               const AnalyticCurve& target, int order, double tol_rel) {
    if (order < 0) order = std::max(source.order(), target.order());
    const int m = std::max(4 * (order + 1), 256);
    const double diam = target.diameter();
    const double tol = tol_rel * diam;

    std::vector<double> lift(m + 1);
    for (int j = 0; j <= m; ++j) {
        double theta = kTwoPi * j / m;
        Complex w = eval_map(map, source.point(theta));
        double sigma = target.nearest_parameter(w);
        double dist = std::abs(target.point(sigma) - w);
        if (dist > tol)
            throw Error(ErrorCode::TraceMismatch,
                        "image point is " + std::to_string(dist) + " from the target trace");
        if (j > 0) {
            // Continuous lift: shift by 2 pi to the branch nearest the previous node.
            double prev = lift[j - 1];
            sigma += kTwoPi * std::round((prev - sigma) / kTwoPi);
        } else {
            sigma -= kTwoPi * std::floor(sigma / kTwoPi);  // representative in [0, 2 pi)
        }
        lift[j] = sigma;
    }
    double degree = (lift[m] - lift[0]) / kTwoPi;
    if (std::abs(degree - 1.0) > 0.25)
        throw Error(ErrorCode::TraceMismatch, "boundary image does not wind once around the target");
    lift.pop_back();
    auto eta = BoundaryCorrespondence::from_samples(lift, order);
    if (!eta.is_monotone())
        throw Error(ErrorCode::NonMonotoneInput, "induced boundary correspondence is not monotone");
    return eta;
}

std::vector<Complex> interior_samples(const DomainSpec& domain, int count) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& c : domain.curves) {
        const int m = c.geometric_samples();
        for (int j = 0; j < m; ++j) {
            Complex p = c.point(kTwoPi * j / m);
            xmin = std::min(xmin, p.real());
            xmax = std::max(xmax, p.real());
            ymin = std::min(ymin, p.imag());
            ymax = std::max(ymax, p.imag());
        }
    }
    double dx = xmax - xmin, dy = ymax - ymin;
    xmin -= 0.15 * dx;
    xmax += 0.15 * dx;
    ymin -= 0.15 * dy;
    ymax += 0.15 * dy;
    double scale = std::max(dx, dy);

    std::vector<Complex> out;
    SplitMix64 rng(0x5eedULL);
    int attempts = 0;
    while (static_cast<int>(out.size()) < count && attempts < 200 * count) {
        ++attempts;
        Complex z(rng.uniform(xmin, xmax), rng.uniform(ymin, ymax));
        bool ok = true;
        for (const auto& c : domain.curves) {
            if (c.trace_distance(z) < 0.02 * scale) {
                ok = false;
                break;
            }
            try {
                if (!on_domain_side(c, z)) {
                    ok = false;
                    break;
                }
            } catch (const Error&) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(z);
    }
    return out;
}

InjectivityReport verify_injective(const ConformalMap& map, const DomainSpec& domain) {
    InjectivityReport report;

    auto probes = interior_samples(domain, 48);
    if (domain.base_point.is_finite()) probes.push_back(domain.base_point.value());
    report.probes = static_cast<int>(probes.size());
    if (probes.empty()) {
        report.detail = "no interior probes available";
        return report;
    }

    // Dense images of the boundary curves, with orientation signs making the
    // domain lie on the left.
    struct MappedCurve {
        std::vector<Complex> pts;
        int sign;
    };
    std::vector<MappedCurve> mapped;
    for (const auto& c : domain.curves) {
        MappedCurve mc;
        mc.sign = c.domain_side() == CurveSide::Left ? 1 : -1;
        const int m = std::max(8 * c.order(), 512);
        mc.pts.resize(m);
        for (int j = 0; j < m; ++j) mc.pts[j] = eval_map(map, c.point(kTwoPi * j / m));
        mapped.push_back(std::move(mc));
    }

    // Expected winding from the argument principle: 1 preimage per probe, minus
    // 1 when the domain is unbounded and the map keeps a pole at infinity.
    double expected = 1.0;
    {
        int source_total = 0;
        for (const auto& c : domain.curves) {
            int sgn = c.domain_side() == CurveSide::Left ? 1 : -1;
            source_total += sgn * winding_number(c, PlanePoint(probes.front()));
        }
        if (source_total == 0) {  // unbounded domain: infinity is a domain point
            try {
                if (eval_map(map, PlanePoint::infinity()).is_infinite()) expected = 0.0;
            } catch (const Error&) {
                report.detail = "map undefined at infinity on an unbounded domain";
                return report;
            }
        }
    }

    double min_deriv = std::numeric_limits<double>::infinity();
    int failures = 0;
    double worst = 0.0;
    for (Complex z : probes) {
        Complex w = eval_map(map, z);
        min_deriv = std::min(min_deriv, std::abs(map_derivative(map, z)));
        double total = 0.0;
        bool skip = false;
        for (const auto& mc : mapped) {
            double acc = 0.0;
            const int m = static_cast<int>(mc.pts.size());
            for (int j = 0; j < m; ++j) {
                Complex a = mc.pts[j] - w, b = mc.pts[(j + 1) % m] - w;
                if (std::abs(a) < 1e-14 || std::abs(b) < 1e-14) {
                    skip = true;
                    break;
                }
                acc += std::arg(b / a);
            }
            if (skip) break;
            total += mc.sign * acc / kTwoPi;
        }
        if (skip) continue;
        double defect = std::abs(total - expected);
        worst = std::max(worst, defect);
        if (defect > 0.25) ++failures;
    }

    report.winding_failures = failures;
    report.min_derivative = std::isfinite(min_deriv) ? min_deriv : 0.0;
    report.worst_winding_defect = worst;
    report.pass = failures == 0 && report.min_derivative > 1e-12;
    return report;
}

}  // namespace weldfactor
