#include "weldfactor/curves.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace weldfactor {

namespace detail {

std::vector<double> uniform_angles(int m) {
    std::vector<double> t(m);
    for (int j = 0; j < m; ++j) t[j] = kTwoPi * j / m;
    return t;
}

std::vector<Complex> fourier_project(const std::vector<Complex>& values, int order) {
    const int m = static_cast<int>(values.size());
    std::vector<Complex> out(2 * order + 1, Complex(0.0));
    for (int k = -order; k <= order; ++k) {
        Complex acc(0.0);
        for (int j = 0; j < m; ++j) {
            double ang = -k * kTwoPi * j / m;
            acc += values[j] * Complex(std::cos(ang), std::sin(ang));
        }
        out[k + order] = acc / static_cast<double>(m);
    }
    return out;
}

}  // namespace detail

AnalyticCurve AnalyticCurve::circle(Complex center, double radius, CurveSide domain_side) {
    // k = 0, 1
    return AnalyticCurve(0, {center, Complex(radius, 0.0)}, domain_side);
}

int AnalyticCurve::order() const { return std::max(std::abs(k_min()), std::abs(k_max())); }

Complex AnalyticCurve::coeff(int k) const {
    if (k < k_min() || k > k_max()) return Complex(0.0);
    return coeffs_[k - k_min_];
}

Complex AnalyticCurve::point(double theta) const {
    Complex acc(0.0);
    for (int k = k_min(); k <= k_max(); ++k) {
        acc += coeffs_[k - k_min_] * Complex(std::cos(k * theta), std::sin(k * theta));
    }
    return acc;
}

Complex AnalyticCurve::derivative(double theta) const {
    Complex acc(0.0);
    for (int k = k_min(); k <= k_max(); ++k) {
        acc += coeffs_[k - k_min_] * Complex(0.0, static_cast<double>(k)) *
               Complex(std::cos(k * theta), std::sin(k * theta));
    }
    return acc;
}

Complex AnalyticCurve::second_derivative(double theta) const {
    Complex acc(0.0);
    for (int k = k_min(); k <= k_max(); ++k) {
        acc -= coeffs_[k - k_min_] * static_cast<double>(k) * static_cast<double>(k) *
               Complex(std::cos(k * theta), std::sin(k * theta));
    }
    return acc;
}

int AnalyticCurve::geometric_samples() const { return std::max(8 * order(), 256); }

double AnalyticCurve::diameter() const {
    const int m = geometric_samples();
    std::vector<Complex> pts(m);
    for (int j = 0; j < m; ++j) pts[j] = point(kTwoPi * j / m);
    double d = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) d = std::max(d, std::abs(pts[i] - pts[j]));
    return d;
}

AnalyticCurve AnalyticCurve::reversed() const {
    std::vector<Complex> rc(coeffs_.rbegin(), coeffs_.rend());
    return AnalyticCurve(-k_max(), std::move(rc), opposite(domain_side_));
}

double AnalyticCurve::trace_distance(Complex z) const {
    const int m = geometric_samples();
    double d = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) d = std::min(d, std::abs(point(kTwoPi * j / m) - z));
    return d;
}

double AnalyticCurve::nearest_parameter(Complex z) const {
    const int m = geometric_samples();
    double best = 0.0, bestd = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) {
        double t = kTwoPi * j / m;
        double d = std::abs(point(t) - z);
        if (d < bestd) {
            bestd = d;
            best = t;
        }
    }
    // Newton on d/dt |gamma(t) - z|^2 = 2 Re[conj(gamma') (gamma - z)].
    double t = best;
    for (int it = 0; it < 30; ++it) {
        Complex g = point(t) - z, gp = derivative(t), gpp = second_derivative(t);
        double f = std::real(std::conj(gp) * g);
        double fp = std::norm(gp) + std::real(std::conj(gpp) * g);
        if (std::abs(fp) < 1e-300) break;
        double step = f / fp;
        t -= step;
        if (std::abs(step) < 1e-14) break;
    }
    return t;
}

namespace {

// Proper intersection test for segments (a,b) and (c,d).
bool segments_cross(Complex a, Complex b, Complex c, Complex d) {
    auto orient = [](Complex p, Complex q, Complex r) {
        double v = std::imag(std::conj(q - p) * (r - p));
        return (v > 0.0) - (v < 0.0);
    };
    int o1 = orient(a, b, c), o2 = orient(a, b, d);
    int o3 = orient(c, d, a), o4 = orient(c, d, b);
    return o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

}  // namespace

double AnalyticCurve::injectivity_margin() const {
    const int m = geometric_samples();
    std::vector<Complex> pts(m);
    for (int j = 0; j < m; ++j) pts[j] = point(kTwoPi * j / m);
    double margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
        for (int j = i + 2; j < m; ++j) {
            if (i == 0 && j == m - 1) continue;  // adjacent around the seam
            margin = std::min(margin, std::abs(pts[i] - pts[j]));
        }
    }
    for (int i = 0; i < m; ++i) {
        for (int j = i + 2; j < m; ++j) {
            if (i == 0 && j == m - 1) continue;
            if (segments_cross(pts[i], pts[(i + 1) % m], pts[j], pts[(j + 1) % m])) return -1.0;
        }
    }
    return margin;
}

double AnalyticCurve::derivative_margin() const {
    const int m = geometric_samples();
    double d = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) d = std::min(d, std::abs(derivative(kTwoPi * j / m)));
    return d;
}

bool AnalyticCurve::is_valid(std::string* why) const {
    double diam = diameter();
    if (!(diam > 0.0)) {
        if (why) *why = "degenerate trace";
        return false;
    }
    if (derivative_margin() <= 1e-8 * diam) {
        if (why) *why = "vanishing derivative";
        return false;
    }
    if (injectivity_margin() <= 1e-8 * diam) {
        if (why) *why = "self-intersecting trace";
        return false;
    }
    return true;
}

int winding_number(const AnalyticCurve& curve, const PlanePoint& point) {
    if (point.is_infinite()) throw Error(ErrorCode::PointOnCurve, "winding number needs a finite point");
    const Complex z = point.value();
    const double diam = curve.diameter();
    if (curve.trace_distance(z) < 1e-12 * diam)
        throw Error(ErrorCode::PointOnCurve, "point within threshold of the trace");
    const int m = curve.geometric_samples();
    double total = 0.0;
    Complex prev = curve.point(0.0) - z;
    for (int j = 1; j <= m; ++j) {
        Complex cur = curve.point(kTwoPi * j / m) - z;
        total += std::arg(cur / prev);
        prev = cur;
    }
    double w = total / kTwoPi;
    double rounded = std::round(w);
    if (std::abs(w - rounded) > 0.25)
        throw Error(ErrorCode::QuadratureAmbiguous, "argument sum not near an integer; undersampled");
    return static_cast<int>(rounded);
}

int side_winding(const AnalyticCurve& curve, CurveSide side) {
    // Probe a short normal offset from the trace; step outward until the
    // winding quadrature is unambiguous.
    const double diam = curve.diameter();
    for (double eps = 1e-3; eps < 0.3; eps *= 3.0) {
        for (double theta : {0.0, 1.0, 2.0, 3.0, 4.5}) {
            Complex gp = curve.derivative(theta);
            if (std::abs(gp) == 0.0) continue;
            Complex normal = Complex(0.0, 1.0) * gp / std::abs(gp);  // left normal
            if (side == CurveSide::Right) normal = -normal;
            Complex probe = curve.point(theta) + eps * diam * normal;
            if (curve.trace_distance(probe) < 0.5 * eps * diam) continue;  // hit another fold
            try {
                return winding_number(curve, PlanePoint(probe));
            } catch (const Error&) {
                continue;
            }
        }
    }
    throw Error(ErrorCode::QuadratureAmbiguous, "could not probe curve side");
}

bool on_domain_side(const AnalyticCurve& curve, Complex z) {
    return winding_number(curve, PlanePoint(z)) == side_winding(curve, curve.domain_side());
}

Complex eval_curve(const AnalyticCurve& curve, double theta) { return curve.point(theta); }

ValidationReport validate_domain(const DomainSpec& domain) {
    ValidationReport report;
    const int n = static_cast<int>(domain.curves.size());

    for (int i = 0; i < n; ++i) {
        const auto& c = domain.curves[i];
        double diam = c.diameter();
        ValidationCheck inj{"curve_" + std::to_string(i) + "_injective", false, 0.0, ""};
        double im = c.injectivity_margin();
        inj.margin = im;
        inj.pass = im > 1e-8 * diam;
        report.checks.push_back(inj);

        ValidationCheck der{"curve_" + std::to_string(i) + "_derivative", false, 0.0, ""};
        double dm = c.derivative_margin();
        der.margin = dm;
        der.pass = dm > 1e-8 * diam;
        report.checks.push_back(der);
    }

    // Pairwise trace separation and complement disjointness.
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (j > i) {
                ValidationCheck sep{"separation_" + std::to_string(i) + "_" + std::to_string(j), false, 0.0, ""};
                double d = std::numeric_limits<double>::infinity();
                const int m = domain.curves[j].geometric_samples();
                for (int s = 0; s < m; ++s)
                    d = std::min(d, domain.curves[i].trace_distance(domain.curves[j].point(kTwoPi * s / m)));
                sep.margin = d;
                sep.pass = d > 0.0 && std::isfinite(d) && d > 1e-10 * domain.curves[i].diameter();
                report.checks.push_back(sep);
                if (!sep.pass) continue;
            }
            // Complement side of curve j must lie on the domain side of curve i,
            // i.e. curve i's winding about probes just off curve j's complement
            // side matches its domain-side value.
            ValidationCheck disj{"disjoint_" + std::to_string(i) + "_about_" + std::to_string(j), false, 0.0, ""};
            try {
                const auto& cj = domain.curves[j];
                const auto& ci = domain.curves[i];
                int want = side_winding(ci, ci.domain_side());
                bool ok = true;
                double min_margin = std::numeric_limits<double>::infinity();
                const double diamj = cj.diameter();
                for (double theta : {0.0, 1.3, 2.7, 4.1, 5.5}) {
                    Complex gp = cj.derivative(theta);
                    Complex normal = Complex(0.0, 1.0) * gp / std::abs(gp);
                    if (cj.domain_side() == CurveSide::Left) normal = -normal;  // complement side
                    Complex probe = cj.point(theta) + 1e-2 * diamj * normal;
                    min_margin = std::min(min_margin, ci.trace_distance(probe));
                    if (winding_number(ci, PlanePoint(probe)) != want) ok = false;
                }
                disj.pass = ok;
                disj.margin = min_margin;
            } catch (const Error& e) {
                disj.pass = false;
                disj.detail = e.what();
            }
            report.checks.push_back(disj);
        }
    }

    // Base point winding signature.
    ValidationCheck base{"base_point_interior", false, 0.0, ""};
    if (domain.base_point.is_infinite()) {
        // Infinity is in the domain iff every curve's domain side is its
        // unbounded side (side winding 0).
        bool ok = true;
        try {
            for (const auto& c : domain.curves)
                if (side_winding(c, c.domain_side()) != 0) ok = false;
        } catch (const Error& e) {
            ok = false;
            base.detail = e.what();
        }
        base.pass = ok && n > 0;
    } else {
        bool ok = n > 0;
        double margin = std::numeric_limits<double>::infinity();
        try {
            for (const auto& c : domain.curves) {
                margin = std::min(margin, c.trace_distance(domain.base_point.value()));
                if (!on_domain_side(c, domain.base_point.value())) ok = false;
            }
        } catch (const Error& e) {
            ok = false;
            base.detail = e.what();
        }
        base.pass = ok;
        base.margin = margin;
    }
    report.checks.push_back(base);

    ValidationCheck conn{"connectivity", n > 0, static_cast<double>(n), ""};
    report.checks.push_back(conn);

    return report;
}

}  // namespace weldfactor
