#include "weldfactor/riemann.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>

namespace weldfactor {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct NewtonOutcome {
    VectorXd x;
    double residual = 0.0;
    int iterations = 0;
    std::vector<double> history;
    bool converged = false;
    bool stalled = false;  // Gauss-Newton stationary point above tolerance
};

// Damped Gauss-Newton with column-scaled least-squares steps.
NewtonOutcome damped_gauss_newton(
    const std::function<void(const VectorXd&, VectorXd&, MatrixXd&)>& assemble, VectorXd x0,
    double tol, int max_iter) {
    NewtonOutcome out;
    VectorXd r;
    MatrixXd J;
    assemble(x0, r, J);
    double res = r.lpNorm<Eigen::Infinity>();
    out.history.push_back(res);
    VectorXd x = std::move(x0);
    for (int it = 0; it < max_iter; ++it) {
        if (res < tol) break;
        VectorXd scale(J.cols());
        for (int c = 0; c < J.cols(); ++c) {
            double n = J.col(c).norm();
            scale(c) = n > 1e-300 ? 1.0 / n : 1.0;
        }
        MatrixXd Js = J * scale.asDiagonal();
        VectorXd step = scale.asDiagonal() * Js.colPivHouseholderQr().solve(-r);
        double t = 1.0;
        bool accepted = false;
        for (int h = 0; h < 12; ++h) {
            VectorXd xn = x + t * step;
            VectorXd rn;
            MatrixXd Jn;
            assemble(xn, rn, Jn);
            double resn = rn.lpNorm<Eigen::Infinity>();
            if (resn < res || resn < tol) {
                x = std::move(xn);
                r = std::move(rn);
                J = std::move(Jn);
                res = resn;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        ++out.iterations;
        out.history.push_back(res);
        if (!accepted) {
            out.stalled = true;
            break;
        }
    }
    out.x = std::move(x);
    out.residual = res;
    out.converged = res < tol;
    return out;
}

// Linear blend from the best-fit circle (t = 0) to the target curve (t = 1).
AnalyticCurve blend_with_circle(const AnalyticCurve& curve, double t) {
    if (t >= 1.0) return curve;
    // Circle proxy: keep c_0 and c_1, drop the rest.
    std::vector<Complex> coeffs = curve.coeffs();
    std::vector<Complex> out(coeffs.size());
    for (int k = curve.k_min(); k <= curve.k_max(); ++k) {
        Complex base = (k == 0 || k == 1) ? curve.coeff(k) : Complex(0.0);
        out[k - curve.k_min()] = (1.0 - t) * base + t * curve.coeff(k);
    }
    return AnalyticCurve(curve.k_min(), std::move(out), curve.domain_side());
}

BoundaryCorrespondence correspondence_from_sigmas(const std::vector<double>& sigma, int order) {
    // Defensive unwrap: the Newton solution keeps node continuity, but project
    // from a continuous lift regardless.
    std::vector<double> lift(sigma.size());
    lift[0] = sigma[0];
    for (size_t j = 1; j < sigma.size(); ++j) {
        double s = sigma[j];
        s += kTwoPi * std::round((lift[j - 1] - s) / kTwoPi);
        lift[j] = s;
    }
    return BoundaryCorrespondence::from_samples(lift, order);
}

}  // namespace

RiemannSolution riemann_interior(const AnalyticCurve& curve, const PlanePoint& centre,
                                 const RiemannOptions& opts) {
    if (centre.is_infinite()) throw Error(ErrorCode::BadNormalization, "interior centre must be finite");
    const Complex zc = centre.value();
    const double diam = curve.diameter();
    if (curve.derivative_margin() <= 1e-8 * diam)
        throw Error(ErrorCode::BadNormalization, "curve derivative margin too small");
    int w;
    try {
        w = winding_number(curve, centre);
    } catch (const Error&) {
        throw Error(ErrorCode::BadNormalization, "centre too close to the curve trace");
    }
    if (w != 1)
        throw Error(ErrorCode::BadNormalization,
                    "centre is not interior to a counter-clockwise curve (winding " + std::to_string(w) + ")");

    const int K = opts.order;
    const int M = 2 * K + 1;
    const double tol = opts.tol_rel * diam;
    const int ncoef = 2 * K - 1;  // a_1 real, a_2..a_K complex
    const int nx = ncoef + M;

    auto angles = detail::uniform_angles(M);

    // Initial guess: round map about the centre.
    double radius = 0.0;
    for (double th : angles) radius += std::abs(curve.point(th) - zc);
    radius /= M;
    double phase = std::arg(curve.coeff(1) != Complex(0.0) ? curve.coeff(1) : Complex(1.0));

    VectorXd x = VectorXd::Zero(nx);
    x(0) = radius;
    for (int j = 0; j < M; ++j) x(ncoef + j) = angles[j] - phase;

    RiemannSolution sol;
    int stages_used = 1;
    NewtonOutcome outcome;

    auto solve_stage = [&](const AnalyticCurve& target, VectorXd start, int max_iter) {
        auto assemble = [&](const VectorXd& v, VectorXd& r, MatrixXd& J) {
            r.resize(2 * M);
            J.setZero(2 * M, nx);
            for (int j = 0; j < M; ++j) {
                double th = angles[j];
                Complex zeta(std::cos(th), std::sin(th));
                // f(zeta) = zc + a_1 zeta + ... + a_K zeta^K
                Complex f = zc;
                Complex zp = zeta;
                f += v(0) * zp;
                // columns: a_1 (real) then Re/Im a_k
                J(2 * j, 0) = zp.real();
                J(2 * j + 1, 0) = zp.imag();
                for (int k = 2; k <= K; ++k) {
                    zp *= zeta;
                    Complex ak(v(2 * k - 3), v(2 * k - 2));
                    f += ak * zp;
                    J(2 * j, 2 * k - 3) = zp.real();
                    J(2 * j + 1, 2 * k - 3) = zp.imag();
                    J(2 * j, 2 * k - 2) = -zp.imag();
                    J(2 * j + 1, 2 * k - 2) = zp.real();
                }
                double sg = v(ncoef + j);
                Complex g = target.point(sg);
                Complex gp = target.derivative(sg);
                Complex res = f - g;
                r(2 * j) = res.real();
                r(2 * j + 1) = res.imag();
                J(2 * j, ncoef + j) = -gp.real();
                J(2 * j + 1, ncoef + j) = -gp.imag();
            }
        };
        return damped_gauss_newton(assemble, std::move(start), tol, max_iter);
    };

    // A stalled Gauss-Newton with a small residual is the series truncation
    // floor, not a solve failure; keep it and report the achieved residual.
    auto at_floor = [&](const NewtonOutcome& o) { return o.stalled && o.residual < 1e-3 * diam; };

    outcome = solve_stage(curve, x, opts.max_newton);
    if (!outcome.converged && !at_floor(outcome)) {
        // Identity-to-target continuation in curve shape.
        const int S = std::max(2, opts.max_continuation);
        VectorXd warm = x;
        bool ok = true;
        for (int s = 1; s <= S; ++s) {
            double t = static_cast<double>(s) / S;
            auto stage = blend_with_circle(curve, t);
            outcome = solve_stage(stage, warm, opts.max_newton);
            ++stages_used;
            bool last = (s == S);
            if (!(outcome.converged || (last && at_floor(outcome)))) {
                ok = false;
                break;
            }
            warm = outcome.x;
        }
        if (!ok)
            throw Error(ErrorCode::NoConvergence,
                        "interior Riemann solve failed at continuation stage " + std::to_string(stages_used));
    }

    const VectorXd& v = outcome.x;
    if (v(0) <= 0.0) throw Error(ErrorCode::NoConvergence, "normalisation f'(0) > 0 violated");

    std::vector<Complex> coeffs(K + 1);
    coeffs[0] = zc;
    coeffs[1] = Complex(v(0), 0.0);
    for (int k = 2; k <= K; ++k) coeffs[k] = Complex(v(2 * k - 3), v(2 * k - 2));
    std::vector<double> sigma(M);
    for (int j = 0; j < M; ++j) sigma[j] = v(ncoef + j);

    sol.map = ConformalMap(PowerSeriesMap(std::move(coeffs)));
    sol.correspondence = correspondence_from_sigmas(sigma, K);
    sol.residual = outcome.residual;
    sol.newton_iterations = outcome.iterations;
    sol.continuation_stages = stages_used;
    sol.residual_history = outcome.history;
    return sol;
}

RiemannSolution riemann_exterior(const AnalyticCurve& curve, const RiemannOptions& opts) {
    const double diam = curve.diameter();
    if (curve.derivative_margin() <= 1e-8 * diam)
        throw Error(ErrorCode::BadNormalization, "curve derivative margin too small");

    const int K = opts.order;
    const int M = 2 * K + 3;
    const double tol = opts.tol_rel * diam;
    const int ncoef = 1 + 2 * (K + 1);  // lambda real, c_0..c_{-K} complex
    const int nx = ncoef + M;

    auto angles = detail::uniform_angles(M);

    Complex centroid(0.0);
    for (double th : angles) centroid += curve.point(th);
    centroid /= static_cast<double>(M);
    if (winding_number(curve, PlanePoint(centroid)) != 1)
        throw Error(ErrorCode::BadNormalization, "exterior solve expects a counter-clockwise curve");
    double radius = 0.0;
    for (double th : angles) radius += std::abs(curve.point(th) - centroid);
    radius /= M;
    double phase = std::arg(curve.coeff(1) != Complex(0.0) ? curve.coeff(1) : Complex(1.0));

    VectorXd x = VectorXd::Zero(nx);
    x(0) = radius;
    x(1) = centroid.real();
    x(2) = centroid.imag();
    for (int j = 0; j < M; ++j) x(ncoef + j) = angles[j] - phase;

    int stages_used = 1;

    auto solve_stage = [&](const AnalyticCurve& target, VectorXd start, int max_iter) {
        auto assemble = [&](const VectorXd& v, VectorXd& r, MatrixXd& J) {
            r.resize(2 * M);
            J.setZero(2 * M, nx);
            for (int j = 0; j < M; ++j) {
                double th = angles[j];
                Complex zeta(std::cos(th), std::sin(th));
                Complex inv = std::conj(zeta);  // 1/zeta on the unit circle
                Complex f = v(0) * zeta;
                J(2 * j, 0) = zeta.real();
                J(2 * j + 1, 0) = zeta.imag();
                Complex zp(1.0);
                for (int k = 0; k <= K; ++k) {
                    Complex ck(v(1 + 2 * k), v(2 + 2 * k));
                    f += ck * zp;
                    J(2 * j, 1 + 2 * k) = zp.real();
                    J(2 * j + 1, 1 + 2 * k) = zp.imag();
                    J(2 * j, 2 + 2 * k) = -zp.imag();
                    J(2 * j + 1, 2 + 2 * k) = zp.real();
                    zp *= inv;
                }
                double sg = v(ncoef + j);
                Complex g = target.point(sg);
                Complex gp = target.derivative(sg);
                Complex res = f - g;
                r(2 * j) = res.real();
                r(2 * j + 1) = res.imag();
                J(2 * j, ncoef + j) = -gp.real();
                J(2 * j + 1, ncoef + j) = -gp.imag();
            }
        };
        return damped_gauss_newton(assemble, std::move(start), tol, max_iter);
    };

    auto at_floor = [&](const NewtonOutcome& o) { return o.stalled && o.residual < 1e-3 * diam; };

    NewtonOutcome outcome = solve_stage(curve, x, opts.max_newton);
    if (!outcome.converged && !at_floor(outcome)) {
        const int S = std::max(2, opts.max_continuation);
        VectorXd warm = x;
        bool ok = true;
        for (int s = 1; s <= S; ++s) {
            double t = static_cast<double>(s) / S;
            auto stage = blend_with_circle(curve, t);
            outcome = solve_stage(stage, warm, opts.max_newton);
            ++stages_used;
            bool last = (s == S);
            if (!(outcome.converged || (last && at_floor(outcome)))) {
                ok = false;
                break;
            }
            warm = outcome.x;
        }
        if (!ok)
            throw Error(ErrorCode::NoConvergence,
                        "exterior Riemann solve failed at continuation stage " + std::to_string(stages_used));
    }

    const VectorXd& v = outcome.x;
    if (v(0) <= 0.0) throw Error(ErrorCode::NoConvergence, "normalisation lambda > 0 violated");

    std::vector<Complex> coeffs(K + 1);
    for (int k = 0; k <= K; ++k) coeffs[k] = Complex(v(1 + 2 * k), v(2 + 2 * k));
    std::vector<double> sigma(M);
    for (int j = 0; j < M; ++j) sigma[j] = v(ncoef + j);

    RiemannSolution sol;
    sol.map = ConformalMap(LaurentSeriesMap(Complex(v(0), 0.0), std::move(coeffs)));
    sol.correspondence = correspondence_from_sigmas(sigma, K);
    sol.residual = outcome.residual;
    sol.newton_iterations = outcome.iterations;
    sol.continuation_stages = stages_used;
    sol.residual_history = outcome.history;
    return sol;
}

}  // namespace weldfactor
