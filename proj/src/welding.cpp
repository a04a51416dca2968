#include "weldfactor/welding.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>

namespace {
std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}
}  // namespace

namespace weldfactor {

namespace {

struct StageResult {
    std::vector<Complex> a;  // a_1..a_K
    std::vector<Complex> c;  // c_0..c_{-K}
    double node_residual = 0.0;
};

// The collocation equations are linear in the coefficients once phi and the
// normalisation lambda = 1 are fixed; one column-scaled least-squares solve
// is a full Newton step from any start.
StageResult solve_stage(const BoundaryCorrespondence& phi, int K, double sv_threshold) {
    // Oversampled least squares: the square collocation system develops
    // near-null directions (high modes aliasing across the two charts) whose
    // contamination only shows up between nodes; a denser grid pins them down.
    const int M = 4 * (2 * K + 1);
    const int nx = 2 * K + 2 * (K + 1);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * M, nx);
    Eigen::VectorXd b(2 * M);
    for (int j = 0; j < M; ++j) {
        double th = kTwoPi * j / M;
        double ph = phi.eval(th);
        Complex zeta(std::cos(th), std::sin(th));
        Complex omega(std::cos(ph), std::sin(ph));
        Complex zp = zeta;
        for (int k = 1; k <= K; ++k) {
            A(2 * j, 2 * (k - 1)) = zp.real();
            A(2 * j + 1, 2 * (k - 1)) = zp.imag();
            A(2 * j, 2 * (k - 1) + 1) = -zp.imag();
            A(2 * j + 1, 2 * (k - 1) + 1) = zp.real();
            zp *= zeta;
        }
        Complex wp(1.0);
        Complex winv = std::conj(omega);
        for (int k = 0; k <= K; ++k) {
            int col = 2 * K + 2 * k;
            A(2 * j, col) = -wp.real();
            A(2 * j + 1, col) = -wp.imag();
            A(2 * j, col + 1) = wp.imag();
            A(2 * j + 1, col + 1) = -wp.real();
            wp *= winv;
        }
        b(2 * j) = omega.real();
        b(2 * j + 1) = omega.imag();
    }
    Eigen::VectorXd scale(nx);
    for (int ccol = 0; ccol < nx; ++ccol) {
        double n = A.col(ccol).norm();
        scale(ccol) = n > 1e-300 ? 1.0 / n : 1.0;
    }
    Eigen::MatrixXd As = A * scale.asDiagonal();
    // Truncated-SVD least squares: the two-chart collocation basis develops
    // near-null directions as K grows; the plain LS solution blows up along
    // them and fills the weld curve with junk. Dropping singular values below
    // a relative floor keeps the minimal-norm representative instead.
    Eigen::BDCSVD<Eigen::MatrixXd> svd(As, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(sv_threshold);
    Eigen::VectorXd x = scale.asDiagonal() * svd.solve(b);

    StageResult out;
    out.a.resize(K);
    for (int k = 0; k < K; ++k) out.a[k] = Complex(x(2 * k), x(2 * k + 1));
    out.c.resize(K + 1);
    for (int k = 0; k <= K; ++k) out.c[k] = Complex(x(2 * K + 2 * k), x(2 * K + 2 * k + 1));
    out.node_residual = (A * x - b).lpNorm<Eigen::Infinity>();
    return out;
}

WeldingSolution assemble_solution(const StageResult& s, int K) {
    WeldingSolution sol;
    std::vector<Complex> ai(K + 1, Complex(0.0));
    for (int k = 1; k <= K; ++k) ai[k] = s.a[k - 1];
    sol.f_int = PowerSeriesMap(std::move(ai));
    sol.f_ext = LaurentSeriesMap(Complex(1.0), s.c);
    sol.weld_curve = sol.f_int.boundary_curve(CurveSide::Left);
    return sol;
}

}  // namespace

double welding_residual(const WeldingSolution& solution, const BoundaryCorrespondence& phi) {
    const int K = std::max<int>(solution.f_int.coeffs.size(), solution.f_ext.coeffs.size());
    // denser than, and not aligned with, the collocation grid
    const int m = 8 * (2 * K + 1) + 1;
    double worst = 0.0;
    for (int j = 0; j < m; ++j) {
        double th = kTwoPi * j / m;
        double ph = phi.eval(th);
        Complex zi(std::cos(th), std::sin(th));
        Complex ze(std::cos(ph), std::sin(ph));
        worst = std::max(worst, std::abs(solution.f_int.eval(zi) - solution.f_ext.eval(ze)));
    }
    return worst;
}

WeldingSolution solve_welding(const WeldingProblem& problem) {
    const BoundaryCorrespondence& phi = problem.phi;
    if (!phi.is_monotone())
        throw Error(ErrorCode::NonMonotoneInput,
                    "gluing map derivative margin " + std::to_string(phi.monotonicity_margin()));

    int K = problem.options.order;
    const bool fixed_order = K > 0;
    if (K < 0) K = std::max(16, (3 * std::max(phi.order(), 2) + 1) / 2);

    auto attempt = [&](int order) {
        // a small ladder of singular-value floors; data noise in phi decides
        // which one wins, judged by the off-grid residual
        WeldingSolution best;
        double best_res = -1.0;
        for (double tau : {1e-12, 1e-9, 1e-7}) {
            StageResult s = solve_stage(phi, order, tau);
            WeldingSolution sol = assemble_solution(s, order);
            sol.residual = welding_residual(sol, phi);
            sol.newton_iterations = 1;
            if (best_res < 0.0 || sol.residual < best_res) {
                best_res = sol.residual;
                best = std::move(sol);
            }
            double d = best.weld_curve.diameter();
            if (best_res < problem.options.tol_rel * std::max(d, 1e-6)) break;
        }
        return best;
    };

    WeldingSolution sol = attempt(K);
    double diam = sol.weld_curve.diameter();
    double tol = problem.options.tol_rel * std::max(diam, 1e-6);
    int stages = 1;
    // Residual above tolerance means the series is truncated too early;
    // escalate the order while it keeps paying (the system is linear,
    // nothing else to vary), and keep the best solution seen.
    while (!fixed_order && sol.residual >= tol && 2 * K <= problem.options.max_order) {
        K *= 2;
        WeldingSolution next = attempt(K);
        ++stages;
        if (next.residual >= 0.5 * sol.residual) {
            if (next.residual < sol.residual) sol = std::move(next);
            break;  // stagnating: we are at the data-noise floor
        }
        sol = std::move(next);
        diam = sol.weld_curve.diameter();
        tol = problem.options.tol_rel * std::max(diam, 1e-6);
    }
    diam = sol.weld_curve.diameter();
    tol = problem.options.tol_rel * std::max(diam, 1e-6);
    // a stagnated residual well below the curve scale is the data-noise
    // floor, not a solve failure
    if (sol.residual >= tol && sol.residual >= 1e-5 * diam)
        throw Error(ErrorCode::NoConvergence,
                    "welding residual " + sci(sol.residual) + " at order " + std::to_string(K));
    sol.continuation_stages = stages;

    std::string why;
    if (!sol.weld_curve.is_valid(&why))
        throw Error(ErrorCode::NoConvergence, "weld curve invalid: " + why);
    return sol;
}

WeldingSolution renormalize_welding(const PowerSeriesMap& f_int, const LaurentSeriesMap& f_ext) {
    Complex delta = f_int.coeffs.empty() ? Complex(0.0) : f_int.coeffs[0];
    Complex lam = f_ext.lambda;
    if (std::abs(lam) == 0.0) throw Error(ErrorCode::BadNormalization, "exterior map has zero leading coefficient");
    WeldingSolution sol;
    std::vector<Complex> ai = f_int.coeffs;
    for (auto& a : ai) a /= lam;
    if (!ai.empty()) ai[0] = Complex(0.0);  // a_0 = (delta - delta) / lam
    sol.f_int = PowerSeriesMap(std::move(ai));
    std::vector<Complex> c = f_ext.coeffs;
    for (auto& ck : c) ck /= lam;
    if (!c.empty()) c[0] -= delta / lam;
    sol.f_ext = LaurentSeriesMap(Complex(1.0), std::move(c));
    sol.weld_curve = sol.f_int.boundary_curve(CurveSide::Left);
    return sol;
}

}  // namespace weldfactor
