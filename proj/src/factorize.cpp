#include "weldfactor/factorize.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace weldfactor {

namespace {

// Fourier projection of a mapped curve with aliasing defect measured on an
// offset grid.
std::pair<AnalyticCurve, double> project_curve(const std::function<Complex(double)>& f, int order,
                                               CurveSide side) {
    const int m = std::max(4 * (order + 1), 256);
    std::vector<Complex> vals(m);
    for (int j = 0; j < m; ++j) vals[j] = f(kTwoPi * j / m);
    auto coeffs = detail::fourier_project(vals, order);
    AnalyticCurve curve(-order, std::move(coeffs), side);
    double defect = 0.0;
    for (int j = 0; j < m; ++j) {
        double th = kTwoPi * (j + 0.5) / m;
        defect = std::max(defect, std::abs(curve.point(th) - f(th)));
    }
    return {curve, defect};
}

// Correspondence projection with defect on an offset grid.
std::pair<BoundaryCorrespondence, double> project_correspondence(
    const std::function<double(double)>& eta, int order) {
    const int m = std::max(4 * (order + 1), 256);
    std::vector<double> lift(m);
    for (int j = 0; j < m; ++j) lift[j] = eta(kTwoPi * j / m);
    // Re-branch to a continuous lift.
    for (int j = 1; j < m; ++j)
        lift[j] += kTwoPi * std::round((lift[j - 1] - lift[j]) / kTwoPi);
    auto bc = BoundaryCorrespondence::from_samples(lift, order);
    double defect = 0.0;
    for (int j = 0; j < m; ++j) {
        double th = kTwoPi * (j + 0.5) / m;
        double raw = eta(th);
        double fit = bc.eval(th);
        double diff = raw - fit;
        diff -= kTwoPi * std::round(diff / kTwoPi);
        defect = std::max(defect, std::abs(diff));
    }
    return {bc, defect};
}

Complex hole_centre(const AnalyticCurve& curve) {
    // Mean of the trace; falls back to a winding-certified interior point.
    const int m = curve.geometric_samples();
    Complex c(0.0);
    for (int j = 0; j < m; ++j) c += curve.point(kTwoPi * j / m);
    c /= static_cast<double>(m);
    try {
        if (winding_number(curve, PlanePoint(c)) == 1) return c;
    } catch (const Error&) {
    }
    // Probe inward along the left normal of a few points.
    const double diam = curve.diameter();
    for (double th : {0.0, 1.5, 3.0, 4.5}) {
        Complex gp = curve.derivative(th);
        Complex normal = Complex(0.0, 1.0) * gp / std::abs(gp);
        for (double eps : {0.2, 0.1, 0.05}) {
            Complex probe = curve.point(th) + eps * diam * normal;
            try {
                if (winding_number(curve, PlanePoint(probe)) == 1) return probe;
            } catch (const Error&) {
            }
        }
    }
    throw Error(ErrorCode::BadNormalization, "no interior centre found for the hole curve");
}

}  // namespace

std::vector<int> match_components(const DomainSpec& domain,
                                  const std::vector<std::vector<Complex>>& images,
                                  const DomainSpec& targets) {
    const int n = static_cast<int>(domain.curves.size());
    if (static_cast<int>(images.size()) != n || static_cast<int>(targets.curves.size()) != n)
        throw Error(ErrorCode::NotBijective, "component counts disagree");

    double scale = 0.0;
    for (const auto& t : targets.curves) scale = std::max(scale, t.diameter());

    std::vector<int> perm(n, -1);
    for (int i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        double second = best;
        int who = -1;
        for (int t = 0; t < n; ++t) {
            // max over image samples of the distance to the target trace
            double d = 0.0;
            for (Complex z : images[i]) d = std::max(d, targets.curves[t].trace_distance(z));
            if (d < best) {
                second = best;
                best = d;
                who = t;
            } else if (d < second) {
                second = d;
            }
        }
        if (n > 1) {
            double margin = second / std::max(best, 1e-12 * scale);
            if (margin < 10.0)
                throw Error(ErrorCode::AmbiguousMatch,
                            "separation margin " + std::to_string(margin) + " for component " +
                                std::to_string(i));
        }
        perm[i] = who;
    }
    std::vector<int> seen(n, 0);
    for (int p : perm)
        if (++seen[p] > 1) throw Error(ErrorCode::NotBijective, "two sources matched one target");
    return perm;
}

PeelState initial_state(const FactorizationProblem& problem) {
    PeelState st;
    st.curves = problem.domain.curves;
    st.data = problem.boundary_data;
    st.base_point = problem.domain.base_point;
    st.original_index.resize(st.curves.size());
    std::iota(st.original_index.begin(), st.original_index.end(), 0);
    return st;
}

std::pair<ConformalMap, PeelState> peel_factor(const PeelState& state, int pos,
                                               const FactorizationOptions& opts) {
    if (state.curves.empty()) throw Error(ErrorCode::EmptyList, "peel on an empty state");
    if (pos < 0 || pos >= state.connectivity())
        throw Error(ErrorCode::BoundViolated, "peel index out of range");

    const AnalyticCurve& source = state.curves[pos];
    const AnalyticCurve& target = state.data[pos].target;
    const BoundaryCorrespondence& w = state.data[pos].w;

    PeelDiagnostics diag;
    diag.original_index = state.original_index[pos];
    diag.connectivity_before = state.connectivity();

    RiemannOptions ropts = opts.riemann;
    ropts.order = opts.order;
    ropts.tol_rel = std::min(ropts.tol_rel, opts.tol_rel);

    // (a) fill the target hole: disk onto the bounded side of the target curve
    RiemannSolution r = riemann_interior(target, PlanePoint(hole_centre(target)), ropts);
    diag.riemann_interior_iterations = r.newton_iterations;

    // (b) exterior chart of the source curve
    RiemannSolution q = riemann_exterior(source, ropts);
    diag.riemann_exterior_iterations = q.newton_iterations;

    // (c) gluing circle map: disk-chart angle -> exterior-chart angle so that
    // F_int(e^{i theta}) = F_ext(e^{i phi(theta)}) expresses chart consistency.
    const BoundaryCorrespondence& rho = r.correspondence;
    const BoundaryCorrespondence& tau = q.correspondence;
    auto phi_raw = [&](double theta) { return tau.invert(w.invert(rho.eval(theta))); };
    auto [phi, phi_defect] = project_correspondence(phi_raw, opts.order);
    diag.phi_projection_defect = phi_defect;
    diag.phi_monotonicity_margin = phi.monotonicity_margin();
    if (phi_defect > 1e-3)
        throw Error(ErrorCode::ProjectionDefect,
                    "gluing map projection defect " + std::to_string(phi_defect));
    if (!phi.is_monotone())
        throw Error(ErrorCode::NonMonotoneInput, "gluing map lost monotonicity");

    // (d) uniformise by welding
    WeldingProblem wp{phi, opts.welding};
    if (wp.options.order < 0) wp.options.order = (3 * opts.order) / 2;
    WeldingSolution weld = solve_welding(wp);
    diag.welding_residual = weld.residual;

    // (e) the factor conformal on the exterior of the source curve
    ConformalMap q_map = q.map;
    ConformalMap factor = compose({ConformalMap(weld.f_ext), inverted(q_map)});
    DomainSpec factor_domain;
    factor_domain.curves = {source};
    factor_domain.base_point = state.base_point;
    factor = factor.with_domain(factor_domain);

    // (f) push the remaining curves forward; correspondences ride along the
    // carried parametrisation, so w'_i = w_i exactly.
    PeelState next;
    next.base_point = state.base_point.is_infinite()
                          ? PlanePoint::infinity()
                          : eval_map(factor, state.base_point);
    const double tol_proj = opts.tol_rel * std::max(1.0, target.diameter());
    for (int i = 0; i < state.connectivity(); ++i) {
        if (i == pos) continue;
        const AnalyticCurve& ci = state.curves[i];
        auto [pushed, defect] = project_curve(
            [&](double th) { return eval_map(factor, ci.point(th)); }, opts.order, ci.domain_side());
        diag.curve_projection_defect = std::max(diag.curve_projection_defect, defect);
        if (defect > std::max(tol_proj, 1e-8))
            throw Error(ErrorCode::ProjectionDefect,
                        "pushed curve " + std::to_string(state.original_index[i]) +
                            " projection defect " + std::to_string(defect));
        next.curves.push_back(pushed);
        next.data.push_back(state.data[i]);
        next.original_index.push_back(state.original_index[i]);
    }
    next.factors = state.factors;
    next.factors.insert(next.factors.begin(), factor);
    next.diagnostics = state.diagnostics;
    next.diagnostics.push_back(diag);
    return {factor, next};
}

std::pair<MoebiusMap, double> fit_moebius(const std::vector<Complex>& z,
                                          const std::vector<Complex>& w) {
    const int m = static_cast<int>(z.size());
    if (m < 3) throw Error(ErrorCode::BoundViolated, "Moebius fit needs at least 3 samples");
    // a z + b - c w z - d w = 0, homogeneous in (a, b, c, d).
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * m, 8);
    for (int j = 0; j < m; ++j) {
        auto put = [&](int col, Complex v) {
            A(2 * j, 2 * col) = v.real();
            A(2 * j, 2 * col + 1) = -v.imag();
            A(2 * j + 1, 2 * col) = v.imag();
            A(2 * j + 1, 2 * col + 1) = v.real();
        };
        put(0, z[j]);
        put(1, Complex(1.0));
        put(2, -w[j] * z[j]);
        put(3, -w[j]);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinV);
    Eigen::VectorXd v = svd.matrixV().col(7);
    Complex ca(v(0), v(1)), cb(v(2), v(3)), cc(v(4), v(5)), cd(v(6), v(7));
    auto max_resid = [&](const MoebiusMap& cand) {
        double r = 0.0;
        for (int j = 0; j < m; ++j) {
            PlanePoint img = cand.apply(PlanePoint(z[j]));
            r = std::max(r, img.is_infinite() ? std::numeric_limits<double>::infinity()
                                              : std::abs(img.value() - w[j]));
        }
        return r;
    };
    MoebiusMap mb(ca, cb, cc, cd);
    double resid = max_resid(mb);
    // A near-zero fitted denominator coefficient is noise that plants a
    // spurious pole at a huge finite point; prefer the exactly affine
    // representative whenever it explains the data just as well.
    if (std::abs(cc) != 0.0 && std::abs(ca) > 0.0) {
        double wmax = 0.0;
        for (Complex q : w) wmax = std::max(wmax, std::abs(q));
        MoebiusMap affine(ca, cb, Complex(0.0), cd);
        double ra = max_resid(affine);
        if (ra <= 20.0 * resid + 1e-10 * std::max(wmax, 1.0)) return {affine, ra};
    }
    return {mb, resid};
}

FactorizationResult factorize(const FactorizationProblem& problem, const FactorizationOptions& opts) {
    auto report = validate_domain(problem.domain);
    if (!report.accepted()) throw Error(ErrorCode::DomainInvalid, "source domain failed validation");
    const int n = static_cast<int>(problem.domain.curves.size());
    if (static_cast<int>(problem.boundary_data.size()) != n)
        throw Error(ErrorCode::DomainInvalid, "boundary data count mismatch");
    for (const auto& bd : problem.boundary_data)
        if (!bd.w.is_monotone())
            throw Error(ErrorCode::NonMonotoneInput, "boundary correspondence not monotone");

    // Targets form a domain of the same connectivity; the base point is any
    // certified interior sample.
    DomainSpec targets;
    for (const auto& bd : problem.boundary_data) targets.curves.push_back(bd.target);
    auto tpts = interior_samples(targets, 1);
    if (tpts.empty()) throw Error(ErrorCode::DomainInvalid, "target domain has no interior samples");
    targets.base_point = PlanePoint(tpts[0]);
    auto treport = validate_domain(targets);
    if (!treport.accepted()) throw Error(ErrorCode::DomainInvalid, "target domain failed validation");

    // Component matching on the boundary images (Hausdorff-nearest with margin);
    // paired input must come back as the identity assignment.
    std::vector<std::vector<Complex>> images(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < 32; ++j) {
            double th = kTwoPi * j / 32;
            images[i].push_back(problem.boundary_data[i].target.point(problem.boundary_data[i].w.eval(th)));
        }
    }
    auto perm = match_components(problem.domain, images, targets);
    for (int i = 0; i < n; ++i)
        if (perm[i] != i)
            throw Error(ErrorCode::NotBijective, "boundary data pairs sources with the wrong targets");

    std::vector<int> order = opts.peel_order;
    if (order.empty()) {
        order.resize(n);
        for (int i = 0; i < n; ++i) order[i] = n - 1 - i;
    }
    if (static_cast<int>(order.size()) != n)
        throw Error(ErrorCode::BoundViolated, "peel order must list every curve exactly once");

    FactorizationResult result;
    PeelState state = initial_state(problem);
    result.connectivity_trace.push_back(state.connectivity());

    // Keep enough boundary samples of the last peel to fit the residual Moebius.
    std::vector<Complex> final_z, final_w;
    for (int step = 0; step < n; ++step) {
        int original = order[step];
        auto it = std::find(state.original_index.begin(), state.original_index.end(), original);
        if (it == state.original_index.end())
            throw Error(ErrorCode::BoundViolated, "peel order repeats a curve");
        int pos = static_cast<int>(it - state.original_index.begin());

        AnalyticCurve source = state.curves[pos];
        BoundaryDatum datum = state.data[pos];
        auto [factor, next] = peel_factor(state, pos, opts);

        if (step == n - 1) {
            const int m = 32;
            for (int j = 0; j < m; ++j) {
                double th = kTwoPi * j / m;
                final_z.push_back(eval_map(factor, source.point(th)));
                final_w.push_back(datum.target.point(datum.w.eval(th)));
            }
        }
        state = std::move(next);
        result.connectivity_trace.push_back(state.connectivity());
    }

    auto [gauge, fit_resid] = fit_moebius(final_z, final_w);
    result.moebius_fit_residual = fit_resid;
    double scale = problem.boundary_data.back().target.diameter();
    if (!(fit_resid < 1e-4 * std::max(scale, 1.0)))
        throw Error(ErrorCode::NoConvergence,
                    "residual boundary data is not Moebius (fit residual " +
                        std::to_string(fit_resid) + ")");

    // Absorb the uniformising gauge into the leftmost factor, keeping its
    // certified domain.
    ConformalMap g1 = state.factors.front();
    auto dom = g1.domain();
    ConformalMap absorbed = compose({ConformalMap(gauge), g1});
    if (dom) absorbed = absorbed.with_domain(*dom);
    state.factors.front() = absorbed;

    result.factors = state.factors;
    result.diagnostics = state.diagnostics;
    return result;
}

VerificationMetrics verify_factorization(const FactorizationResult& result,
                                         const FactorizationProblem& problem) {
    VerificationMetrics metrics;
    ConformalMap composed = compose(result.factors);

    double sum = 0.0;
    for (const auto& [z, gz] : problem.interior_samples) {
        double err = std::abs(eval_map(composed, z) - gz);
        metrics.max_interior_error = std::max(metrics.max_interior_error, err);
        sum += err;
    }
    if (!problem.interior_samples.empty())
        metrics.mean_interior_error = sum / static_cast<double>(problem.interior_samples.size());

    for (size_t i = 0; i < problem.boundary_data.size(); ++i) {
        const auto& c = problem.domain.curves[i];
        const auto& bd = problem.boundary_data[i];
        double defect = 0.0;
        const int m = 64;
        for (int j = 0; j < m; ++j) {
            double th = kTwoPi * j / m;
            defect = std::max(defect,
                              std::abs(eval_map(composed, c.point(th)) - bd.target.point(bd.w.eval(th))));
        }
        metrics.boundary_defects.push_back(defect);
    }

    for (const auto& f : result.factors) {
        if (f.domain())
            metrics.factor_reports.push_back(verify_injective(f, *f.domain()));
        else
            metrics.factor_reports.push_back(InjectivityReport{});
    }
    return metrics;
}

}  // namespace weldfactor
