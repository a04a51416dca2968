#pragma once

#include "weldfactor/riemann.hpp"
#include "weldfactor/welding.hpp"

namespace weldfactor {

/// Boundary values of the map under factorisation along one source curve:
/// G(source(theta)) = target(w(theta)).
struct BoundaryDatum {
    AnalyticCurve target;
    BoundaryCorrespondence w;
};

struct FactorizationProblem {
    DomainSpec domain;
    std::vector<BoundaryDatum> boundary_data;              // one per source curve
    std::vector<std::pair<Complex, Complex>> interior_samples;  // (z, G(z))
};

struct FactorizationOptions {
    int order = 64;
    double tol_rel = 1e-8;
    std::vector<int> peel_order;  // original curve indices; empty = descending
    RiemannOptions riemann;
    WeldingOptions welding;
};

struct PeelDiagnostics {
    int original_index = -1;
    int connectivity_before = 0;
    double welding_residual = 0.0;
    int riemann_interior_iterations = 0;
    int riemann_exterior_iterations = 0;
    double phi_projection_defect = 0.0;
    double phi_monotonicity_margin = 0.0;
    double curve_projection_defect = 0.0;
};

struct PeelState {
    std::vector<AnalyticCurve> curves;
    std::vector<BoundaryDatum> data;
    std::vector<int> original_index;
    PlanePoint base_point;
    std::vector<ConformalMap> factors;  // most recently peeled first
    std::vector<PeelDiagnostics> diagnostics;

    int connectivity() const { return static_cast<int>(curves.size()); }
};

struct FactorizationResult {
    std::vector<ConformalMap> factors;  // g_1 ... g_N, applied right-to-left
    std::vector<PeelDiagnostics> diagnostics;
    std::vector<int> connectivity_trace;  // N, N-1, ..., 1
    double moebius_fit_residual = 0.0;
};

/// Assign each source curve the target curve nearest (max-min distance) to its
/// boundary-image samples; the runner-up must be at least 10x farther.
std::vector<int> match_components(const DomainSpec& domain,
                                  const std::vector<std::vector<Complex>>& images,
                                  const DomainSpec& targets);

PeelState initial_state(const FactorizationProblem& problem);

/// One induction step: uniformise the two-chart surface glued along curve
/// `pos` (index into the active state) via a welding solve, extract the factor
/// conformal on the curve's exterior, and push the remaining boundary data
/// forward. Connectivity drops by one.
std::pair<ConformalMap, PeelState> peel_factor(const PeelState& state, int pos,
                                               const FactorizationOptions& opts);

FactorizationResult factorize(const FactorizationProblem& problem,
                              const FactorizationOptions& opts = {});

struct VerificationMetrics {
    double max_interior_error = 0.0;
    double mean_interior_error = 0.0;
    std::vector<double> boundary_defects;          // per source curve
    std::vector<InjectivityReport> factor_reports;
};

VerificationMetrics verify_factorization(const FactorizationResult& result,
                                         const FactorizationProblem& problem);

/// Least-squares Moebius fit m(z_j) ~ w_j via the homogeneous 4-parameter
/// form; returns the map and the max fit residual.
std::pair<MoebiusMap, double> fit_moebius(const std::vector<Complex>& z,
                                          const std::vector<Complex>& w);

}  // namespace weldfactor
