#pragma once

#include "weldfactor/confmap.hpp"

namespace weldfactor {

struct WeldingOptions {
    int order = -1;            // series order K_w; -1 = adaptive, starting at 1.5x the input order
    double tol_rel = 1e-10;    // residual tolerance relative to weld-curve diameter
    int max_order = 512;       // escalation cap when order is adaptive
};

struct WeldingProblem {
    BoundaryCorrespondence phi;
    WeldingOptions options;
};

struct WeldingSolution {
    PowerSeriesMap f_int;      // disk side, f_int(0) = 0
    LaurentSeriesMap f_ext;    // exterior side, f_ext(inf) = inf, lambda real positive
    AnalyticCurve weld_curve;  // trace of f_int on the unit circle
    double residual = 0.0;     // sup collocation defect on a 4x denser grid
    int newton_iterations = 0;
    int continuation_stages = 1;
};

/// Solve the welding equations F_int(e^{i theta}) = F_ext(e^{i phi(theta)})
/// in the normalisation F_int(0) = 0, F_ext(inf) = inf, lambda = 1. The
/// collocation system is linear in the coefficients; when the cold start
/// misses the tolerance the series order is escalated up to max_order.
WeldingSolution solve_welding(const WeldingProblem& problem);

/// Sup over a grid at least 4x denser than collocation of
/// |F_int(e^{i theta}) - F_ext(e^{i phi(theta)})|.
double welding_residual(const WeldingSolution& solution, const BoundaryCorrespondence& phi);

/// Gauge normalisation: apply the Moebius w -> (w - f_int(0)) / lambda_ext to
/// both sides so the pair lands in the solver's normalisation.
WeldingSolution renormalize_welding(const PowerSeriesMap& f_int, const LaurentSeriesMap& f_ext);

}  // namespace weldfactor
