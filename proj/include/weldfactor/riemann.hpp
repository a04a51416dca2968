#pragma once

#include "weldfactor/confmap.hpp"

namespace weldfactor {

struct RiemannOptions {
    int order = 64;           // series truncation K
    double tol_rel = 1e-9;    // residual tolerance relative to curve diameter
    int max_newton = 60;
    int max_continuation = 8;
};

struct RiemannSolution {
    ConformalMap map;                        // PowerSeriesMap or LaurentSeriesMap
    BoundaryCorrespondence correspondence;   // circle parameter -> curve parameter
    double residual = 0.0;                   // max collocation defect, plane units
    int newton_iterations = 0;
    int continuation_stages = 1;
    std::vector<double> residual_history;    // last Newton sweep
};

/// Conformal map of the unit disk onto the bounded side of the curve with
/// f(0) = centre and f'(0) real positive. The curve must wind once
/// counter-clockwise about the centre.
RiemannSolution riemann_interior(const AnalyticCurve& curve, const PlanePoint& centre,
                                 const RiemannOptions& opts = {});

/// Conformal map of the exterior disk onto the unbounded side of the curve
/// with f(infinity) = infinity and real positive leading coefficient.
RiemannSolution riemann_exterior(const AnalyticCurve& curve, const RiemannOptions& opts = {});

}  // namespace weldfactor
