#pragma once

#include <string>
#include <vector>

#include "weldfactor/curves.hpp"

namespace weldfactor {

struct PlotCurve {
    AnalyticCurve curve;
    std::string label;
};

/// Deterministic static SVG: fixed 800x800 canvas, each curve a closed
/// polyline at 512 samples with a text label; byte-identical for identical
/// input.
std::string render_svg(const std::vector<PlotCurve>& curves);

}  // namespace weldfactor
