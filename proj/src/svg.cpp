#include "weldfactor/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace weldfactor {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

}  // namespace

std::string render_svg(const std::vector<PlotCurve>& curves) {
    const int kSamples = 512;
    const double kCanvas = 800.0;

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& pc : curves) {
        for (int j = 0; j < kSamples; ++j) {
            Complex z = pc.curve.point(kTwoPi * j / kSamples);
            xmin = std::min(xmin, z.real());
            xmax = std::max(xmax, z.real());
            ymin = std::min(ymin, z.imag());
            ymax = std::max(ymax, z.imag());
        }
    }
    if (curves.empty()) xmin = ymin = -1.0, xmax = ymax = 1.0;
    double span = std::max({xmax - xmin, ymax - ymin, 1e-9});
    double margin = 0.08 * span;
    span += 2.0 * margin;
    double x0 = 0.5 * (xmin + xmax) - 0.5 * span;
    double y0 = 0.5 * (ymin + ymax) - 0.5 * span;
    auto px = [&](double x) { return (x - x0) / span * kCanvas; };
    auto py = [&](double y) { return kCanvas - (y - y0) / span * kCanvas; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
           "viewBox=\"0 0 800 800\">\n";
    out << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
    for (size_t i = 0; i < curves.size(); ++i) {
        const auto& pc = curves[i];
        out << "<polygon fill=\"none\" stroke=\"" << kPalette[i % 6] << "\" stroke-width=\"1.5\" points=\"";
        for (int j = 0; j < kSamples; ++j) {
            Complex z = pc.curve.point(kTwoPi * j / kSamples);
            if (j) out << ' ';
            out << fmt(px(z.real())) << ',' << fmt(py(z.imag()));
        }
        out << "\"/>\n";
        Complex anchor = pc.curve.point(0.0);
        out << "<text x=\"" << fmt(px(anchor.real()) + 4.0) << "\" y=\"" << fmt(py(anchor.imag()) - 4.0)
            << "\" font-family=\"monospace\" font-size=\"14\" fill=\"" << kPalette[i % 6] << "\">"
            << pc.label << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace weldfactor
