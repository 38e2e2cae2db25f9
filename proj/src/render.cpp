#include "elastica/render.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "elastica/assembly.hpp"

namespace elastica {

std::string render_svg(const DiscreteState& st, const ModelParams& params,
                       const RenderOptions& opts) {
    if (!st.rho.allFinite() || !st.theta.allFinite())
        throw std::invalid_argument("cannot render a non-finite state");

    const auto pts = reconstruct_curve(st);
    double xmin = pts[0].x(), xmax = xmin, ymin = pts[0].y(), ymax = ymin;
    for (const auto& p : pts) {
        xmin = std::min(xmin, p.x());
        xmax = std::max(xmax, p.x());
        ymin = std::min(ymin, p.y());
        ymax = std::max(ymax, p.y());
    }
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-9});
    const double margin = 0.05 * span;
    const double scale = opts.canvas / (span + 2.0 * margin);
    const double x0 = 0.5 * (xmin + xmax) - 0.5 * (span + 2.0 * margin);
    const double y0 = 0.5 * (ymin + ymax) - 0.5 * (span + 2.0 * margin);

    // SVG y grows downward; flip so the curve keeps its orientation.
    auto px = [&](double x) { return (x - x0) * scale; };
    auto py = [&](double y) { return opts.canvas - (y - y0) * scale; };

    const double rmin = st.rho.minCoeff();
    const double rmax = st.rho.maxCoeff();
    const double denom = rmax - rmin + 1e-12;

    std::ostringstream svg;
    svg.setf(std::ios::fmtflags(0), std::ios::floatfield);
    svg.precision(6);
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.canvas << "\" height=\""
        << opts.canvas + 28 << "\" viewBox=\"0 0 " << opts.canvas << ' ' << opts.canvas + 28
        << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    const int n = st.grid.n;
    for (int i = 0; i < n; ++i) {
        const auto& a = pts[i];
        const auto& b = pts[i + 1];
        const double w =
            opts.base_width * (1.0 + opts.width_gain * (st.rho[i] - rmin) / denom) * scale;
        svg << "<line x1=\"" << px(a.x()) << "\" y1=\"" << py(a.y()) << "\" x2=\"" << px(b.x())
            << "\" y2=\"" << py(b.y()) << "\" stroke=\"#1a466b\" stroke-width=\"" << w
            << "\" stroke-linecap=\"round\"/>\n";
    }
    svg << "<text x=\"8\" y=\"" << opts.canvas + 18
        << "\" font-family=\"monospace\" font-size=\"13\">mu=" << params.mu
        << " E=" << discrete_energy(st, params) << " (m,h)=(" << params.m << ',' << params.h
        << ')';
    if (opts.mode) svg << " mode=" << *opts.mode;
    svg << "</text>\n</svg>\n";
    return svg.str();
}

} // namespace elastica
