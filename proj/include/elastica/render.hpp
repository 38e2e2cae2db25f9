#ifndef ELASTICA_RENDER_HPP
#define ELASTICA_RENDER_HPP

#include <optional>
#include <string>

#include "elastica/model.hpp"
#include "elastica/state.hpp"

namespace elastica {

struct RenderOptions {
    double base_width = 0.03;   // stroke width at the thinnest density
    double width_gain = 2.0;    // extra width at the densest point, relative
    int canvas = 640;           // pixel size of the square viewport
    std::optional<int> mode;    // mode index shown in the caption
};

// SVG of the reconstructed curve; segment i is stroked with width
//   base * (1 + gain * (rho_i - rho_min) / (rho_max - rho_min + eps)),
// so uniform densities give a uniform stroke. Caption lists mu, the energy,
// (m, h) and the mode if given. Throws on non-finite input.
std::string render_svg(const DiscreteState& st, const ModelParams& params,
                       const RenderOptions& opts = {});

} // namespace elastica

#endif
