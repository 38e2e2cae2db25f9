#ifndef ELASTICA_MODEL_HPP
#define ELASTICA_MODEL_HPP

#include <utility>

#include "elastica/state.hpp"

namespace elastica {

// Density-modulated bending stiffness
//   beta(rho) = 1 + m (rho - 1) + (h/2) (rho - 1)^2
// around the normalized circle (length = mass = 2*pi, rho0 = kappa0 = 1).
// mu is the density gradient penalty of the energy.
struct ModelParams {
    double m = 0.0;
    double h = 0.0;
    double mu = 0.0;

    double beta(double rho) const {
        const double d = rho - 1.0;
        return 1.0 + m * d + 0.5 * h * d * d;
    }
    double beta_prime(double rho) const { return m + h * (rho - 1.0); }
    double beta_second() const { return h; }

    // The energy stays coercive-from-below in the interesting regime only for
    // h <= 2 m^2; above that the quadratic profile is convex everywhere and
    // no bifurcation occurs.
    bool nonconvex() const { return h <= 2.0 * m * m; }
};

// Positivity guard for beta; assembly refuses states whose stiffness falls
// to this floor or below.
struct BetaFloor {
    double floor = 1e-8;
};

// Round unit-speed circle with uniform density; solves the Euler-Lagrange
// system for every mu with multipliers (-m/2, 0, 0).
DiscreteState trivial_state(const ModelParams& params, const Grid& grid);

// (rho, theta, lambda) -> (2 - rho, theta, (-lambda_mass, lambda_x, lambda_y))
// maps solutions of the (m, h) model to solutions of the (-m, h) model.
// Involution: applying it twice restores the input.
std::pair<DiscreteState, ModelParams> symmetry_transform(const DiscreteState& st,
                                                         const ModelParams& params);

} // namespace elastica

#endif
