#ifndef ELASTICA_PERTURBATION_HPP
#define ELASTICA_PERTURBATION_HPP

#include <utility>

#include "elastica/bifurcation.hpp"
#include "elastica/trig.hpp"

namespace elastica {

// Coefficient functions of one expansion order: density and angle corrections
// (trig sums, exact) plus the multiplier corrections.
struct ExpansionOrder {
    TrigPoly rho;
    TrigPoly theta;
    double lambda_mass = 0.0;
    double lambda_x = 0.0;
    double lambda_y = 0.0;
};

// Free amplitudes and phases of the expansion. The leading amplitude is fixed
// by the solvability condition (sqrt of info.amp_sq); orders 2 and 3 each
// carry a free kernel component that defaults to zero.
struct ExpansionChoices {
    double phase1 = 0.0;
    double amp2 = 0.0;
    double phase2 = 0.0;
    double amp3 = 0.0;
    double phase3 = 0.0;
};

// Branch expansion around the bifurcation point:
//   u(A) = u0 + A u1 + A^2 u2 + A^3 u3,   mu(A) = mu0 - sigma A^2.
struct Expansion {
    BifurcationInfo info;
    double a1 = 0.0;     // leading amplitude (>= 0 root of amp_sq)
    ExpansionChoices choices;
    ExpansionOrder order1, order2, order3;
    int max_order = 1;
};

// First-order coefficient functions (the kernel mode as trig sums).
ExpansionOrder first_order(const BifurcationInfo& info, double a1, double phase1);

// Second-order coefficient functions. Throws ResonantDenominatorError when a
// coefficient denominator vanishes at these parameters.
ExpansionOrder second_order(const BifurcationInfo& info, double a1,
                            const ExpansionChoices& choices);

// Third-order coefficient functions. Checks the solvability condition for
// (a1, sigma) to absolute tolerance 1e-10 on the bracketed factor and throws
// SolvabilityError otherwise.
ExpansionOrder third_order(const BifurcationInfo& info, double a1,
                           const ExpansionChoices& choices);

// Assemble the expansion up to `order` (1..3) with the solvability amplitude.
Expansion build_expansion(const BifurcationInfo& info, int order,
                          const ExpansionChoices& choices = {});

// Continuous fields of the expansion evaluated at arclength s.
double eval_rho(const Expansion& ex, double A, double s);
double eval_theta(const Expansion& ex, double A, double s); // includes the affine part s
double predicted_mu(const Expansion& ex, double A);

// Expansion sampled on a grid, and the penalty value mu(A) it predicts.
// order in {1,2,3}; A = 0 returns the round state at mu0.
std::pair<DiscreteState, double> predictor(const BifurcationInfo& info, double A,
                                           int order, const Grid& grid,
                                           const ExpansionChoices& choices = {});

// Max-norm of the continuous Euler-Lagrange residual of the expansion at
// amplitude A, evaluated analytically on `samples` points. Decays like
// A^(order+1) when the coefficient functions are correct.
double continuum_residual(const Expansion& ex, double A, int samples = 2048);

} // namespace elastica

#endif
