#ifndef ELASTICA_BIFURCATION_HPP
#define ELASTICA_BIFURCATION_HPP

#include <string>
#include <utility>

#include <Eigen/Dense>

#include "elastica/model.hpp"
#include "elastica/state.hpp"

namespace elastica {

// Kinds of nontrivial kernels of the linearization at the round state.
//   case0:   density and angle perturb together, mode |j| >= 2 (needs m != 0)
//   case1_0: density-only perturbation, m = 0, any mode |j| >= 1
//   case1_1: density perturbation at mode 1 with multiplier response, m != 0
//   case2:   degenerate two-parameter kernel (case1_1 resonant with a case0 mode)
enum class BifCase { case0, case1_0, case1_1, case2, none };

std::string to_string(BifCase c);

struct BifurcationInfo {
    BifCase kind = BifCase::none;
    int j = 0;           // mode index (canonical j >= 1); resonant mode for case2
    double mu0 = 0.0;    // critical penalty value
    int sigma = 0;       // +1 supercritical, -1 subcritical, 0 when undefined
    double amp_sq = 0.0; // leading amplitude squared from the solvability condition
    double e4 = 0.0;     // quartic energy coefficient along the branch
    double m = 0.0;
    double h = 0.0;
};

// Which case (if any) has a kernel at mode j for parameters (m, h).
// j may be negative; it is canonicalized to |j|.
BifurcationInfo classify(double m, double h, int j);

// The case with the largest critical mu over all modes up to j_max;
// kind == none when the trivial state never destabilizes.
BifurcationInfo first_bifurcating_case(double m, double h, int j_max = 8);

// Sextic in (m, h) whose sign decides the direction of the case0 branch:
// supercritical iff positive.
double criticality_indicator(double m, double h);

// The two ratios z = h/m^2 in (0, 2) where the indicator changes sign;
// bisection on [0.4, 0.6] and [1.6, 1.8] to 1e-12.
std::pair<double, double> criticality_roots();

// Leading amplitude squared for the branch of `info`; throws
// DegenerateModeError for case2/none and on a vanishing indicator.
double amplitude_squared(const BifurcationInfo& info);

// Quartic coefficient of the energy expansion along the branch.
double e4_coefficient(const BifurcationInfo& info);

// Kernel direction of the linearization at the round state, sampled on a grid.
struct Mode {
    Eigen::VectorXd rho1;
    Eigen::VectorXd theta1;
    double lambda_mass1 = 0.0;
    double lambda_x1 = 0.0;
    double lambda_y1 = 0.0;
};

// Kernel field with the given amplitude and phase. Rejects zero amplitude and
// case2 (whose kernel is two-dimensional; see mode_case2).
Mode mode(const BifurcationInfo& info, double amplitude, double phase, const Grid& grid);

// Degenerate kernel: both a case0-type mode (amp_j, phase_j at mode info.j)
// and the mode-1 component (amp_1, phase_1) must be supplied.
Mode mode_case2(const BifurcationInfo& info, double amp_j, double phase_j,
                double amp_1, double phase_1, const Grid& grid);

// Quadratic form of the energy at the round state evaluated on a mode, by
// midpoint quadrature. Zero (up to O(ds^2)) exactly at mu = mu0.
double second_variation(const Mode& mode, const ModelParams& params, const Grid& grid);

} // namespace elastica

#endif
