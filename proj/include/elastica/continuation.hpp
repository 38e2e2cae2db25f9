#ifndef ELASTICA_CONTINUATION_HPP
#define ELASTICA_CONTINUATION_HPP

#include <string>
#include <vector>

#include "elastica/bifurcation.hpp"
#include "elastica/solver.hpp"

namespace elastica {

struct BranchPoint {
    double mu = 0.0;
    DiscreteState state;
    double energy = 0.0;
    double rho_min = 0.0;
    double rho_max = 0.0;
    int newton_iters = 0;
    int det_sign = 0;
    double arclength = 0.0;  // cumulative, from the first stored point
};

enum class Termination { mu_bound, beta_floor, newton_failure, max_points, singular_point };

std::string to_string(Termination t);

struct Branch {
    std::string label;
    std::vector<BranchPoint> points;
    Termination termination = Termination::max_points;
};

struct ContinuationOptions {
    double a0 = 0.05;           // expansion amplitude for the first point
    double initial_step = 1e-3; // in mu while natural, in arclength afterwards
    double min_step = 1e-6;
    double max_step = 0.05;
    double growth = 1.3;        // applied when the corrector needed <= grow_iters
    int grow_iters = 3;
    int max_points = 400;
    double mu_min = 1e-4;
    double mu_max = 2.0;
    int direction = 0;          // initial mu direction; 0 = away from onset (-sigma)
    NewtonOptions newton{};
    int corrector_iters = 12;   // Newton cap inside the continuation corrector
};

// First nontrivial point near onset: order-2 expansion at amplitude a0,
// corrected by Newton at mu = mu0 - sigma a0^2. Falls back to a0/2 (up to
// four times) when the correction collapses onto the round state; throws
// after the last attempt.
BranchPoint start_branch(const BifurcationInfo& info, const Grid& grid,
                         const ContinuationOptions& opts = {});

// Trace the branch from `seed`. Natural stepping in mu with a secant
// predictor while transversal; switches to pseudo-arclength when the fixed-mu
// corrector stops converging (e.g. at folds) and stays there. Steps halve on
// corrector failure and grow by `growth` after easy points.
Branch continue_branch(const BranchPoint& seed, const BifurcationInfo& info,
                       const ContinuationOptions& opts = {});

// start_branch + continue_branch with direction away from the bifurcation.
Branch track_branch(const BifurcationInfo& info, const Grid& grid,
                    const ContinuationOptions& opts = {});

// Indices where det_sign flips without a mu turning point: candidate
// secondary bifurcations.
std::vector<int> detect_secondary(const Branch& branch);

// Seed a Newton solve from `point` displaced by eps along an approximate
// null vector of the Jacobian; used to hop onto a crossing branch.
SolveResult switch_branch(const BranchPoint& point, const ModelParams& params,
                          double eps, const NewtonOptions& opts = {});

} // namespace elastica

#endif
