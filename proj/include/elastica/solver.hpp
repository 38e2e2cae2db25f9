#ifndef ELASTICA_SOLVER_HPP
#define ELASTICA_SOLVER_HPP

#include <cmath>
#include <optional>
#include <vector>

#include "elastica/assembly.hpp"
#include "elastica/model.hpp"
#include "elastica/state.hpp"

namespace elastica {

struct NewtonOptions {
    double tol = 1e-10;           // max-norm residual target
    int max_iters = 50;
    double min_eta = std::ldexp(1.0, -20);
    double backtrack = 0.5;
    BetaFloor beta_floor{};
    bool fd_check = false;        // compare the Jacobian against finite
                                  // differences at the initial point
    // When set, one density row (picked where the reference varies most) is
    // replaced by the phase condition <rho - rho_ref, d/ds rho_ref> = 0 to
    // pin the rotational phase.
    std::optional<Eigen::VectorXd> phase_reference;
};

struct SolveResult {
    DiscreteState state;
    bool converged = false;
    int iterations = 0;
    std::vector<double> residual_history;  // max-norms, including the initial one
    double final_eta = 1.0;                // damping of the last accepted step
};

// Damped Newton with backtracking line search: a step of length eta is
// accepted when ||r(u + eta d)|| <= (1 - eta/4) ||r(u)||. On line-search
// exhaustion returns the best iterate seen with converged = false. Throws
// SingularSystemError from the linear solve and StiffnessFloorError when the
// current iterate itself leaves the valid region.
SolveResult newton_solve(const DiscreteState& initial, const ModelParams& params,
                         const NewtonOptions& opts = {});

// Sign of det of the Jacobian at a state: +1/-1, or 0 when the factorization
// is singular at the pivot threshold.
int jacobian_det_sign(const DiscreteState& st, const ModelParams& params,
                      const BetaFloor& floor = {});

// Approximate kernel direction of the Jacobian near a singular point, by a
// few inverse iterations. Normalized in the max norm.
Eigen::VectorXd approximate_null_vector(const DiscreteState& st, const ModelParams& params,
                                        int iterations = 8);

} // namespace elastica

#endif
