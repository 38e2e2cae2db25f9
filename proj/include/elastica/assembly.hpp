#ifndef ELASTICA_ASSEMBLY_HPP
#define ELASTICA_ASSEMBLY_HPP

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "elastica/model.hpp"
#include "elastica/state.hpp"

namespace elastica {

// Discrete Euler-Lagrange residual. Row layout matches the unknown layout:
//   rows 0..n-1      density equations at every node,
//   rows n..2n-2     angle equations at nodes 1..n-1 (node 0 pinned),
//   rows 2n-1..2n+1  mass, closure-x, closure-y constraints.
// Throws StiffnessFloorError when beta at a node or side midpoint is at or
// below the floor.
Eigen::VectorXd residual(const DiscreteState& st, const ModelParams& params,
                         const BetaFloor& floor = {});

// Analytic Jacobian of `residual` with respect to the packed unknowns.
Eigen::SparseMatrix<double> jacobian(const DiscreteState& st, const ModelParams& params,
                                     const BetaFloor& floor = {});

// d residual / d mu (only the density rows depend on mu).
Eigen::VectorXd residual_mu_derivative(const DiscreteState& st);

// Discrete energy: midpoint stiffness, forward differences. The round state
// gives exactly pi for every mu.
double discrete_energy(const DiscreteState& st, const ModelParams& params);

// Polygon vertices traced from the origin with side angles theta. Returns
// n+1 points; the gap between last and first equals the closure residual.
std::vector<Eigen::Vector2d> reconstruct_curve(const DiscreteState& st);

// Sum of angle increments across all sides including the wrap-around ghost;
// telescopes to 2*pi on every state.
double rotation_angle(const DiscreteState& st);

// Worst relative deviation between the analytic Jacobian and a central
// finite-difference Jacobian (step 1e-6 * (1 + |x_j|)), with the offending
// entry. Used by the self-check suite.
struct JacobianCheck {
    double max_rel_error = 0.0;
    int row = -1;
    int col = -1;
};
JacobianCheck compare_jacobian(const Eigen::SparseMatrix<double>& jac,
                               const DiscreteState& st, const ModelParams& params);

} // namespace elastica

#endif
