#include "elastica/solver.hpp"

#include <cmath>
#include <random>

#include "elastica/errors.hpp"
#include "elastica/linear.hpp"

namespace elastica {

namespace {

// Central-difference tangent of the reference density; the phase condition is
// <rho - rho_ref, tangent> = 0, which pins the drift along the orbit of
// s-translations.
Eigen::VectorXd phase_weights(const Eigen::VectorXd& rho_ref, double ds) {
    const int n = int(rho_ref.size());
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i)
        w[i] = (rho_ref[(i + 1) % n] - rho_ref[(i - 1 + n) % n]) / (2.0 * ds);
    return w;
}

void apply_phase_row(Eigen::VectorXd& r, const DiscreteState& st,
                     const Eigen::VectorXd& rho_ref, const Eigen::VectorXd& w,
                     int row) {
    r[row] = w.dot(st.rho - rho_ref);
}

void apply_phase_row(Eigen::SparseMatrix<double>& J, const Eigen::VectorXd& w,
                     int row) {
    const int n = int(w.size());
    for (int k = 0; k < J.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(J, k); it; ++it)
            if (it.row() == row) it.valueRef() = (it.col() < n) ? w[it.col()] : 0.0;
    // Make sure every density column is present in the pinned row.
    for (int j = 0; j < n; ++j) J.coeffRef(row, j) = w[j];
    J.prune(0.0);
}

// Which density row to give up for the phase condition.  Deleting row i frees
// exactly one direction v_i, and the pinned matrix is singular when w.v_i = 0.
// That happens for sure at a reflection point of a symmetric reference (w is
// odd there while v_i is even), so pin where the tangent is largest -- never a
// reflection point, since those are zeros of w.
int pick_pin_row(const Eigen::VectorXd& w) {
    Eigen::Index row = 0;
    if (w.cwiseAbs().maxCoeff(&row) == 0.0)
        throw std::invalid_argument("phase reference must vary along the curve");
    return int(row);
}

} // namespace

SolveResult newton_solve(const DiscreteState& initial, const ModelParams& params,
                         const NewtonOptions& opts) {
    const Grid& grid = initial.grid;
    const int n = grid.n;

    Eigen::VectorXd rho_ref, w;
    int pin_row = 0;
    if (opts.phase_reference) {
        rho_ref = *opts.phase_reference;
        if (rho_ref.size() != n)
            throw std::invalid_argument("phase reference must hold one density per node");
        w = phase_weights(rho_ref, grid.ds);
        pin_row = pick_pin_row(w);
    }

    auto eval = [&](const DiscreteState& st) {
        Eigen::VectorXd r = residual(st, params, opts.beta_floor);
        if (opts.phase_reference) apply_phase_row(r, st, rho_ref, w, pin_row);
        return r;
    };

    SolveResult out{initial, false, 0, {}};
    DiscreteState cur = initial;
    Eigen::VectorXd r = eval(cur);  // floor breach at the starting point propagates
    double rnorm = r.lpNorm<Eigen::Infinity>();
    out.residual_history.push_back(rnorm);

    if (opts.fd_check) {
        const auto chk = compare_jacobian(jacobian(cur, params, opts.beta_floor), cur, params);
        if (chk.max_rel_error > 1e-3)
            throw std::runtime_error("jacobian disagrees with finite differences (entry " +
                                     std::to_string(chk.row) + "," + std::to_string(chk.col) +
                                     ")");
    }

    DiscreteState best = cur;
    double best_norm = rnorm;

    for (int iter = 0; iter < opts.max_iters; ++iter) {
        if (rnorm <= opts.tol) {
            out.state = cur;
            out.converged = true;
            out.iterations = iter;
            return out;
        }
        Eigen::SparseMatrix<double> J = jacobian(cur, params, opts.beta_floor);
        if (opts.phase_reference) apply_phase_row(J, w, pin_row);
        BorderedSolver lin;
        lin.factorize(J, 3);
        const Eigen::VectorXd delta = lin.solve(-r);  // throws when singular

        const Eigen::VectorXd x = pack(cur);
        double eta = 1.0;
        bool accepted = false;
        DiscreteState cand = cur;
        Eigen::VectorXd rc;
        while (eta >= opts.min_eta) {
            cand = unpack(x + eta * delta, grid);
            bool floor_hit = false;
            try {
                rc = eval(cand);
            } catch (const StiffnessFloorError&) {
                floor_hit = true;  // stepped out of the valid region; shorten
            }
            if (!floor_hit && rc.lpNorm<Eigen::Infinity>() <= (1.0 - 0.25 * eta) * rnorm) {
                accepted = true;
                break;
            }
            eta *= opts.backtrack;
        }
        if (!accepted) {
            out.state = best;
            out.converged = best_norm <= opts.tol;
            out.iterations = iter + 1;
            return out;
        }
        cur = cand;
        r = rc;
        rnorm = r.lpNorm<Eigen::Infinity>();
        out.final_eta = eta;
        out.residual_history.push_back(rnorm);
        if (rnorm < best_norm) {
            best = cur;
            best_norm = rnorm;
        }
    }
    out.state = (rnorm <= best_norm) ? cur : best;
    out.converged = std::min(rnorm, best_norm) <= opts.tol;
    out.iterations = opts.max_iters;
    return out;
}

int jacobian_det_sign(const DiscreteState& st, const ModelParams& params, const BetaFloor& floor) {
    BorderedSolver lin;
    lin.factorize(jacobian(st, params, floor), 3);
    return lin.det_sign();
}

Eigen::VectorXd approximate_null_vector(const DiscreteState& st, const ModelParams& params,
                                        int iterations) {
    Eigen::SparseMatrix<double> J = jacobian(st, params);
    BorderedSolver lin;
    lin.factorize(J, 3);
    if (lin.singular()) {
        // Nudge off exact singularity so inverse iteration has something to
        // invert; the dominant small-eigenvalue direction is unchanged.
        Eigen::SparseMatrix<double> shifted = J;
        for (int i = 0; i < shifted.rows(); ++i) shifted.coeffRef(i, i) += 1e-10;
        lin.factorize(shifted, 3);
        if (lin.singular()) throw SingularSystemError("null vector iteration cannot start");
    }
    std::mt19937 gen(12345);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXd v(J.rows());
    for (int i = 0; i < v.size(); ++i) v[i] = dist(gen);
    v.normalize();
    for (int k = 0; k < iterations; ++k) {
        v = lin.solve(v);
        const double nrm = v.norm();
        if (!(nrm > 0.0) || !std::isfinite(nrm))
            throw SingularSystemError("null vector iteration diverged");
        v /= nrm;
    }
    return v / v.lpNorm<Eigen::Infinity>();
}

} // namespace elastica
