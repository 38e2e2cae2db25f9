#include "elastica/continuation.hpp"

#include <cmath>
#include <vector>

#include "elastica/errors.hpp"
#include "elastica/linear.hpp"
#include "elastica/perturbation.hpp"

namespace elastica {

std::string to_string(Termination t) {
    switch (t) {
    case Termination::mu_bound: return "mu_bound";
    case Termination::beta_floor: return "beta_floor";
    case Termination::newton_failure: return "newton_failure";
    case Termination::max_points: return "max_points";
    case Termination::singular_point: return "singular_point";
    }
    return "unknown";
}

namespace {

ModelParams params_at(const BifurcationInfo& info, double mu) {
    ModelParams p;
    p.m = info.m;
    p.h = info.h;
    p.mu = mu;
    return p;
}

bool collapsed(const DiscreteState& st, double tol) {
    return (st.rho.array() - 1.0).abs().maxCoeff() < 10.0 * tol;
}

BranchPoint make_point(const DiscreteState& st, const ModelParams& p, int iters,
                       double arclength) {
    BranchPoint bp;
    bp.mu = p.mu;
    bp.state = st;
    bp.energy = discrete_energy(st, p);
    bp.rho_min = st.rho.minCoeff();
    bp.rho_max = st.rho.maxCoeff();
    bp.newton_iters = iters;
    bp.det_sign = jacobian_det_sign(st, p);
    bp.arclength = arclength;
    return bp;
}

double point_distance(const BranchPoint& a, const DiscreteState& st, double mu) {
    const Eigen::VectorXd d = pack(st) - pack(a.state);
    const double dmu = mu - a.mu;
    return std::sqrt(d.squaredNorm() + dmu * dmu);
}

enum class CorrStatus { ok, diverged, floor, singular };

struct CorrResult {
    CorrStatus status = CorrStatus::diverged;
    DiscreteState state;
    double mu = 0.0;
    int iterations = 0;
};

CorrResult correct_natural(const DiscreteState& guess, const ModelParams& p,
                           const ContinuationOptions& opts) {
    NewtonOptions no = opts.newton;
    no.max_iters = opts.corrector_iters;
    CorrResult out;
    out.mu = p.mu;
    try {
        SolveResult sr = newton_solve(guess, p, no);
        out.state = sr.state;
        out.iterations = sr.iterations;
        out.status = (sr.converged && !collapsed(sr.state, no.tol)) ? CorrStatus::ok
                                                                    : CorrStatus::diverged;
    } catch (const StiffnessFloorError&) {
        out.status = CorrStatus::floor;
        return out;
    } catch (const SingularSystemError&) {
        out.status = CorrStatus::singular;
    }
    if (out.status == CorrStatus::ok) return out;

    // Rotational phase barely pinned by the lattice (j = 1 modes especially):
    // fix the phase to the predictor, then release so the stored point solves
    // the unmodified equations.
    try {
        NewtonOptions pinned = no;
        pinned.phase_reference = guess.rho;
        SolveResult sp = newton_solve(guess, p, pinned);
        if (!sp.converged || collapsed(sp.state, no.tol)) return out;
        SolveResult sr = newton_solve(sp.state, p, no);
        if (sr.converged && !collapsed(sr.state, no.tol)) {
            out.state = sr.state;
            out.iterations = sp.iterations + sr.iterations;
            out.status = CorrStatus::ok;
        }
    } catch (const StiffnessFloorError&) {
        out.status = CorrStatus::floor;
    } catch (const SingularSystemError&) {
        out.status = CorrStatus::singular;
    } catch (const std::invalid_argument&) {
        // constant reference density: nothing to pin against
    }
    return out;
}

// One pseudo-arclength step: unknowns (x, mu), residual extended by the
// normalization row t_x . (x - x_k) + t_mu (mu - mu_k) - dsigma.
CorrResult correct_arclength(const BranchPoint& base, const Eigen::VectorXd& tangent,
                             double dsigma, const BifurcationInfo& info,
                             const ContinuationOptions& opts) {
    const Grid grid = base.state.grid;
    const int n = grid.n;
    const int dim = 2 * n + 2;
    const Eigen::VectorXd xk = pack(base.state);
    CorrResult out;

    auto eval = [&](const Eigen::VectorXd& xa) {
        const DiscreteState st = unpack(xa.head(dim), grid);
        Eigen::VectorXd r(dim + 1);
        r.head(dim) = residual(st, params_at(info, xa[dim]), opts.newton.beta_floor);
        r[dim] = tangent.head(dim).dot(xa.head(dim) - xk) + tangent[dim] * (xa[dim] - base.mu) -
                 dsigma;
        return r;
    };

    Eigen::VectorXd xa(dim + 1);
    xa.head(dim) = xk + dsigma * tangent.head(dim);
    xa[dim] = base.mu + dsigma * tangent[dim];

    Eigen::VectorXd r;
    try {
        r = eval(xa);
    } catch (const StiffnessFloorError&) {
        out.status = CorrStatus::floor;
        return out;
    }
    double rnorm = r.lpNorm<Eigen::Infinity>();

    for (int iter = 0; iter < opts.corrector_iters; ++iter) {
        if (rnorm <= opts.newton.tol) {
            out.state = unpack(xa.head(dim), grid);
            out.mu = xa[dim];
            out.iterations = iter;
            out.status = collapsed(out.state, opts.newton.tol) ? CorrStatus::diverged
                                                               : CorrStatus::ok;
            return out;
        }
        const DiscreteState st = unpack(xa.head(dim), grid);
        const ModelParams p = params_at(info, xa[dim]);
        Eigen::SparseMatrix<double> J;
        try {
            J = jacobian(st, p, opts.newton.beta_floor);
        } catch (const StiffnessFloorError&) {
            out.status = CorrStatus::floor;
            return out;
        }
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(J.nonZeros() + 2 * dim + 2);
        for (int k = 0; k < J.outerSize(); ++k)
            for (Eigen::SparseMatrix<double>::InnerIterator it(J, k); it; ++it)
                trip.emplace_back(int(it.row()), int(it.col()), it.value());
        const Eigen::VectorXd rmu = residual_mu_derivative(st);
        for (int i = 0; i < dim; ++i)
            if (rmu[i] != 0.0) trip.emplace_back(i, dim, rmu[i]);
        for (int j = 0; j <= dim; ++j)
            if (tangent[j] != 0.0) trip.emplace_back(dim, j, tangent[j]);
        Eigen::SparseMatrix<double> Jaug(dim + 1, dim + 1);
        Jaug.setFromTriplets(trip.begin(), trip.end());

        BorderedSolver lin;
        lin.factorize(Jaug, 4);
        Eigen::VectorXd delta;
        try {
            delta = lin.solve(-r);
        } catch (const SingularSystemError&) {
            out.status = CorrStatus::singular;
            return out;
        }

        double eta = 1.0;
        bool accepted = false;
        Eigen::VectorXd xc, rc;
        while (eta >= opts.newton.min_eta) {
            xc = xa + eta * delta;
            bool floor_hit = false;
            try {
                rc = eval(xc);
            } catch (const StiffnessFloorError&) {
                floor_hit = true;
            }
            if (!floor_hit && rc.lpNorm<Eigen::Infinity>() <= (1.0 - 0.25 * eta) * rnorm) {
                accepted = true;
                break;
            }
            eta *= opts.newton.backtrack;
        }
        if (!accepted) return out;  // diverged
        xa = xc;
        r = rc;
        rnorm = r.lpNorm<Eigen::Infinity>();
    }
    if (rnorm <= opts.newton.tol) {
        out.state = unpack(xa.head(dim), grid);
        out.mu = xa[dim];
        out.iterations = opts.corrector_iters;
        out.status =
            collapsed(out.state, opts.newton.tol) ? CorrStatus::diverged : CorrStatus::ok;
    }
    return out;
}

} // namespace

BranchPoint start_branch(const BifurcationInfo& info, const Grid& grid,
                         const ContinuationOptions& opts) {
    double A = opts.a0;
    for (int attempt = 0; attempt < 5; ++attempt, A *= 0.5) {
        const auto [guess, mu] = predictor(info, A, 2, grid);
        const ModelParams p = params_at(info, mu);
        try {
            SolveResult sr = newton_solve(guess, p, opts.newton);
            if (!sr.converged || collapsed(sr.state, opts.newton.tol)) continue;
            return make_point(sr.state, p, sr.iterations, 0.0);
        } catch (const StiffnessFloorError&) {
        } catch (const SingularSystemError&) {
        }
    }
    throw std::runtime_error("branch start failed: corrections collapse onto the round state");
}

Branch continue_branch(const BranchPoint& seed, const BifurcationInfo& info,
                       const ContinuationOptions& opts) {
    Branch br;
    br.label = to_string(info.kind) + " j=" + std::to_string(info.j);
    br.points.push_back(seed);

    const Grid grid = seed.state.grid;
    const int dim = 2 * grid.n + 2;
    int dir = (opts.direction != 0) ? opts.direction : -info.sigma;
    if (dir == 0) dir = -1;

    bool arclength_mode = false;
    double step = opts.initial_step;
    Eigen::VectorXd tangent;
    CorrStatus last_fail = CorrStatus::diverged;

    auto secant_tangent = [&]() {
        const BranchPoint& a = br.points[br.points.size() - 2];
        const BranchPoint& b = br.points.back();
        Eigen::VectorXd t(dim + 1);
        t.head(dim) = pack(b.state) - pack(a.state);
        t[dim] = b.mu - a.mu;
        t.normalize();
        return t;
    };
    auto derivative_tangent = [&]() {
        // dx/dmu from J x_mu = -dr/dmu, oriented along the stepping direction.
        const BranchPoint& b = br.points.back();
        BorderedSolver lin;
        lin.factorize(jacobian(b.state, params_at(info, b.mu), opts.newton.beta_floor), 3);
        Eigen::VectorXd t(dim + 1);
        t.head(dim) = lin.solve(-residual_mu_derivative(b.state));
        t[dim] = 1.0;
        t *= double(dir);
        t.normalize();
        return t;
    };

    while (int(br.points.size()) < opts.max_points) {
        const BranchPoint cur = br.points.back();

        if (!arclength_mode) {
            double mu_next = cur.mu + dir * step;
            bool hits_bound = false;
            if (mu_next >= opts.mu_max) {
                mu_next = opts.mu_max;
                hits_bound = true;
            } else if (mu_next <= opts.mu_min) {
                mu_next = opts.mu_min;
                hits_bound = true;
            }
            if (hits_bound && std::abs(mu_next - cur.mu) < 1e-15) {
                br.termination = Termination::mu_bound;
                return br;
            }

            Eigen::VectorXd xp = pack(cur.state);
            if (br.points.size() >= 2) {
                const BranchPoint& prev = br.points[br.points.size() - 2];
                const double dmu = cur.mu - prev.mu;
                if (dmu != 0.0)
                    xp += (pack(cur.state) - pack(prev.state)) * ((mu_next - cur.mu) / dmu);
            }

            const ModelParams p = params_at(info, mu_next);
            CorrResult cr = correct_natural(unpack(xp, grid), p, opts);
            if (cr.status == CorrStatus::ok) {
                const double alen = cur.arclength + point_distance(cur, cr.state, cr.mu);
                br.points.push_back(make_point(cr.state, p, cr.iterations, alen));
                if (hits_bound) {
                    br.termination = Termination::mu_bound;
                    return br;
                }
                if (cr.iterations <= opts.grow_iters)
                    step = std::min(step * opts.growth, opts.max_step);
            } else {
                last_fail = cr.status;
                if (step > opts.min_step) {
                    step = std::max(0.5 * step, opts.min_step);
                } else {
                    arclength_mode = true;
                    step = opts.initial_step;
                    if (br.points.size() >= 2) {
                        tangent = secant_tangent();
                    } else {
                        try {
                            tangent = derivative_tangent();
                        } catch (const SingularSystemError&) {
                            br.termination = Termination::singular_point;
                            return br;
                        }
                    }
                }
            }
        } else {
            CorrResult cr = correct_arclength(cur, tangent, step, info, opts);
            if (cr.status == CorrStatus::ok) {
                if (cr.mu < opts.mu_min || cr.mu > opts.mu_max) {
                    br.termination = Termination::mu_bound;
                    return br;
                }
                const double alen = cur.arclength + point_distance(cur, cr.state, cr.mu);
                br.points.push_back(make_point(cr.state, params_at(info, cr.mu),
                                               cr.iterations, alen));
                tangent = secant_tangent();
                if (cr.iterations <= opts.grow_iters)
                    step = std::min(step * opts.growth, opts.max_step);
            } else {
                last_fail = cr.status;
                if (step > opts.min_step) {
                    step = std::max(0.5 * step, opts.min_step);
                } else {
                    br.termination = (last_fail == CorrStatus::floor)
                                         ? Termination::beta_floor
                                         : (last_fail == CorrStatus::singular)
                                               ? Termination::singular_point
                                               : Termination::newton_failure;
                    return br;
                }
            }
        }
    }
    br.termination = Termination::max_points;
    return br;
}

Branch track_branch(const BifurcationInfo& info, const Grid& grid,
                    const ContinuationOptions& opts) {
    return continue_branch(start_branch(info, grid, opts), info, opts);
}

std::vector<int> detect_secondary(const Branch& branch) {
    std::vector<int> out;
    const auto& pts = branch.points;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i].det_sign * pts[i - 1].det_sign >= 0) continue;
        const double across = pts[i].mu - pts[i - 1].mu;
        const double before = (i >= 2) ? pts[i - 1].mu - pts[i - 2].mu : across;
        const double after = (i + 1 < pts.size()) ? pts[i + 1].mu - pts[i].mu : across;
        const bool reversal = (before * across < 0.0) || (across * after < 0.0);
        if (!reversal) out.push_back(int(i));
    }
    return out;
}

SolveResult switch_branch(const BranchPoint& point, const ModelParams& params, double eps,
                          const NewtonOptions& opts) {
    const Eigen::VectorXd v = approximate_null_vector(point.state, params);
    const Eigen::VectorXd x = pack(point.state) + eps * v;
    DiscreteState guess = unpack(x, point.state.grid);
    NewtonOptions no = opts;
    if (!no.phase_reference) no.phase_reference = guess.rho;
    ModelParams p = params;
    p.mu = point.mu;
    return newton_solve(guess, p, no);
}

} // namespace elastica
