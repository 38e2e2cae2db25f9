#include "elastica/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "elastica/errors.hpp"

namespace elastica {

namespace {

// Unknown ordering: [rho_0..rho_{n-1}, theta_1..theta_{n-1}, lambda_mass, lambda_x, lambda_y].
int col_rho(int n, int i) { return (i % n + n) % n; }

// theta_0 is pinned at 0; returns -1 for columns that are not unknowns.
int col_theta(int n, int i) {
    if (i <= 0 || i >= n) return -1;
    return n + i - 1;
}

double checked_beta(const ModelParams& p, double rho, int index, const BetaFloor& floor) {
    const double b = p.beta(rho);
    if (b <= floor.floor) throw StiffnessFloorError(index, b);
    return b;
}

} // namespace

Eigen::VectorXd residual(const DiscreteState& st, const ModelParams& p, const BetaFloor& floor) {
    const int n = st.grid.n;
    const double ds = st.grid.ds;
    Eigen::VectorXd r(2 * n + 2);

    auto theta_at = [&](int i) -> double {
        if (i < 0) return st.theta[i + n] - kTwoPi;
        if (i >= n) return st.theta[i - n] + kTwoPi;
        return st.theta[i];
    };
    auto rho_at = [&](int i) -> double { return st.rho[col_rho(n, i)]; };

    for (int i = 0; i < n; ++i) {
        checked_beta(p, st.rho[i], i, floor);
        const double d2rho = (rho_at(i - 1) - 2.0 * st.rho[i] + rho_at(i + 1)) / (ds * ds);
        const double dtheta = (theta_at(i + 1) - theta_at(i - 1)) / (2.0 * ds);
        r[i] = p.mu * d2rho - 0.5 * p.beta_prime(st.rho[i]) * dtheta * dtheta - st.lambda_mass;
    }
    for (int i = 1; i < n; ++i) {
        const double bp = checked_beta(p, 0.5 * (st.rho[i] + rho_at(i + 1)), i, floor);
        const double bm = checked_beta(p, 0.5 * (rho_at(i - 1) + st.rho[i]), i - 1, floor);
        const double flux =
            (bp * (theta_at(i + 1) - st.theta[i]) - bm * (st.theta[i] - theta_at(i - 1))) /
            (ds * ds);
        r[n + i - 1] = flux + st.lambda_x * std::sin(st.theta[i]) - st.lambda_y * std::cos(st.theta[i]);
    }
    double mass = 0.0, cx = 0.0, cy = 0.0;
    for (int i = 0; i < n; ++i) {
        mass += st.rho[i];
        cx += std::cos(st.theta[i]);
        cy += std::sin(st.theta[i]);
    }
    r[2 * n - 1] = ds * mass - kTwoPi;
    r[2 * n] = ds * cx;
    r[2 * n + 1] = ds * cy;
    return r;
}

Eigen::SparseMatrix<double> jacobian(const DiscreteState& st, const ModelParams& p,
                                     const BetaFloor& floor) {
    const int n = st.grid.n;
    const double ds = st.grid.ds;
    const double ds2 = ds * ds;

    auto theta_at = [&](int i) -> double {
        if (i < 0) return st.theta[i + n] - kTwoPi;
        if (i >= n) return st.theta[i - n] + kTwoPi;
        return st.theta[i];
    };
    auto rho_at = [&](int i) -> double { return st.rho[col_rho(n, i)]; };

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(16 * n);
    auto put = [&](int row, int col, double v) {
        if (col >= 0) trip.emplace_back(row, col, v);
    };

    const int cM = 2 * n - 1, cX = 2 * n, cY = 2 * n + 1;

    for (int i = 0; i < n; ++i) {
        checked_beta(p, st.rho[i], i, floor);
        const double D = (theta_at(i + 1) - theta_at(i - 1)) / (2.0 * ds);
        put(i, col_rho(n, i - 1), p.mu / ds2);
        put(i, col_rho(n, i + 1), p.mu / ds2);
        put(i, i, -2.0 * p.mu / ds2 - 0.5 * p.beta_second() * D * D);
        const double g = p.beta_prime(st.rho[i]) * D / (2.0 * ds);
        put(i, col_theta(n, i + 1 >= n ? -1 : i + 1), -g);  // theta_n is a constant ghost
        put(i, col_theta(n, i - 1 < 0 ? n - 1 : i - 1), g);
        put(i, cM, -1.0);
    }
    for (int i = 1; i < n; ++i) {
        const int row = n + i - 1;
        const double rp = 0.5 * (st.rho[i] + rho_at(i + 1));
        const double rm = 0.5 * (rho_at(i - 1) + st.rho[i]);
        const double bp = checked_beta(p, rp, i, floor);
        const double bm = checked_beta(p, rm, i - 1, floor);
        const double bpp = p.beta_prime(rp);
        const double bpm = p.beta_prime(rm);
        const double dp = theta_at(i + 1) - st.theta[i];
        const double dm = st.theta[i] - theta_at(i - 1);
        put(row, col_theta(n, i + 1 >= n ? -1 : i + 1), bp / ds2);
        put(row, col_theta(n, i),
            -(bp + bm) / ds2 + st.lambda_x * std::cos(st.theta[i]) +
                st.lambda_y * std::sin(st.theta[i]));
        put(row, col_theta(n, i - 1), bm / ds2);
        put(row, col_rho(n, i + 1), 0.5 * bpp * dp / ds2);
        put(row, i, 0.5 * (bpp * dp - bpm * dm) / ds2);
        put(row, col_rho(n, i - 1), -0.5 * bpm * dm / ds2);
        put(row, cX, std::sin(st.theta[i]));
        put(row, cY, -std::cos(st.theta[i]));
    }
    for (int j = 0; j < n; ++j) put(2 * n - 1, j, ds);
    for (int j = 1; j < n; ++j) {
        put(2 * n, col_theta(n, j), -ds * std::sin(st.theta[j]));
        put(2 * n + 1, col_theta(n, j), ds * std::cos(st.theta[j]));
    }

    Eigen::SparseMatrix<double> J(2 * n + 2, 2 * n + 2);
    J.setFromTriplets(trip.begin(), trip.end());
    return J;
}

Eigen::VectorXd residual_mu_derivative(const DiscreteState& st) {
    const int n = st.grid.n;
    const double ds2 = st.grid.ds * st.grid.ds;
    Eigen::VectorXd d = Eigen::VectorXd::Zero(2 * n + 2);
    auto rho_at = [&](int i) -> double { return st.rho[col_rho(n, i)]; };
    for (int i = 0; i < n; ++i)
        d[i] = (rho_at(i - 1) - 2.0 * st.rho[i] + rho_at(i + 1)) / ds2;
    return d;
}

double discrete_energy(const DiscreteState& st, const ModelParams& p) {
    const int n = st.grid.n;
    const double ds = st.grid.ds;
    auto theta_at = [&](int i) -> double {
        return (i >= n) ? st.theta[i - n] + kTwoPi : st.theta[i];
    };
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
        const double bmid = p.beta(0.5 * (st.rho[i] + st.rho[(i + 1) % n]));
        const double dth = (theta_at(i + 1) - st.theta[i]) / ds;
        const double drh = (st.rho[(i + 1) % n] - st.rho[i]) / ds;
        e += ds * (0.5 * bmid * dth * dth + 0.5 * p.mu * drh * drh);
    }
    return e;
}

std::vector<Eigen::Vector2d> reconstruct_curve(const DiscreteState& st) {
    const int n = st.grid.n;
    std::vector<Eigen::Vector2d> pts;
    pts.reserve(n + 1);
    Eigen::Vector2d x(0.0, 0.0);
    pts.push_back(x);
    for (int i = 0; i < n; ++i) {
        x += st.grid.ds * Eigen::Vector2d(std::cos(st.theta[i]), std::sin(st.theta[i]));
        pts.push_back(x);
    }
    return pts;
}

double rotation_angle(const DiscreteState& st) {
    const int n = st.grid.n;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double next = (i + 1 < n) ? st.theta[i + 1] : st.theta[0] + kTwoPi;
        double d = next - st.theta[i];
        d = std::remainder(d, kTwoPi);
        total += d;
    }
    return total;
}

JacobianCheck compare_jacobian(const Eigen::SparseMatrix<double>& jac, const DiscreteState& st,
                               const ModelParams& p) {
    const int n = st.grid.n;
    const int dim = 2 * n + 2;
    Eigen::MatrixXd dense = Eigen::MatrixXd(jac);
    Eigen::VectorXd x = pack(st);
    JacobianCheck out{0.0, -1, -1};
    for (int j = 0; j < dim; ++j) {
        const double delta = 1e-6 * (1.0 + std::abs(x[j]));
        Eigen::VectorXd xp = x, xm = x;
        xp[j] += delta;
        xm[j] -= delta;
        const Eigen::VectorXd rp = residual(unpack(xp, st.grid), p);
        const Eigen::VectorXd rm = residual(unpack(xm, st.grid), p);
        const Eigen::VectorXd fd = (rp - rm) / (2.0 * delta);
        for (int i = 0; i < dim; ++i) {
            const double err = std::abs(dense(i, j) - fd[i]) / std::max(1.0, std::abs(fd[i]));
            if (err > out.max_rel_error) {
                out.max_rel_error = err;
                out.row = i;
                out.col = j;
            }
        }
    }
    return out;
}

} // namespace elastica
