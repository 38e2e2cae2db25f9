#ifndef ELASTICA_STATE_HPP
#define ELASTICA_STATE_HPP

#include <Eigen/Dense>
#include <numbers>
#include <stdexcept>

namespace elastica {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;

// Uniform periodic grid with n sides of length ds = 2*pi/n.
struct Grid {
    int n = 0;
    double ds = 0.0;

    Grid() = default;
    explicit Grid(int n_sides) : n(n_sides), ds(kTwoPi / n_sides) {
        if (n_sides < 8) throw std::invalid_argument("grid needs at least 8 sides");
    }

    double s(int i) const { return i * ds; }
};

// Discrete configuration: nodal densities rho_0..rho_{n-1}, side angles
// theta_0..theta_{n-1} with theta_0 = 0 pinned, and the three multipliers
// (mass, closure-x, closure-y). Periodic ghosts: rho_{-1} = rho_{n-1},
// rho_n = rho_0, theta_{-1} = theta_{n-1} - 2*pi, theta_n = theta_0 + 2*pi.
struct DiscreteState {
    Grid grid;
    Eigen::VectorXd rho;
    Eigen::VectorXd theta;
    double lambda_mass = 0.0;
    double lambda_x = 0.0;
    double lambda_y = 0.0;

    DiscreteState() = default;
    explicit DiscreteState(const Grid& g)
        : grid(g), rho(Eigen::VectorXd::Zero(g.n)), theta(Eigen::VectorXd::Zero(g.n)) {}

    int unknown_count() const { return 2 * grid.n + 2; }
};

// Unknown vector layout: [rho_0..rho_{n-1}, theta_1..theta_{n-1},
// lambda_mass, lambda_x, lambda_y]. theta_0 stays pinned at 0.
inline Eigen::VectorXd pack(const DiscreteState& st) {
    const int n = st.grid.n;
    Eigen::VectorXd x(2 * n + 2);
    x.head(n) = st.rho;
    for (int i = 1; i < n; ++i) x[n - 1 + i] = st.theta[i];
    x[2 * n - 1] = st.lambda_mass;
    x[2 * n] = st.lambda_x;
    x[2 * n + 1] = st.lambda_y;
    return x;
}

inline DiscreteState unpack(const Eigen::VectorXd& x, const Grid& grid) {
    const int n = grid.n;
    if (x.size() != 2 * n + 2) throw std::invalid_argument("unknown vector has wrong length");
    DiscreteState st(grid);
    st.rho = x.head(n);
    st.theta[0] = 0.0;
    for (int i = 1; i < n; ++i) st.theta[i] = x[n - 1 + i];
    st.lambda_mass = x[2 * n - 1];
    st.lambda_x = x[2 * n];
    st.lambda_y = x[2 * n + 1];
    return st;
}

} // namespace elastica

#endif
