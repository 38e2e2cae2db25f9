#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "elastica/bifurcation.hpp"
#include "elastica/errors.hpp"
#include "elastica/model.hpp"
#include "elastica/perturbation.hpp"
#include "elastica/presets.hpp"
#include "elastica/solver.hpp"

using namespace elastica;

namespace {

ModelParams params_for(double m, double h, double mu) {
    ModelParams p;
    p.m = m;
    p.h = h;
    p.mu = mu;
    return p;
}

Eigen::VectorXd mode_direction(const Mode& md, const Grid& g) {
    DiscreteState st(g);
    st.rho = md.rho1;
    st.theta = md.theta1;
    st.lambda_mass = md.lambda_mass1;
    st.lambda_x = md.lambda_x1;
    st.lambda_y = md.lambda_y1;
    Eigen::VectorXd v = pack(st);
    return v / v.norm();
}

} // namespace

TEST_CASE("the round state is an exact root") {
    const Grid g(64);
    for (auto [m, h] : {std::pair{1.0, 1.0}, {1.0, -2.0}, {0.0, -1.0}}) {
        for (double mu : {0.3, 1.2}) {
            const ModelParams p = params_for(m, h, mu);
            const DiscreteState st = trivial_state(p, g);
            const SolveResult res = newton_solve(st, p);
            CHECK(res.converged);
            CHECK(res.iterations == 0);
            CHECK(res.residual_history.size() == 1);
            CHECK((pack(res.state) - pack(st)).lpNorm<Eigen::Infinity>() == 0.0);
        }
    }
}

TEST_CASE("converges from the onset predictor to a nontrivial state") {
    const Grid g(128);
    for (const char* name : {"ii", "v", "vi"}) {
        const Preset pre = *find_preset(name);
        const BifurcationInfo info = first_bifurcating_case(pre.m, pre.h);
        const auto [guess, mu] = predictor(info, 0.05, 2, g);
        const ModelParams p = params_for(pre.m, pre.h, mu);
        const SolveResult res = newton_solve(guess, p);
        CAPTURE(name);
        REQUIRE(res.converged);
        CHECK(res.iterations <= 10);
        CHECK(res.residual_history.back() <= 1e-10);
        for (size_t k = 1; k < res.residual_history.size(); ++k)
            CHECK(res.residual_history[k] <= res.residual_history[k - 1]);
        CHECK(res.state.rho.maxCoeff() - res.state.rho.minCoeff() > 0.01);
        // constraint rows of the converged state
        const Eigen::VectorXd r = residual(res.state, p);
        const int n = g.n;
        CHECK(std::abs(r[2 * n - 1]) <= 1e-10);
        CHECK(std::abs(r[2 * n]) <= 1e-10);
        CHECK(std::abs(r[2 * n + 1]) <= 1e-10);
    }
}

TEST_CASE("supercritical branch lowers the energy") {
    // (m,h) = (1,1), mode 2: branch exists below mu0 = 0.125 and beats pi
    const Grid g(128);
    const BifurcationInfo info = first_bifurcating_case(1.0, 1.0);
    const auto [guess, mu] = predictor(info, 0.05, 1, g);
    CHECK(mu == doctest::Approx(0.1225).epsilon(1e-12));
    const ModelParams p = params_for(1.0, 1.0, mu);
    const SolveResult res = newton_solve(guess, p);
    REQUIRE(res.converged);
    CHECK(res.state.rho.maxCoeff() - res.state.rho.minCoeff() > 0.0);
    CHECK(discrete_energy(res.state, p) < std::numbers::pi);
}

TEST_CASE("quadratic convergence in the terminal phase") {
    const Grid g(128);
    const BifurcationInfo info = first_bifurcating_case(1.0, 1.0);
    const auto [guess, mu] = predictor(info, 0.08, 1, g);  // order 1 leaves real work
    const ModelParams p = params_for(1.0, 1.0, mu);
    const SolveResult res = newton_solve(guess, p);
    REQUIRE(res.converged);
    int checked = 0;
    for (size_t k = 0; k + 1 < res.residual_history.size(); ++k) {
        const double a = res.residual_history[k];
        const double b = res.residual_history[k + 1];
        if (a <= 1e-3) {
            // contraction bottoms out where residual evaluation itself rounds
            CHECK(b <= std::max(100.0 * a * a, 2e-12));
            ++checked;
        }
    }
    CHECK(checked >= 1);
}

TEST_CASE("undamped steps suffice near every preset onset") {
    const Grid g(96);
    for (const Preset& pre : kPresets) {
        const BifurcationInfo info = first_bifurcating_case(pre.m, pre.h);
        const auto [guess, mu] = predictor(info, 0.05, 2, g);
        const ModelParams p = params_for(pre.m, pre.h, mu);
        const SolveResult res = newton_solve(guess, p);
        CAPTURE(pre.name);
        REQUIRE(res.converged);
        CHECK(res.iterations <= 10);
        CHECK(res.final_eta == 1.0);
        CHECK((res.state.rho.array() - 1.0).abs().maxCoeff() > 1e-3);
    }
}

TEST_CASE("large penalty pulls perturbed states back to the round state") {
    const Grid g(64);
    std::mt19937 gen(91);
    std::uniform_real_distribution<double> d(-0.1, 0.1);
    for (const Preset& pre : kPresets) {
        const ModelParams p = params_for(pre.m, pre.h, 10.0);
        for (int rep = 0; rep < 5; ++rep) {
            DiscreteState st = trivial_state(p, g);
            for (int i = 0; i < g.n; ++i) {
                st.rho[i] += d(gen);
                if (i) st.theta[i] += d(gen);
            }
            const SolveResult res = newton_solve(st, p);
            CAPTURE(pre.name);
            REQUIRE(res.converged);
            CHECK((res.state.rho.array() - 1.0).abs().maxCoeff() <= 1e-8);
            CHECK(discrete_energy(res.state, p) ==
                  doctest::Approx(std::numbers::pi).epsilon(1e-8));
        }
    }
}

TEST_CASE("determinant sign is even across a phase-degenerate onset") {
    // At mu0 the cos- and sin-phase modes cross zero together, so the
    // determinant flips twice and lands back where it started.  A net sign
    // change only announces an odd crossing, i.e. a fold along a branch.
    const Grid g(64);
    const double mu0 = 0.125;  // (1,1), mode 2
    const ModelParams lo = params_for(1.0, 1.0, mu0 - 0.03);
    const ModelParams hi = params_for(1.0, 1.0, mu0 + 0.03);
    const int s_lo = jacobian_det_sign(trivial_state(lo, g), lo);
    const int s_hi = jacobian_det_sign(trivial_state(hi, g), hi);
    CHECK(s_lo != 0);
    CHECK(s_hi != 0);
    CHECK(s_lo == s_hi);

    // 0.125 is the last onset on the way up: the sign holds out to large mu
    const ModelParams far = params_for(1.0, 1.0, 10.0);
    CHECK(jacobian_det_sign(trivial_state(far, g), far) == s_hi);
}

TEST_CASE("near-singular null vector lies in the kernel plane") {
    const Grid g(64);
    const BifurcationInfo info = classify(1.0, 1.0, 2);
    const ModelParams p = params_for(1.0, 1.0, info.mu0 + 1e-7);
    const DiscreteState st = trivial_state(p, g);
    const Eigen::VectorXd v = approximate_null_vector(st, p);
    const Eigen::VectorXd vn = v / v.norm();
    // the mode-2 kernel is a two-dimensional phase family; project onto it
    const Eigen::VectorXd e1 = mode_direction(mode(info, 1.0, 0.0, g), g);
    const Eigen::VectorXd e2raw = mode_direction(mode(info, 1.0, std::numbers::pi / 4.0, g), g);
    const Eigen::VectorXd e2 = (e2raw - e1 * e1.dot(e2raw)).normalized();
    const double in_plane = std::hypot(e1.dot(vn), e2.dot(vn));
    CHECK(in_plane >= 0.99);
}

TEST_CASE("phase reference pins the orbit without disturbing the solution") {
    const Grid g(96);
    const BifurcationInfo info = first_bifurcating_case(1.0, 1.0);
    const auto [guess, mu] = predictor(info, 0.06, 2, g);
    const ModelParams p = params_for(1.0, 1.0, mu);

    NewtonOptions opts;
    opts.phase_reference = guess.rho;
    const SolveResult pinned = newton_solve(guess, p, opts);
    REQUIRE(pinned.converged);
    CHECK(pinned.iterations <= 10);
    // every equation except the one density row traded for the pin holds tightly
    const Eigen::VectorXd r = residual(pinned.state, p);
    int loose = 0;
    for (int i = 0; i < 2 * g.n + 2; ++i) {
        if (std::abs(r[i]) > 1e-9) {
            ++loose;
            CHECK(i < g.n);  // only a density row may be traded
            CHECK(std::abs(r[i]) <= 1e-6);
        }
    }
    CHECK(loose <= 1);
    // the pin condition itself is satisfied to solver tolerance
    Eigen::VectorXd w(g.n);
    for (int i = 0; i < g.n; ++i)
        w[i] = (guess.rho[(i + 1) % g.n] - guess.rho[(i - 1 + g.n) % g.n]) / (2.0 * g.ds);
    CHECK(std::abs(w.dot(pinned.state.rho - guess.rho)) <= 1e-10);

    // releasing the pin lands on the nearby exact solution
    const SolveResult released = newton_solve(pinned.state, p);
    REQUIRE(released.converged);
    CHECK((pack(released.state) - pack(pinned.state)).lpNorm<Eigen::Infinity>() <= 1e-4);
}

TEST_CASE("jacobian self-check runs inside the solver") {
    const Grid g(32);
    const BifurcationInfo info = first_bifurcating_case(1.0, 1.0);
    const auto [guess, mu] = predictor(info, 0.05, 2, g);
    const ModelParams p = params_for(1.0, 1.0, mu);
    NewtonOptions opts;
    opts.fd_check = true;
    const SolveResult res = newton_solve(guess, p, opts);
    CHECK(res.converged);
}

TEST_CASE("iteration cap returns the best iterate") {
    const Grid g(64);
    const BifurcationInfo info = first_bifurcating_case(1.0, -2.0);
    const auto [guess, mu] = predictor(info, 0.3, 1, g);  // deliberately far out
    const ModelParams p = params_for(1.0, -2.0, mu);
    NewtonOptions opts;
    opts.max_iters = 1;
    const SolveResult res = newton_solve(guess, p, opts);
    CHECK(!res.converged);
    CHECK(res.iterations == 1);
    double best = res.residual_history.front();
    for (double v : res.residual_history) best = std::min(best, v);
    const double actual = residual(res.state, p).lpNorm<Eigen::Infinity>();
    CHECK(actual <= best * (1.0 + 1e-12));
}

TEST_CASE("floor breach at the starting point propagates") {
    const ModelParams p = params_for(1.0, 0.0, 0.5);  // beta(rho) = rho
    const Grid g(16);
    DiscreteState st = trivial_state(p, g);
    st.rho[3] = 1e-9;
    CHECK_THROWS_AS(newton_solve(st, p), StiffnessFloorError);
}
