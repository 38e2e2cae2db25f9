// Acceptance gate: one pass/fail line per criterion, nonzero exit when any
// fails. Tolerances are fixed here on purpose; do not loosen them to make a
// run green.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "elastica/assembly.hpp"
#include "elastica/bifurcation.hpp"
#include "elastica/continuation.hpp"
#include "elastica/model.hpp"
#include "elastica/perturbation.hpp"
#include "elastica/presets.hpp"
#include "elastica/solver.hpp"

using namespace elastica;

namespace {

int failures = 0;

void report(int number, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", number, detail.c_str());
    if (!ok) ++failures;
}

void run(int number, const std::function<std::pair<bool, std::string>()>& fn) {
    try {
        const auto [ok, detail] = fn();
        report(number, ok, detail);
    } catch (const std::exception& e) {
        report(number, false, std::string("exception: ") + e.what());
    }
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

ModelParams params_for(double m, double h, double mu) {
    ModelParams p;
    p.m = m;
    p.h = h;
    p.mu = mu;
    return p;
}

double state_distance(const DiscreteState& a, const DiscreteState& b) {
    double d = (a.rho - b.rho).lpNorm<Eigen::Infinity>();
    d = std::max(d, (a.theta - b.theta).lpNorm<Eigen::Infinity>());
    d = std::max(d, std::abs(a.lambda_mass - b.lambda_mass));
    d = std::max(d, std::abs(a.lambda_x - b.lambda_x));
    d = std::max(d, std::abs(a.lambda_y - b.lambda_y));
    return d;
}

// ---------------------------------------------------------------- criteria

// six named parameter sets land in the advertised case/mode/direction table,
// with the extra supercritical mode-1 onset of set iv
std::pair<bool, std::string> classification_table() {
    struct Row {
        const char* preset;
        BifCase kind;
        int j;
        int sigma;
    };
    const Row rows[] = {
        {"i", BifCase::case0, 2, -1},  {"ii", BifCase::case0, 2, +1},
        {"iii", BifCase::case0, 2, -1}, {"iv", BifCase::case0, 2, -1},
        {"v", BifCase::case1_1, 1, -1}, {"vi", BifCase::case1_0, 1, -1},
    };
    for (const Row& r : rows) {
        const Preset p = *find_preset(r.preset);
        const BifurcationInfo info = first_bifurcating_case(p.m, p.h);
        if (info.kind != r.kind || info.j != r.j || info.sigma != r.sigma)
            return {false, std::string("preset ") + r.preset + " classified as " +
                               to_string(info.kind) + " j=" + std::to_string(info.j) +
                               " sigma=" + std::to_string(info.sigma)};
    }
    const Preset iv = *find_preset("iv");
    const BifurcationInfo extra = classify(iv.m, iv.h, 1);
    if (extra.kind != BifCase::case1_1 || extra.sigma != +1)
        return {false, "preset iv mode 1 is not a supercritical case1_1 onset"};
    return {true, "six presets classified as expected, incl. the second onset of iv"};
}

// the direction-change ratios sit in their published brackets and the
// indicator really flips sign there
std::pair<bool, std::string> direction_roots() {
    const auto [z1, z2] = criticality_roots();
    if (!(z1 >= 0.515 && z1 <= 0.525)) return {false, "z1=" + num(z1) + " out of [0.515,0.525]"};
    if (!(z2 >= 1.705 && z2 <= 1.715)) return {false, "z2=" + num(z2) + " out of [1.705,1.715]"};
    for (double m : {1.0, 1.7}) {
        for (double z : {z1, z2}) {
            const double lo = criticality_indicator(m, (z - 1e-9) * m * m);
            const double hi = criticality_indicator(m, (z + 1e-9) * m * m);
            if (!(lo * hi < 0.0))
                return {false, "no sign change at z=" + num(z) + ", m=" + num(m)};
        }
    }
    return {true, "z1=" + num(z1) + ", z2=" + num(z2) + ", indicator flips sign at both"};
}

// the round state evaluates to (numerically) zero residual and energy pi
std::pair<bool, std::string> trivial_exactness() {
    std::mt19937 gen(2024);
    std::uniform_real_distribution<double> dm(-2.0, 2.0), dh(-3.0, 3.0), dmu(0.05, 5.0);
    double worst_r = 0.0, worst_e = 0.0;
    for (int n : {8, 64, 256}) {
        const Grid g(n);
        for (int t = 0; t < 20; ++t) {
            const ModelParams p = params_for(dm(gen), dh(gen), dmu(gen));
            const DiscreteState st = trivial_state(p, g);
            worst_r = std::max(worst_r, residual(st, p).lpNorm<Eigen::Infinity>());
            worst_e = std::max(worst_e,
                               std::abs(discrete_energy(st, p) - std::numbers::pi));
        }
    }
    const bool ok = worst_r <= 1e-12 && worst_e <= 1e-13;
    return {ok, "max residual " + num(worst_r) + " (<=1e-12), max energy error " +
                    num(worst_e) + " (<=1e-13)"};
}

// hand-coded derivatives agree with central differences
std::pair<bool, std::string> jacobian_agreement() {
    const auto t0 = std::chrono::steady_clock::now();
    const Grid g(64);
    std::mt19937 gen(5150);
    std::uniform_real_distribution<double> dp(-0.15, 0.15), dm(-1.5, 1.5), dmu(0.1, 2.0);
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        const ModelParams p = params_for(dm(gen), dm(gen), dmu(gen));
        DiscreteState st = trivial_state(p, g);
        for (int i = 0; i < g.n; ++i) {
            st.rho[i] += dp(gen);
            if (i) st.theta[i] += dp(gen);
        }
        st.lambda_mass += dp(gen);
        st.lambda_x += dp(gen);
        st.lambda_y += dp(gen);
        worst = std::max(worst, compare_jacobian(jacobian(st, p), st, p).max_rel_error);
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = worst <= 1e-6 && secs < 10.0;
    return {ok, "max relative error " + num(worst) + " (<=1e-6) in " + num(secs) + "s (<10s)"};
}

// the first computed point of every branch sits on the predicted side of the
// onset, at the predicted distance scale
std::pair<bool, std::string> onset_sides() {
    ContinuationOptions opts;
    const Grid g(96);
    for (const Preset& p : kPresets) {
        const BifurcationInfo info = first_bifurcating_case(p.m, p.h);
        const BranchPoint seed = start_branch(info, g, opts);
        const double off = info.mu0 - seed.mu;
        if (!(off * info.sigma > 0.0))
            return {false, std::string("preset ") + p.name + ": first point on the wrong side"};
        if (!(std::abs(off) <= 2.0 * opts.a0 * opts.a0))
            return {false, std::string("preset ") + p.name + ": |mu-mu0|=" + num(std::abs(off)) +
                               " exceeds " + num(2.0 * opts.a0 * opts.a0)};
    }
    return {true, "all six first points on the sigma side, within 2*A0^2 of the onset"};
}

// growth of the density peak follows the leading amplitude law
std::pair<bool, std::string> amplitude_law() {
    const Preset p = *find_preset("ii");
    const BifurcationInfo info = first_bifurcating_case(p.m, p.h);
    ContinuationOptions opts;
    opts.max_points = 10;
    const Branch br = track_branch(info, Grid(256), opts);
    double sxx = 0.0, sxy = 0.0;
    for (const BranchPoint& bp : br.points) {
        const double x = info.mu0 - bp.mu;
        const double y = (bp.rho_max - 1.0) * (bp.rho_max - 1.0);
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = sxy / sxx;
    const bool ok = std::abs(slope - 6.4) <= 0.64;
    return {ok, "slope " + num(slope) + " vs 6.4 (10% allowed), " +
                    std::to_string(br.points.size()) + " points"};
}

// the order-2 seed converges to the solved state at a cubic-or-better rate
std::pair<bool, std::string> predictor_order() {
    // fine grid: the onset shift of the discretization scales as (2pi/N)^2
    // and would swamp the A^3 gap at coarser resolutions
    const Grid g(8192);
    NewtonOptions no;
    no.tol = 1e-8;  // rounding floor of the residual at this N is ~1.5e-9
    std::string detail;
    for (const char* name : {"ii", "vi"}) {
        const Preset p = *find_preset(name);
        const BifurcationInfo info = first_bifurcating_case(p.m, p.h);
        std::vector<double> la, ld;
        for (double A : {0.02, 0.04, 0.08}) {
            const auto [guess, mu] = predictor(info, A, 2, g);
            const SolveResult sr = newton_solve(guess, params_for(p.m, p.h, mu), no);
            if (!sr.converged)
                return {false, std::string("preset ") + name + ": no convergence at A=" + num(A)};
            la.push_back(std::log(A));
            ld.push_back(std::log(state_distance(sr.state, guess)));
        }
        const double n = double(la.size());
        double sa = 0.0, sd = 0.0, saa = 0.0, sad = 0.0;
        for (std::size_t k = 0; k < la.size(); ++k) {
            sa += la[k];
            sd += ld[k];
            saa += la[k] * la[k];
            sad += la[k] * ld[k];
        }
        const double slope = (n * sad - sa * sd) / (n * saa - sa * sa);
        if (!(slope >= 2.7))
            return {false, std::string("preset ") + name + ": gap slope " + num(slope) + " < 2.7"};
        detail += std::string(name) + ": " + num(slope) + "  ";
    }
    return {true, "gap-vs-amplitude slopes " + detail + "(>=2.7 required)"};
}

// the quartic energy coefficient emerges from solved states
std::pair<bool, std::string> energy_coefficient() {
    const Preset p = *find_preset("ii");
    const BifurcationInfo info = first_bifurcating_case(p.m, p.h);
    const Grid g(512);
    const double A = 0.04;
    NewtonOptions no;
    no.tol = 1e-9;
    const auto [guess, mu] = predictor(info, A, 2, g);
    const SolveResult sr = newton_solve(guess, params_for(p.m, p.h, mu), no);
    if (!sr.converged) return {false, "no convergence at A=0.04"};
    const double e4 = (discrete_energy(sr.state, params_for(p.m, p.h, mu)) - std::numbers::pi) /
                      (A * A * A * A);
    const double target = -32.0 * std::numbers::pi / 5.0;
    const double rel = std::abs(e4 - target) / std::abs(target);
    return {rel <= 0.15, "(E-pi)/A^4 = " + num(e4) + " vs " + num(target) + ", off by " +
                             num(100.0 * rel) + "% (15% allowed)"};
}

// reflecting rho through its mean turns solutions for (m,h) into solutions
// for (-m,h) without re-solving
std::pair<bool, std::string> reflection_symmetry() {
    const Preset p = *find_preset("v");
    const BifurcationInfo info = first_bifurcating_case(p.m, p.h);
    ContinuationOptions opts;
    opts.max_points = 20;
    const Branch br = track_branch(info, Grid(64), opts);
    if (br.points.size() < 20)
        return {false, "branch has only " + std::to_string(br.points.size()) + " points"};
    double worst = 0.0;
    for (const BranchPoint& bp : br.points) {
        const auto [mirror, mparams] = symmetry_transform(bp.state, params_for(p.m, p.h, bp.mu));
        worst = std::max(worst, residual(mirror, mparams).lpNorm<Eigen::Infinity>());
    }
    return {worst <= 1e-9,
            "20 reflected points, worst residual " + num(worst) + " (<=1e-9)"};
}

// far above every onset the round state is the only attractor
std::pair<bool, std::string> large_mu_uniqueness() {
    const Grid g(64);
    std::mt19937 gen(99);
    std::uniform_real_distribution<double> d(-0.1, 0.1);
    for (const Preset& p : kPresets) {
        const ModelParams mp = params_for(p.m, p.h, 10.0);
        for (int t = 0; t < 50; ++t) {
            DiscreteState st = trivial_state(mp, g);
            for (int i = 0; i < g.n; ++i) {
                st.rho[i] += d(gen);
                if (i) st.theta[i] += d(gen);
            }
            const SolveResult sr = newton_solve(st, mp);
            if (!sr.converged)
                return {false, std::string("preset ") + p.name + ": trial " +
                                   std::to_string(t) + " did not converge"};
            if ((sr.state.rho.array() - 1.0).abs().maxCoeff() > 1e-8)
                return {false, std::string("preset ") + p.name + ": trial " +
                                   std::to_string(t) + " left the round state"};
        }
    }
    return {true, "6 presets x 50 perturbed starts all fall back to the round state"};
}

// the subcritical branch of preset i turns around at a fold and ends up
// below the round-state energy
std::pair<bool, std::string> fold_passage() {
    const Preset p = *find_preset("i");
    const BifurcationInfo info = first_bifurcating_case(p.m, p.h);
    ContinuationOptions opts;
    opts.mu_min = 0.004;
    const Branch br = track_branch(info, Grid(96), opts);
    const auto& pts = br.points;
    if (pts.size() < 10)
        return {false, "branch has only " + std::to_string(pts.size()) + " points"};

    int fold = -1;
    for (std::size_t i = 1; i < pts.size() && fold < 0; ++i) {
        if (pts[i].det_sign * pts[i - 1].det_sign >= 0) continue;  // needs a +/- flip
        // accept the flip as a fold when mu reverses direction nearby
        const std::size_t lo = (i > 3) ? i - 3 : 1;
        const std::size_t hi = std::min(pts.size() - 1, i + 3);
        for (std::size_t k = lo; k + 1 <= hi && fold < 0; ++k) {
            const double before = pts[k].mu - pts[k - 1].mu;
            const double after = pts[k + 1].mu - pts[k].mu;
            if (before * after < 0.0) fold = int(i);
        }
    }
    if (fold < 0) return {false, "no determinant flip with a mu reversal found"};

    double emin = pts[fold].energy;
    for (std::size_t k = fold; k < pts.size(); ++k) emin = std::min(emin, pts[k].energy);
    if (!(emin < std::numbers::pi))
        return {false, "energy after the fold never drops below pi (min " + num(emin) + ")"};
    return {true, "fold at point " + std::to_string(fold) + " of " +
                      std::to_string(pts.size()) + ", energy reaches " + num(emin) + " < pi"};
}

} // namespace

int main() {
    run(1, classification_table);
    run(2, direction_roots);
    run(3, trivial_exactness);
    run(4, jacobian_agreement);
    run(5, onset_sides);
    run(6, amplitude_law);
    run(7, predictor_order);
    run(8, energy_coefficient);
    run(9, reflection_symmetry);
    run(10, large_mu_uniqueness);
    run(11, fold_passage);

    if (failures == 0) {
        std::printf("all 11 criteria passed\n");
        return 0;
    }
    std::printf("%d criteria FAILED\n", failures);
    return 1;
}
