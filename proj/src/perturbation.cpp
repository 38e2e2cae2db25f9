#include "elastica/perturbation.hpp"

#include <cmath>

#include "elastica/errors.hpp"

namespace elastica {

namespace {

constexpr double kSolvabilityTol = 1e-10;

void require_kernel(const BifurcationInfo& info) {
    if (info.kind == BifCase::none)
        throw DegenerateModeError("no kernel at these parameters");
    if (info.kind == BifCase::case2)
        throw DegenerateModeError("two-parameter kernel has no one-amplitude expansion");
}

void require_nonzero(double denom, const char* what) {
    if (denom == 0.0) throw ResonantDenominatorError(what);
}

// amp * (sin(k s - phase) + sin(phase' )) with the constant chosen so the
// value at s = 0 vanishes: sin(-phase) cancels against +sin(phase).
void add_sin_with_offset(TrigPoly& p, int k, double amp, double phase) {
    p.add_sin(k, amp, phase);
    p.add_const(amp * std::sin(phase));
}

} // namespace

ExpansionOrder first_order(const BifurcationInfo& info, double a1, double phase1) {
    require_kernel(info);
    ExpansionOrder u;
    const double m = info.m;
    const int j = info.j;
    u.rho.add_cos(j, -a1, phase1);
    switch (info.kind) {
    case BifCase::case0:
        add_sin_with_offset(u.theta, j, a1 * m / j, phase1);
        break;
    case BifCase::case1_0:
        break;
    case BifCase::case1_1:
        u.lambda_x = -a1 * m * std::cos(phase1);
        u.lambda_y = -a1 * m * std::sin(phase1);
        break;
    default:
        break;
    }
    return u;
}

ExpansionOrder second_order(const BifurcationInfo& info, double a1,
                            const ExpansionChoices& ch) {
    require_kernel(info);
    ExpansionOrder u;
    const double m = info.m, h = info.h;
    const int j = info.j;
    const double a2 = ch.amp2, p1 = ch.phase1, p2 = ch.phase2;

    switch (info.kind) {
    case BifCase::case0: {
        const double d = 2.0 * m * m - h;
        require_nonzero(d, "2 m^2 - h");
        u.rho.add_cos(j, -a2, p2);
        u.rho.add_cos(2 * j, -a1 * a1 * m * (m * m - h) / (2.0 * d), 2.0 * p1);
        add_sin_with_offset(u.theta, j, m * a2 / j, p2);
        add_sin_with_offset(u.theta, 2 * j,
                            a1 * a1 * (6.0 * m * m * m * m - 6.0 * m * m * h + h * h) /
                                (8.0 * j * d),
                            2.0 * p1);
        u.lambda_mass = -a1 * a1 * m * (m * m - 2.0 * h) / 4.0;
        break;
    }
    case BifCase::case1_0:
        u.rho.add_cos(j, -a2, p2);
        add_sin_with_offset(u.theta, 2 * j, -a1 * a1 * h / (8.0 * j), 2.0 * p1);
        break;
    case BifCase::case1_1: {
        const double d = 2.0 * m * m + 3.0 * h;
        require_nonzero(d, "2 m^2 + 3 h");
        u.rho.add_cos(1, -a2, p2);
        u.rho.add_cos(2, -a1 * a1 * m * h / (2.0 * d), 2.0 * p1);
        add_sin_with_offset(u.theta, 2, -3.0 * a1 * a1 * h * h / (8.0 * d), 2.0 * p1);
        u.lambda_x = -a2 * m * std::cos(p2);
        u.lambda_y = -a2 * m * std::sin(p2);
        break;
    }
    default:
        break;
    }
    return u;
}

ExpansionOrder third_order(const BifurcationInfo& info, double a1,
                           const ExpansionChoices& ch) {
    require_kernel(info);
    const double m = info.m, h = info.h;
    const int j = info.j;
    const double j2 = double(j) * j;

    // Solvability of the third-order system ties the leading amplitude to the
    // branch direction; a1 = 0 (the round branch) always passes.
    double factor = 0.0;
    switch (info.kind) {
    case BifCase::case0: {
        const double d = 2.0 * m * m - h;
        require_nonzero(d, "2 m^2 - h");
        factor = j2 * info.sigma - a1 * a1 * criticality_indicator(m, h) / (8.0 * d);
        break;
    }
    case BifCase::case1_0:
        factor = j2 * info.sigma + a1 * a1 * h * h / 8.0;
        break;
    case BifCase::case1_1: {
        const double d = 2.0 * m * m + 3.0 * h;
        require_nonzero(d, "2 m^2 + 3 h");
        factor = info.sigma + a1 * a1 * 3.0 * h * h * h / (8.0 * d);
        break;
    }
    default:
        break;
    }
    if (a1 != 0.0 && std::abs(factor) > kSolvabilityTol) throw SolvabilityError(factor);

    ExpansionOrder u;
    const double a2 = ch.amp2, a3 = ch.amp3;
    const double p1 = ch.phase1, p2 = ch.phase2, p3 = ch.phase3;

    switch (info.kind) {
    case BifCase::case0: {
        const double d = 2.0 * m * m - h;
        const double m2 = m * m, h2 = h * h;
        u.rho.add_cos(j, -a3, p3);
        u.rho.add_cos(2 * j, -a1 * a2 * m * (m2 - h) / d, p1 + p2);
        u.rho.add_cos(3 * j,
                      -(a1 * a1 * a1 / 4.0) *
                          (14.0 * m2 * m2 * m2 - 28.0 * m2 * m2 * h + 14.0 * m2 * h2 - h2 * h) /
                          (8.0 * d * d),
                      3.0 * p1);
        add_sin_with_offset(u.theta, j, m * a3 / j, p3);
        add_sin_with_offset(u.theta, j, a1 * a1 * a1 * m * (2.0 * m2 - 3.0 * h) / (4.0 * j), p1);
        add_sin_with_offset(u.theta, 2 * j,
                            a1 * a2 * (6.0 * m2 * (m2 - h) + h2) / (4.0 * j * d), p1 + p2);
        add_sin_with_offset(u.theta, 3 * j,
                            a1 * a1 * a1 * m *
                                (78.0 * m2 * m2 * m2 - 156.0 * m2 * m2 * h + 94.0 * m2 * h2 -
                                 17.0 * h2 * h) /
                                (96.0 * j * d * d),
                            3.0 * p1);
        u.lambda_mass = -a1 * a2 * m * (m2 - 2.0 * h) * std::cos(p1 - p2) / 2.0;
        break;
    }
    case BifCase::case1_0:
        u.rho.add_cos(j, -a3, p3);
        u.rho.add_cos(3 * j, a1 * a1 * a1 * h / 32.0, 3.0 * p1);
        add_sin_with_offset(u.theta, 2 * j, -a1 * a2 * h / (4.0 * j), p1 + p2);
        break;
    case BifCase::case1_1: {
        const double d = 2.0 * m * m + 3.0 * h;
        const double d3 = 4.0 * h + m * m;
        require_nonzero(d3, "4 h + m^2");
        const double h2 = h * h;
        const double k1 = a1 * a1 * a1 * h2 / (16.0 * d);
        u.rho.add_cos(1, -a3, p3);
        u.rho.add_cos(1, -7.0 * k1, p1);
        u.rho.add_sin(1, -6.0 * k1 * std::sin(2.0 * p1), p1);
        u.rho.add_cos(2, -a1 * a2 * m * h / d, p1 + p2);
        u.rho.add_cos(3, -3.0 * a1 * a1 * a1 * h2 * (3.0 * m * m - 2.0 * h) / (16.0 * d * d3),
                      3.0 * p1);
        add_sin_with_offset(u.theta, 2, -3.0 * a1 * a2 * h2 / (4.0 * d), p1 + p2);
        add_sin_with_offset(u.theta, 3, -7.0 * a1 * a1 * a1 * h2 * h * m / (8.0 * d * d3),
                            3.0 * p1);
        u.lambda_x = -a3 * m * std::cos(p3);
        u.lambda_y = -a3 * m * std::sin(p3);
        break;
    }
    default:
        break;
    }
    return u;
}

Expansion build_expansion(const BifurcationInfo& info, int order,
                          const ExpansionChoices& choices) {
    if (order < 1 || order > 3) throw std::invalid_argument("expansion order must be 1..3");
    Expansion ex;
    ex.info = info;
    ex.choices = choices;
    ex.a1 = std::sqrt(amplitude_squared(info));
    ex.max_order = order;
    ex.order1 = first_order(info, ex.a1, choices.phase1);
    if (order >= 2) ex.order2 = second_order(info, ex.a1, choices);
    if (order >= 3) ex.order3 = third_order(info, ex.a1, choices);
    return ex;
}

double eval_rho(const Expansion& ex, double A, double s) {
    double v = 1.0 + A * ex.order1.rho(s);
    if (ex.max_order >= 2) v += A * A * ex.order2.rho(s);
    if (ex.max_order >= 3) v += A * A * A * ex.order3.rho(s);
    return v;
}

double eval_theta(const Expansion& ex, double A, double s) {
    double v = s + A * ex.order1.theta(s);
    if (ex.max_order >= 2) v += A * A * ex.order2.theta(s);
    if (ex.max_order >= 3) v += A * A * A * ex.order3.theta(s);
    return v;
}

double predicted_mu(const Expansion& ex, double A) {
    return ex.info.mu0 - ex.info.sigma * A * A;
}

std::pair<DiscreteState, double> predictor(const BifurcationInfo& info, double A, int order,
                                           const Grid& grid, const ExpansionChoices& choices) {
    Expansion ex = build_expansion(info, order, choices);
    DiscreteState st(grid);
    for (int i = 0; i < grid.n; ++i) {
        const double s = grid.s(i);
        st.rho[i] = eval_rho(ex, A, s);
        st.theta[i] = eval_theta(ex, A, s);
    }
    st.theta[0] = 0.0;  // exact by construction; avoid rounding residue
    const double A2 = A * A, A3 = A2 * A;
    st.lambda_mass = -0.5 * info.m + A * ex.order1.lambda_mass + A2 * ex.order2.lambda_mass +
                     A3 * ex.order3.lambda_mass;
    st.lambda_x = A * ex.order1.lambda_x + A2 * ex.order2.lambda_x + A3 * ex.order3.lambda_x;
    st.lambda_y = A * ex.order1.lambda_y + A2 * ex.order2.lambda_y + A3 * ex.order3.lambda_y;
    return {st, predicted_mu(ex, A)};
}

double continuum_residual(const Expansion& ex, double A, int samples) {
    const double A2 = A * A, A3 = A2 * A;
    TrigPoly prho = ex.order1.rho, ptheta = ex.order1.theta;
    prho *= A;
    ptheta *= A;
    double lm = -0.5 * ex.info.m + A * ex.order1.lambda_mass;
    double lx = A * ex.order1.lambda_x;
    double ly = A * ex.order1.lambda_y;
    if (ex.max_order >= 2) {
        TrigPoly r2 = ex.order2.rho, t2 = ex.order2.theta;
        r2 *= A2;
        t2 *= A2;
        prho += r2;
        ptheta += t2;
        lm += A2 * ex.order2.lambda_mass;
        lx += A2 * ex.order2.lambda_x;
        ly += A2 * ex.order2.lambda_y;
    }
    if (ex.max_order >= 3) {
        TrigPoly r3 = ex.order3.rho, t3 = ex.order3.theta;
        r3 *= A3;
        t3 *= A3;
        prho += r3;
        ptheta += t3;
        lm += A3 * ex.order3.lambda_mass;
        lx += A3 * ex.order3.lambda_x;
        ly += A3 * ex.order3.lambda_y;
    }
    const double mu = predicted_mu(ex, A);
    const TrigPoly drho = prho.derivative();
    const TrigPoly ddrho = drho.derivative();
    const TrigPoly dtheta = ptheta.derivative();
    const TrigPoly ddtheta = dtheta.derivative();

    const double m = ex.info.m, h = ex.info.h;
    double worst = std::abs(kTwoPi * prho.mean());  // mass defect
    double cx = 0.0, cy = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double s = kTwoPi * i / samples;
        const double rho = 1.0 + prho(s);
        const double theta = s + ptheta(s);
        const double thd = 1.0 + dtheta(s);
        const double bp = m + h * (rho - 1.0);
        const double b = 1.0 + m * (rho - 1.0) + 0.5 * h * (rho - 1.0) * (rho - 1.0);
        const double f_rho = mu * ddrho(s) - 0.5 * bp * thd * thd - lm;
        const double f_theta =
            bp * drho(s) * thd + b * ddtheta(s) + lx * std::sin(theta) - ly * std::cos(theta);
        worst = std::max({worst, std::abs(f_rho), std::abs(f_theta)});
        cx += std::cos(theta);
        cy += std::sin(theta);
    }
    cx *= kTwoPi / samples;
    cy *= kTwoPi / samples;
    return std::max({worst, std::abs(cx), std::abs(cy)});
}

} // namespace elastica
