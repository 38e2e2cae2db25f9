#include "elastica/bifurcation.hpp"

#include <cmath>
#include <limits>

#include "elastica/errors.hpp"

namespace elastica {

namespace {

constexpr double kCoincidenceTol = 1e-9;

bool mu_coincide(double a, double b) {
    return std::abs(a - b) <= kCoincidenceTol * (1.0 + std::abs(a) + std::abs(b));
}

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

// Fill sigma / amp_sq / e4 for a classified kernel. Leaves NaN where the
// quantity is undefined (case2, none, vanishing indicator).
void complete(BifurcationInfo& info) {
    info.amp_sq = nan_value();
    info.e4 = nan_value();
    info.sigma = 0;
    const double m = info.m, h = info.h;
    const double j2 = double(info.j) * info.j;
    switch (info.kind) {
    case BifCase::case0: {
        const double z = criticality_indicator(m, h);
        if (z == 0.0) return;
        info.sigma = (z > 0.0) ? 1 : -1;
        info.amp_sq = 8.0 * j2 * info.sigma * (2.0 * m * m - h) / z;
        info.e4 = -kTwoPi * j2 * j2 * (2.0 * m * m - h) / z;
        break;
    }
    case BifCase::case1_0:
        info.sigma = -1;
        info.amp_sq = 8.0 * j2 / (h * h);
        info.e4 = kTwoPi * j2 * j2 / (h * h);
        break;
    case BifCase::case1_1: {
        const double d = 3.0 * h + 2.0 * m * m;
        info.sigma = (d > 0.0) ? 1 : -1;
        info.amp_sq = -8.0 * info.sigma * (2.0 * m * m + 3.0 * h) / (3.0 * h * h * h);
        info.e4 = kTwoPi * d / (3.0 * h * h * h);
        break;
    }
    default:
        break;
    }
}

} // namespace

std::string to_string(BifCase c) {
    switch (c) {
    case BifCase::case0: return "case0";
    case BifCase::case1_0: return "case1_0";
    case BifCase::case1_1: return "case1_1";
    case BifCase::case2: return "case2";
    case BifCase::none: return "none";
    }
    return "none";
}

BifurcationInfo classify(double m, double h, int j) {
    BifurcationInfo info;
    info.m = m;
    info.h = h;
    info.j = std::abs(j);
    info.mu0 = nan_value();
    if (info.j == 0) {
        complete(info);
        return info;
    }

    if (m == 0.0) {
        if (h < 0.0) {
            info.kind = BifCase::case1_0;
            info.mu0 = -h / (2.0 * double(info.j) * info.j);
        }
        complete(info);
        return info;
    }

    if (info.j >= 2) {
        if (h < 2.0 * m * m) {
            const double mu_c = (m * m - 0.5 * h) / (double(info.j) * info.j);
            if (h < 0.0 && mu_coincide(mu_c, -0.5 * h)) {
                info.kind = BifCase::case2;
                info.mu0 = -0.5 * h;
            } else {
                info.kind = BifCase::case0;
                info.mu0 = mu_c;
            }
        }
        complete(info);
        return info;
    }

    // j == 1, m != 0: mode-1 kernel exists for h < 0 unless its critical value
    // collides with a case0 mode k >= 2, i.e. -h/2 = (m^2 - h/2)/k^2.
    if (h < 0.0) {
        const double k_real = std::sqrt(1.0 - 2.0 * m * m / h);
        const int k = int(std::lround(k_real));
        if (k >= 2 && mu_coincide((m * m - 0.5 * h) / (double(k) * k), -0.5 * h)) {
            info.kind = BifCase::case2;
            info.j = k;
        } else {
            info.kind = BifCase::case1_1;
        }
        info.mu0 = -0.5 * h;
    }
    complete(info);
    return info;
}

BifurcationInfo first_bifurcating_case(double m, double h, int j_max) {
    BifurcationInfo best;
    best.m = m;
    best.h = h;
    best.mu0 = nan_value();
    for (int j = 1; j <= j_max; ++j) {
        BifurcationInfo c = classify(m, h, j);
        if (c.kind == BifCase::none) continue;
        if (best.kind == BifCase::none || c.mu0 > best.mu0) best = c;
    }
    return best;
}

double criticality_indicator(double m, double h) {
    const double m2 = m * m;
    return -14.0 * m2 * m2 * m2 + 36.0 * m2 * m2 * h - 18.0 * m2 * h * h + h * h * h;
}

std::pair<double, double> criticality_roots() {
    // indicator(m, z m^2) = m^6 (z^3 - 18 z^2 + 36 z - 14)
    auto cubic = [](double z) { return ((z - 18.0) * z + 36.0) * z - 14.0; };
    auto bisect = [&](double lo, double hi) {
        double flo = cubic(lo);
        for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fmid = cubic(mid);
            if ((flo < 0.0) == (fmid < 0.0)) {
                lo = mid;
                flo = fmid;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    };
    return {bisect(0.4, 0.6), bisect(1.6, 1.8)};
}

double amplitude_squared(const BifurcationInfo& info) {
    if (info.kind == BifCase::none)
        throw DegenerateModeError("no kernel at these parameters");
    if (info.kind == BifCase::case2)
        throw DegenerateModeError("two-parameter kernel has no single amplitude law");
    if (info.kind == BifCase::case0 && criticality_indicator(info.m, info.h) == 0.0)
        throw DegenerateModeError("criticality indicator vanishes");
    return info.amp_sq;
}

double e4_coefficient(const BifurcationInfo& info) {
    if (info.kind == BifCase::none || info.kind == BifCase::case2)
        throw DegenerateModeError("energy coefficient undefined for this kind");
    if (info.kind == BifCase::case0 && criticality_indicator(info.m, info.h) == 0.0)
        throw DegenerateModeError("criticality indicator vanishes");
    return info.e4;
}

Mode mode(const BifurcationInfo& info, double amplitude, double phase, const Grid& grid) {
    if (info.kind == BifCase::none)
        throw DegenerateModeError("no kernel at these parameters");
    if (info.kind == BifCase::case2)
        throw DegenerateModeError("two-parameter kernel; supply both amplitudes");
    if (amplitude == 0.0) throw DegenerateModeError("zero amplitude");

    Mode md;
    md.rho1.resize(grid.n);
    md.theta1.setZero(grid.n);
    const double m = info.m;
    const int j = info.j;
    for (int i = 0; i < grid.n; ++i) {
        const double arg = j * grid.s(i) - phase;
        md.rho1[i] = -amplitude * std::cos(arg);
        if (info.kind == BifCase::case0)
            md.theta1[i] = (amplitude * m / j) * (std::sin(arg) + std::sin(phase));
    }
    if (info.kind == BifCase::case1_1) {
        md.lambda_x1 = -amplitude * m * std::cos(phase);
        md.lambda_y1 = -amplitude * m * std::sin(phase);
    }
    return md;
}

Mode mode_case2(const BifurcationInfo& info, double amp_j, double phase_j,
                double amp_1, double phase_1, const Grid& grid) {
    if (info.kind != BifCase::case2)
        throw DegenerateModeError("parameters are not degenerate");
    Mode md;
    md.rho1.resize(grid.n);
    md.theta1.resize(grid.n);
    const double m = info.m;
    const int j = info.j;
    for (int i = 0; i < grid.n; ++i) {
        const double s = grid.s(i);
        const double arg_j = j * s - phase_j;
        md.rho1[i] = -amp_j * std::cos(arg_j) - amp_1 * std::cos(s - phase_1);
        md.theta1[i] = (amp_j * m / j) * (std::sin(arg_j) + std::sin(phase_j));
    }
    md.lambda_x1 = -amp_1 * m * std::cos(phase_1);
    md.lambda_y1 = -amp_1 * m * std::sin(phase_1);
    return md;
}

double second_variation(const Mode& md, const ModelParams& params, const Grid& grid) {
    const int n = grid.n;
    const double ds = grid.ds;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const int ip = (i + 1) % n;
        const double rho_mid = 0.5 * (md.rho1[i] + md.rho1[ip]);
        const double dtheta = (md.theta1[ip] - md.theta1[i]) / ds;
        const double drho = (md.rho1[ip] - md.rho1[i]) / ds;
        acc += ds * (0.5 * params.h * rho_mid * rho_mid + 2.0 * params.m * rho_mid * dtheta +
                     dtheta * dtheta + params.mu * drho * drho);
    }
    return acc;
}

} // namespace elastica
