#include "elastica/state_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace elastica {

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void append_array(std::string& out, const Eigen::VectorXd& v) {
    out += '[';
    for (int i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += format_real(v[i]);
    }
    out += ']';
}

[[noreturn]] void bad_state(const std::string& why) {
    throw std::runtime_error("unreadable state: " + why);
}

double finite_number(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number()) bad_state(std::string("missing field ") + key);
    const double v = j[key].get<double>();
    if (!std::isfinite(v)) bad_state(std::string("non-finite value in ") + key);
    return v;
}

Eigen::VectorXd finite_vector(const nlohmann::json& j, const char* key, int expect) {
    if (!j.contains(key) || !j[key].is_array()) bad_state(std::string("missing array ") + key);
    const auto& arr = j[key];
    if (int(arr.size()) != expect) bad_state(std::string("wrong length for ") + key);
    Eigen::VectorXd v(expect);
    for (int i = 0; i < expect; ++i) {
        if (!arr[i].is_number()) bad_state(std::string("non-numeric entry in ") + key);
        v[i] = arr[i].get<double>();
        if (!std::isfinite(v[i])) bad_state(std::string("non-finite value in ") + key);
    }
    return v;
}

} // namespace

std::string state_to_json(const DiscreteState& st, const ModelParams& params) {
    std::string out;
    out.reserve(64 + 40 * st.grid.n);
    out += "{\"n\": " + std::to_string(st.grid.n);
    out += ", \"mu\": " + format_real(params.mu);
    out += ", \"m\": " + format_real(params.m);
    out += ", \"h\": " + format_real(params.h);
    out += ", \"rho\": ";
    append_array(out, st.rho);
    out += ", \"theta\": ";
    append_array(out, st.theta);
    out += ", \"lambda\": [" + format_real(st.lambda_mass) + ", " + format_real(st.lambda_x) +
           ", " + format_real(st.lambda_y) + "]}";
    out += '\n';
    return out;
}

void write_state(const std::string& path, const DiscreteState& st, const ModelParams& params) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << state_to_json(st, params);
    if (!f) throw std::runtime_error("write failed for " + path);
}

LoadedState read_state(const std::string& path) {
    std::ifstream f(path);
    if (!f) bad_state("cannot open " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        bad_state(e.what());
    }
    if (!j.is_object()) bad_state("top level is not an object");
    if (!j.contains("n") || !j["n"].is_number_integer()) bad_state("missing field n");
    const int n = j["n"].get<int>();
    if (n < 8) bad_state("grid too small");

    LoadedState out;
    out.state = DiscreteState(Grid(n));
    out.params.mu = finite_number(j, "mu");
    out.params.m = finite_number(j, "m");
    out.params.h = finite_number(j, "h");
    out.state.rho = finite_vector(j, "rho", n);
    out.state.theta = finite_vector(j, "theta", n);
    const Eigen::VectorXd lam = finite_vector(j, "lambda", 3);
    out.state.lambda_mass = lam[0];
    out.state.lambda_x = lam[1];
    out.state.lambda_y = lam[2];
    if (out.state.theta[0] != 0.0) bad_state("theta[0] must be 0");
    return out;
}

void write_branch_csv(const std::string& path, const Branch& branch) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << "mu,rho_min,rho_max,energy,newton_iters,det_sign,arclength\n";
    for (const BranchPoint& p : branch.points) {
        f << format_real(p.mu) << ',' << format_real(p.rho_min) << ',' << format_real(p.rho_max)
          << ',' << format_real(p.energy) << ',' << p.newton_iters << ',' << p.det_sign << ','
          << format_real(p.arclength) << '\n';
    }
    if (!f) throw std::runtime_error("write failed for " + path);
}

} // namespace elastica
