// Command-line front end: classification tables, expansion predictors, single
// Newton solves, branch sweeps, SVG shape rendering, and the built-in
// verification suite.
//
// Exit codes: 0 success, 1 usage/config error, 2 solver failure,
// 3 verification failure.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "elastica/assembly.hpp"
#include "elastica/bifurcation.hpp"
#include "elastica/continuation.hpp"
#include "elastica/errors.hpp"
#include "elastica/model.hpp"
#include "elastica/perturbation.hpp"
#include "elastica/presets.hpp"
#include "elastica/render.hpp"
#include "elastica/solver.hpp"
#include "elastica/state_io.hpp"
#include "elastica/verify.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;
constexpr int kExitVerify = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    std::string preset;
    double m = 1.0;
    double h = 1.0;
    std::string j = "auto";
    int jmax = 8;
    int n = 256;
    std::optional<double> mu;
    double mu_min = 1e-4;
    double mu_max = 2.0;
    double a0 = 0.05;
    double amplitude = 0.05;
    int order = 2;
    double tol = 1e-10;
    int max_iters = 50;
    int max_points = 400;
    double initial_step = 1e-3;
    double min_step = 1e-6;
    double max_step = 0.05;
    std::string output_dir = ".";
    double stroke_width = 0.03;
    double width_gain = 2.0;
    int canvas = 640;
};

double parse_real(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw UsageError("config key '" + key + "': cannot parse real '" + value + "'");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw UsageError("config key '" + key + "': cannot parse integer '" + value + "'");
    }
}

void apply_key(Config& cfg, const std::string& key, const std::string& value) {
    if (key == "preset") cfg.preset = value;
    else if (key == "m") cfg.m = parse_real(key, value);
    else if (key == "h") cfg.h = parse_real(key, value);
    else if (key == "j") cfg.j = value;
    else if (key == "jmax") cfg.jmax = parse_int(key, value);
    else if (key == "n") cfg.n = parse_int(key, value);
    else if (key == "mu") cfg.mu = parse_real(key, value);
    else if (key == "mu_min") cfg.mu_min = parse_real(key, value);
    else if (key == "mu_max") cfg.mu_max = parse_real(key, value);
    else if (key == "a0") cfg.a0 = parse_real(key, value);
    else if (key == "amplitude") cfg.amplitude = parse_real(key, value);
    else if (key == "order") cfg.order = parse_int(key, value);
    else if (key == "tol") cfg.tol = parse_real(key, value);
    else if (key == "max_iters") cfg.max_iters = parse_int(key, value);
    else if (key == "max_points") cfg.max_points = parse_int(key, value);
    else if (key == "initial_step") cfg.initial_step = parse_real(key, value);
    else if (key == "min_step") cfg.min_step = parse_real(key, value);
    else if (key == "max_step") cfg.max_step = parse_real(key, value);
    else if (key == "output_dir") cfg.output_dir = value;
    else if (key == "stroke_width") cfg.stroke_width = parse_real(key, value);
    else if (key == "width_gain") cfg.width_gain = parse_real(key, value);
    else if (key == "canvas") cfg.canvas = parse_int(key, value);
    else throw UsageError("unknown config key '" + key + "'");
}

std::string trimmed(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

void load_config_file(Config& cfg, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot open config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const std::string t = trimmed(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
        apply_key(cfg, trimmed(t.substr(0, eq)), trimmed(t.substr(eq + 1)));
    }
}

// Flags that were actually passed override config-file values, which override
// the environment, which overrides defaults.
struct Overrides {
    std::string config_file;
    std::string preset;
    std::optional<double> m, h, mu, mu_min, mu_max, a0, amplitude, tol;
    std::optional<double> initial_step, min_step, max_step, stroke_width, width_gain;
    std::optional<int> jmax, n, order, max_iters, max_points, canvas;
    std::string j;
    std::string output_dir;
};

void add_common_options(CLI::App* cmd, Overrides& ov) {
    // long-only help so -h stays free; --h is the stiffness coefficient
    cmd->set_help_flag("--help", "print help and exit");
    cmd->add_option("--config", ov.config_file, "key=value config file");
    cmd->add_option("--preset", ov.preset, "named stiffness profile (i..vi)");
    cmd->add_option("--m", ov.m, "linear stiffness slope m");
    cmd->add_option("--h", ov.h, "quadratic stiffness coefficient h");
    cmd->add_option("--j", ov.j, "mode index, or 'auto' for the first-bifurcating one");
    cmd->add_option("--jmax", ov.jmax, "largest mode index scanned");
    cmd->add_option("--n", ov.n, "grid size");
    cmd->add_option("--mu", ov.mu, "penalty parameter mu");
    cmd->add_option("--mu-min", ov.mu_min, "lower mu bound");
    cmd->add_option("--mu-max", ov.mu_max, "upper mu bound");
    cmd->add_option("--a0", ov.a0, "branch start amplitude");
    cmd->add_option("--amplitude", ov.amplitude, "expansion amplitude");
    cmd->add_option("--order", ov.order, "expansion order (1..3)");
    cmd->add_option("--tol", ov.tol, "Newton residual tolerance");
    cmd->add_option("--max-iters", ov.max_iters, "Newton iteration cap");
    cmd->add_option("--max-points", ov.max_points, "continuation point cap");
    cmd->add_option("--initial-step", ov.initial_step, "continuation initial step");
    cmd->add_option("--min-step", ov.min_step, "continuation minimal step");
    cmd->add_option("--max-step", ov.max_step, "continuation maximal step");
    cmd->add_option("--out", ov.output_dir, "output directory");
    cmd->add_option("--stroke-width", ov.stroke_width, "base stroke width");
    cmd->add_option("--width-gain", ov.width_gain, "stroke width gain with density");
    cmd->add_option("--canvas", ov.canvas, "canvas pixel size");
}

Config resolve(const Overrides& ov) {
    Config cfg;
    if (const char* env = std::getenv("ELASTICA_OUTPUT_DIR")) cfg.output_dir = env;
    if (!ov.config_file.empty()) load_config_file(cfg, ov.config_file);

    std::string preset_name = !ov.preset.empty() ? ov.preset : cfg.preset;
    if (!preset_name.empty()) {
        const auto p = elastica::find_preset(preset_name);
        if (!p) throw UsageError("unknown preset '" + preset_name + "'");
        cfg.preset = preset_name;
        cfg.m = p->m;
        cfg.h = p->h;
    }
    if (ov.m) cfg.m = *ov.m;
    if (ov.h) cfg.h = *ov.h;
    if (!ov.j.empty()) cfg.j = ov.j;
    if (ov.jmax) cfg.jmax = *ov.jmax;
    if (ov.n) cfg.n = *ov.n;
    if (ov.mu) cfg.mu = *ov.mu;
    if (ov.mu_min) cfg.mu_min = *ov.mu_min;
    if (ov.mu_max) cfg.mu_max = *ov.mu_max;
    if (ov.a0) cfg.a0 = *ov.a0;
    if (ov.amplitude) cfg.amplitude = *ov.amplitude;
    if (ov.order) cfg.order = *ov.order;
    if (ov.tol) cfg.tol = *ov.tol;
    if (ov.max_iters) cfg.max_iters = *ov.max_iters;
    if (ov.max_points) cfg.max_points = *ov.max_points;
    if (ov.initial_step) cfg.initial_step = *ov.initial_step;
    if (ov.min_step) cfg.min_step = *ov.min_step;
    if (ov.max_step) cfg.max_step = *ov.max_step;
    if (!ov.output_dir.empty()) cfg.output_dir = ov.output_dir;
    if (ov.stroke_width) cfg.stroke_width = *ov.stroke_width;
    if (ov.width_gain) cfg.width_gain = *ov.width_gain;
    if (ov.canvas) cfg.canvas = *ov.canvas;

    if (cfg.n < 8) throw UsageError("config key 'n': grid needs at least 8 sides");
    if (cfg.order < 1 || cfg.order > 3) throw UsageError("config key 'order': must be 1..3");
    return cfg;
}

std::optional<int> explicit_mode(const Config& cfg) {
    if (cfg.j == "auto") return std::nullopt;
    try {
        std::size_t pos = 0;
        const int v = std::stoi(cfg.j, &pos);
        if (pos != cfg.j.size() || v < 1) throw std::invalid_argument(cfg.j);
        return v;
    } catch (const std::exception&) {
        throw UsageError("config key 'j': expected positive integer or 'auto', got '" + cfg.j +
                         "'");
    }
}

elastica::BifurcationInfo pick_mode(const Config& cfg) {
    const auto jexp = explicit_mode(cfg);
    const elastica::BifurcationInfo info =
        jexp ? elastica::classify(cfg.m, cfg.h, *jexp)
             : elastica::first_bifurcating_case(cfg.m, cfg.h, cfg.jmax);
    if (info.kind == elastica::BifCase::none)
        throw UsageError("no critical mode at m=" + elastica::format_real(cfg.m) +
                         ", h=" + elastica::format_real(cfg.h) +
                         (jexp ? " for j=" + std::to_string(*jexp) : ""));
    if (info.kind == elastica::BifCase::case2)
        throw UsageError("degenerate two-mode kernel at these parameters; perturb m or h");
    return info;
}

elastica::ContinuationOptions continuation_options(const Config& cfg) {
    elastica::ContinuationOptions opts;
    opts.a0 = cfg.a0;
    opts.initial_step = cfg.initial_step;
    opts.min_step = cfg.min_step;
    opts.max_step = cfg.max_step;
    opts.max_points = cfg.max_points;
    opts.mu_min = cfg.mu_min;
    opts.mu_max = cfg.mu_max;
    opts.newton.tol = cfg.tol;
    opts.newton.max_iters = cfg.max_iters;
    return opts;
}

std::filesystem::path ensure_output_dir(const Config& cfg) {
    std::filesystem::path dir(cfg.output_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

json info_row(const elastica::BifurcationInfo& info) {
    json row;
    row["j"] = info.j;
    row["case"] = elastica::to_string(info.kind);
    if (info.kind == elastica::BifCase::none) return row;
    row["mu0"] = info.mu0;
    row["sigma"] = info.sigma;
    row["amp_sq"] = std::isfinite(info.amp_sq) ? json(info.amp_sq) : json();
    row["e4"] = std::isfinite(info.e4) ? json(info.e4) : json();
    return row;
}

int cmd_classify(const Config& cfg) {
    json out;
    out["m"] = cfg.m;
    out["h"] = cfg.h;
    out["rows"] = json::array();
    for (int j = 1; j <= cfg.jmax; ++j)
        out["rows"].push_back(info_row(elastica::classify(cfg.m, cfg.h, j)));
    const elastica::BifurcationInfo first = elastica::first_bifurcating_case(cfg.m, cfg.h, cfg.jmax);
    out["first"] = (first.kind == elastica::BifCase::none) ? json() : info_row(first);
    const auto [z1, z2] = elastica::criticality_roots();
    out["subcritical_window"] = {{"lower", z1 * cfg.m * cfg.m}, {"upper", z2 * cfg.m * cfg.m}};
    out["in_subcritical_window"] = (cfg.h > z1 * cfg.m * cfg.m && cfg.h < z2 * cfg.m * cfg.m);
    std::cout << out.dump(2) << '\n';
    return kExitOk;
}

int cmd_predict(const Config& cfg) {
    const elastica::BifurcationInfo info = pick_mode(cfg);
    const elastica::Grid grid(cfg.n);
    const auto [st, mu] = elastica::predictor(info, cfg.amplitude, cfg.order, grid);
    elastica::ModelParams p;
    p.m = cfg.m;
    p.h = cfg.h;
    p.mu = mu;
    const auto dir = ensure_output_dir(cfg);
    const std::string name = "predict_" + elastica::to_string(info.kind) + "_j" +
                             std::to_string(info.j) + ".json";
    elastica::write_state((dir / name).string(), st, p);
    std::cout << "mode " << elastica::to_string(info.kind) << " j=" << info.j
              << " mu0=" << elastica::format_real(info.mu0)
              << " mu=" << elastica::format_real(mu) << '\n'
              << "wrote " << (dir / name).string() << '\n';
    return kExitOk;
}

int cmd_solve(const Config& cfg, const std::string& state_file) {
    elastica::ModelParams p;
    elastica::DiscreteState initial;
    if (!state_file.empty()) {
        auto loaded = elastica::read_state(state_file);
        initial = loaded.state;
        p = loaded.params;
        if (cfg.mu) p.mu = *cfg.mu;
    } else {
        const elastica::BifurcationInfo info = pick_mode(cfg);
        const elastica::Grid grid(cfg.n);
        auto [st, mu] = elastica::predictor(info, cfg.amplitude, cfg.order, grid);
        initial = st;
        p.m = cfg.m;
        p.h = cfg.h;
        p.mu = cfg.mu ? *cfg.mu : mu;
    }
    elastica::NewtonOptions no;
    no.tol = cfg.tol;
    no.max_iters = cfg.max_iters;
    const elastica::SolveResult res = elastica::newton_solve(initial, p, no);
    if (!res.converged) {
        std::cerr << "solver failure: residual "
                  << elastica::format_real(res.residual_history.back()) << " after "
                  << res.iterations << " iterations\n";
        return kExitSolver;
    }
    const auto dir = ensure_output_dir(cfg);
    const std::string name = "solve_n" + std::to_string(initial.grid.n) + ".json";
    elastica::write_state((dir / name).string(), res.state, p);
    std::cout << "converged in " << res.iterations << " iterations, residual "
              << elastica::format_real(res.residual_history.back()) << '\n'
              << "energy " << elastica::format_real(elastica::discrete_energy(res.state, p))
              << '\n'
              << "wrote " << (dir / name).string() << '\n';
    return kExitOk;
}

int cmd_continue(const Config& cfg) {
    std::vector<elastica::BifurcationInfo> targets;
    if (const auto jexp = explicit_mode(cfg)) {
        targets.push_back(pick_mode(cfg));
    } else {
        for (int j = 1; j <= cfg.jmax; ++j) {
            const auto info = elastica::classify(cfg.m, cfg.h, j);
            if (info.kind == elastica::BifCase::case0 ||
                info.kind == elastica::BifCase::case1_0 ||
                info.kind == elastica::BifCase::case1_1)
                targets.push_back(info);
        }
        if (targets.empty())
            throw UsageError("no critical modes at m=" + elastica::format_real(cfg.m) +
                             ", h=" + elastica::format_real(cfg.h));
    }

    const auto dir = ensure_output_dir(cfg);
    const elastica::ContinuationOptions opts = continuation_options(cfg);
    const elastica::Grid grid(cfg.n);

    struct Job {
        elastica::BifurcationInfo info;
        bool in_range = false;
        std::future<elastica::Branch> future;
    };
    std::vector<Job> jobs;
    for (const auto& info : targets) {
        Job job;
        job.info = info;
        job.in_range = info.mu0 > cfg.mu_min && info.mu0 < cfg.mu_max;
        if (job.in_range)
            job.future = std::async(std::launch::async, [info, grid, opts]() {
                return elastica::track_branch(info, grid, opts);
            });
        jobs.push_back(std::move(job));
    }

    json summary;
    summary["m"] = cfg.m;
    summary["h"] = cfg.h;
    summary["branches"] = json::array();
    int exit_code = kExitOk;
    bool any_traced = false;
    for (auto& job : jobs) {
        json entry;
        entry["case"] = elastica::to_string(job.info.kind);
        entry["j"] = job.info.j;
        entry["mu0"] = job.info.mu0;
        if (!job.in_range) {
            entry["skipped"] = "onset out of range";
            std::cout << "skip " << elastica::to_string(job.info.kind) << " j=" << job.info.j
                      << ": onset out of range\n";
            summary["branches"].push_back(entry);
            continue;
        }
        try {
            const elastica::Branch br = job.future.get();
            any_traced = true;
            const std::string stem =
                "branch_" + elastica::to_string(job.info.kind) + "_j" + std::to_string(job.info.j);
            elastica::write_branch_csv((dir / (stem + ".csv")).string(), br);
            elastica::ModelParams pf;
            pf.m = cfg.m;
            pf.h = cfg.h;
            pf.mu = br.points.front().mu;
            elastica::write_state((dir / (stem + "_first.json")).string(),
                                  br.points.front().state, pf);
            pf.mu = br.points.back().mu;
            elastica::write_state((dir / (stem + "_last.json")).string(), br.points.back().state,
                                  pf);
            double emin = br.points.front().energy, emax = emin;
            for (const auto& bp : br.points) {
                emin = std::min(emin, bp.energy);
                emax = std::max(emax, bp.energy);
            }
            entry["points"] = br.points.size();
            entry["termination"] = elastica::to_string(br.termination);
            entry["energy_min"] = emin;
            entry["energy_max"] = emax;
            entry["mu_first"] = br.points.front().mu;
            entry["mu_last"] = br.points.back().mu;
            entry["csv"] = (dir / (stem + ".csv")).string();
            std::cout << "traced " << br.label << ": " << br.points.size() << " points, "
                      << elastica::to_string(br.termination) << '\n';
        } catch (const std::exception& e) {
            entry["error"] = e.what();
            std::cerr << "branch " << elastica::to_string(job.info.kind) << " j=" << job.info.j
                      << " failed: " << e.what() << '\n';
            exit_code = kExitSolver;
        }
        summary["branches"].push_back(entry);
    }
    std::ofstream sf(dir / "summary.json");
    sf << summary.dump(2) << '\n';
    if (!any_traced && exit_code == kExitOk)
        std::cout << "no branch traced: all onsets out of range\n";
    std::cout << "wrote " << (dir / "summary.json").string() << '\n';
    return exit_code;
}

int cmd_render(const Config& cfg, const std::string& state_file, std::string out_file,
               std::optional<int> mode) {
    const auto loaded = elastica::read_state(state_file);
    elastica::RenderOptions ropts;
    ropts.base_width = cfg.stroke_width;
    ropts.width_gain = cfg.width_gain;
    ropts.canvas = cfg.canvas;
    ropts.mode = mode;
    const std::string svg = elastica::render_svg(loaded.state, loaded.params, ropts);
    if (out_file.empty())
        out_file = (ensure_output_dir(cfg) / "render.svg").string();
    std::ofstream f(out_file);
    if (!f) throw std::runtime_error("cannot open " + out_file + " for writing");
    f << svg;
    std::cout << "wrote " << out_file << '\n';
    return kExitOk;
}

int cmd_verify(int level) {
    const elastica::VerifyReport report = elastica::verify(level);
    std::cout << elastica::report_to_json(report);
    return report.all_passed() ? kExitOk : kExitVerify;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"equilibrium branches of closed planar elastica with "
                 "density-modulated stiffness"};
    app.set_help_flag("--help", "print help and exit");
    app.require_subcommand(1);

    Overrides ov;
    std::string state_file, out_file;
    std::optional<int> render_mode;
    int verify_level = 3;

    CLI::App* classify = app.add_subcommand("classify", "critical modes for (m, h)");
    add_common_options(classify, ov);

    CLI::App* predict = app.add_subcommand("predict", "write an expansion predictor state");
    add_common_options(predict, ov);

    CLI::App* solve = app.add_subcommand("solve", "Newton-correct a state at fixed mu");
    add_common_options(solve, ov);
    solve->add_option("--state", state_file, "initial state file (else: predictor)");

    CLI::App* cont = app.add_subcommand("continue", "trace equilibrium branches");
    add_common_options(cont, ov);

    CLI::App* render = app.add_subcommand("render", "draw a state as SVG");
    add_common_options(render, ov);
    render->add_option("--state", state_file, "state file to draw")->required();
    render->add_option("--output", out_file, "output SVG path");
    render->add_option("--mode", render_mode, "mode index for the caption");

    CLI::App* verify = app.add_subcommand("verify", "run the self-check suite");
    verify->set_help_flag("--help", "print help and exit");
    verify->add_option("--level", verify_level, "1 analytic, 2 +discretization, 3 +end-to-end");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand(verify)) return cmd_verify(verify_level);
        const Config cfg = resolve(ov);
        if (app.got_subcommand(classify)) return cmd_classify(cfg);
        if (app.got_subcommand(predict)) return cmd_predict(cfg);
        if (app.got_subcommand(solve)) return cmd_solve(cfg, state_file);
        if (app.got_subcommand(cont)) return cmd_continue(cfg);
        if (app.got_subcommand(render)) return cmd_render(cfg, state_file, out_file, render_mode);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const elastica::DegenerateModeError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::runtime_error& e) {
        // "unreadable state" is an input problem; the rest are solver-side
        // failures (floor breaches, singular systems, collapses).
        std::cerr << "error: " << e.what() << '\n';
        return std::string_view(e.what()).starts_with("unreadable state") ? kExitUsage
                                                                          : kExitSolver;
    }
    return kExitUsage;
}
