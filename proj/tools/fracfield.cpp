// fracfield: spectral toolkit for the fractional scalar field equation
// (-Delta)^s u = f(u) on a periodic box. Subcommands drive the constrained
// solvers, stored-field checks, profile decomposition and the s-harmonic
// extension diagnostics; results are written as JSON reports.

#include "fracfield/io.hpp"
#include "fracfield/runner.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

namespace {

using fracfield::SolverConfig;
using nlohmann::json;

void load_config_defaults(const std::string& path, fracfield::SolveOptions& opt) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("config: cannot open: " + path);
    json j = json::parse(is);
    if (j.contains("dim")) opt.dim = j["dim"].get<int>();
    if (j.contains("s")) opt.s = j["s"].get<double>();
    if (j.contains("box")) opt.box = j["box"].get<double>();
    if (j.contains("grid")) opt.grid_m = j["grid"].get<int>();
    if (j.contains("nonlinearity")) opt.nonlinearity = j["nonlinearity"].get<std::string>();
    if (j.contains("level")) opt.level = j["level"].get<double>();
    if (j.contains("seed")) opt.solver.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("tol")) opt.solver.tol = j["tol"].get<double>();
    if (j.contains("max_iters")) opt.solver.max_iters = j["max_iters"].get<int>();
    if (j.contains("step")) opt.solver.step = j["step"].get<double>();
    if (j.contains("backtracking")) opt.solver.backtracking = j["backtracking"].get<double>();
}

void add_solver_flags(CLI::App* cmd, SolverConfig& cfg) {
    cmd->add_option("--seed", cfg.seed, "solver seed");
    cmd->add_option("--tol", cfg.tol, "stationarity tolerance");
    cmd->add_option("--max-iters", cfg.max_iters, "iteration cap");
    cmd->add_option("--step", cfg.step, "initial relative step");
    cmd->add_option("--backtracking", cfg.backtracking, "line-search shrink factor");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral toolkit for the fractional scalar field equation"};
    app.require_subcommand(1);

    // solve
    fracfield::SolveOptions sopt;
    std::string config_path;
    auto* solve = app.add_subcommand("solve", "constrained maximizer + ground-state certification");
    solve->add_option("--config", config_path, "JSON config file (flags override)");
    solve->add_option("--dim", sopt.dim, "space dimension N");
    solve->add_option("--s", sopt.s, "fractional order s");
    solve->add_option("--box", sopt.box, "box length L");
    solve->add_option("--grid", sopt.grid_m, "points per axis M");
    solve->add_option("--nonlinearity", sopt.nonlinearity, "critical | logcos");
    solve->add_option("--level", sopt.level, "sphere level l");
    solve->add_option("--out", sopt.out_field, "output FRCF field path");
    solve->add_option("--report", sopt.out_report, "output JSON report path");
    add_solver_flags(solve, sopt.solver);

    // check
    fracfield::CheckOptions copt;
    auto* check = app.add_subcommand("check", "residual checks on a stored field");
    check->add_option("field", copt.field_path, "FRCF field file")->required();
    check->add_option("--check", copt.check, "pohozaev | nehari | sobolev | selfsim");
    check->add_option("--nonlinearity", copt.nonlinearity, "critical | logcos");
    check->add_option("--tol", copt.tol, "pass/fail tolerance");

    // decompose
    fracfield::DecomposeOptions dopt;
    auto* dec = app.add_subcommand("decompose", "profile extraction from a field sequence");
    dec->add_option("manifest", dopt.manifest_path, "sequence manifest")->required();
    dec->add_option("--gamma", dopt.gamma, "dilation factor");
    dec->add_option("--tol", dopt.extract.tol, "remainder threshold");
    dec->add_option("--max-profiles", dopt.extract.max_profiles, "profile cap");
    dec->add_option("--tail", dopt.extract.tail, "tail length for the weak-limit estimate");
    dec->add_option("--report", dopt.out_report, "output JSON report path");

    // extend
    fracfield::ExtendOptions eopt;
    auto* ext = app.add_subcommand("extend", "s-harmonic extension identities");
    ext->add_option("field", eopt.field_path, "FRCF field file")->required();
    ext->add_option("--ymax", eopt.y_max, "slab height");
    ext->add_option("--ynodes", eopt.y_nodes, "graded node count");
    ext->add_option("--grading", eopt.grading, "node clustering exponent");
    ext->add_option("--report", eopt.out_report, "output JSON report path");

    // levels
    fracfield::LevelsOptions lopt;
    std::string csv_path;
    std::vector<int> csv_grids;
    auto* lev = app.add_subcommand("levels", "S_l, l_0, c(I) and script-I");
    lev->add_option("--dim", lopt.dim, "space dimension N");
    lev->add_option("--s", lopt.s, "fractional order s");
    lev->add_option("--box", lopt.box, "box length L");
    lev->add_option("--grid", lopt.grid_m, "points per axis M");
    lev->add_option("--nonlinearity", lopt.nonlinearity, "critical | logcos");
    lev->add_option("--levels", lopt.extra_levels, "extra sphere levels");
    lev->add_option("--report", lopt.out_report, "output JSON report path");
    lev->add_option("--csv", csv_path, "level-vs-resolution CSV path");
    lev->add_option("--csv-grids", csv_grids, "grids for the CSV table");
    add_solver_flags(lev, lopt.solver);

    try {
        // config defaults load before flag parsing so flags win
        for (int i = 1; i + 1 < argc; ++i)
            if (std::string(argv[i]) == "--config") load_config_defaults(argv[i + 1], sopt);
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    const int threads = fracfield::env_thread_cap();
    sopt.threads = threads;
    lopt.threads = threads;

    try {
        if (solve->parsed()) {
            auto out = fracfield::run_solve(sopt);
            std::cout << out.report.dump(2) << "\n";
            return out.converged ? 0 : 2;
        }
        if (check->parsed()) {
            auto out = fracfield::run_check(copt);
            std::cout << out.report.dump(2) << "\n";
            std::cout << (out.pass ? "PASS" : "FAIL") << " " << copt.check
                      << " residual=" << out.report["residual"]["value"].get<double>()
                      << " tol=" << copt.tol << "\n";
            return out.pass ? 0 : 2;
        }
        if (dec->parsed()) {
            std::cout << fracfield::run_decompose(dopt).dump(2) << "\n";
            return 0;
        }
        if (ext->parsed()) {
            std::cout << fracfield::run_extend(eopt).dump(2) << "\n";
            return 0;
        }
        if (lev->parsed()) {
            std::cout << fracfield::run_levels(lopt).dump(2) << "\n";
            if (!csv_path.empty()) {
                std::vector<int> grids = csv_grids.empty() ? std::vector<int>{64, 128, 256} : csv_grids;
                std::ofstream os(csv_path);
                os << fracfield::levels_resolution_csv(lopt, grids);
            }
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
