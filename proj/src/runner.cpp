#include "fracfield/runner.hpp"

#include "fracfield/io.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fracfield {

using nlohmann::json;

namespace {

json scalar(double value, double tol) { return json{{"value", value}, {"tol", tol}}; }

json params_json(int dim, double s, double box, int grid_m, const std::string& nl, double gamma) {
    return json{{"dim", dim},           {"s", s},     {"box", box},
                {"grid", grid_m},       {"nonlinearity", nl}, {"gamma", gamma}};
}

json solver_json(const SolverConfig& cfg) {
    return json{{"step", cfg.step},
                {"max_iters", cfg.max_iters},
                {"tol", cfg.tol},
                {"seed", cfg.seed},
                {"backtracking", cfg.backtracking}};
}

void write_report(const std::string& path, const json& j) {
    if (path.empty()) return;
    std::ofstream os(path);
    if (!os) throw std::runtime_error("report: cannot open for writing: " + path);
    os << j.dump(2) << "\n";
}

double elapsed_seconds(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int env_thread_cap() {
    const char* env = std::getenv("FRACFIELD_THREADS");
    if (!env) return 1;
    int v = std::atoi(env);
    return v >= 1 ? v : 1;
}

Nonlinearity make_nonlinearity(const std::string& name, const FracParams& p) {
    if (name == "critical") return critical_power(p);
    if (name == "logcos") return log_cos_power(p);
    throw std::invalid_argument("unknown nonlinearity '" + name + "' (expected critical or logcos)");
}

json to_json(const LevelsReport& rep, double level_tol) {
    json sl = json::object();
    for (const auto& [l, v] : rep.Sl) {
        std::ostringstream key;
        key << l;
        sl[key.str()] = scalar(v, level_tol);
    }
    return json{{"S1", scalar(rep.S1, level_tol)},
                {"Sl", sl},
                {"l0", scalar(rep.l0, level_tol)},
                {"cI", scalar(rep.cI, level_tol)},
                {"infimum_I", scalar(rep.infimum_I, level_tol)},
                {"beta", scalar(rep.beta, level_tol)},
                {"multiplier", rep.multiplier}};
}

SolveOutcome run_solve(const SolveOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    FracParams p = make_frac_params(opt.dim, opt.s);
    GridSpec grid = make_grid(opt.dim, opt.grid_m, opt.box);
    Nonlinearity nl = make_nonlinearity(opt.nonlinearity, p);

    SphereMaxResult sphere = maximize_S(opt.level, nl, p, grid, opt.solver);
    GroundState gs = ground_state(nl, p, grid, opt.solver);

    std::ostringstream ident;
    ident << opt.dim << "|" << opt.s << "|" << opt.box << "|" << opt.grid_m << "|"
          << opt.nonlinearity << "|" << opt.level << "|" << opt.solver.seed << "|"
          << opt.solver.tol << "|" << opt.solver.max_iters;

    json rep{{"schema_version", 1},
             {"command", "solve"},
             {"parameters", params_json(opt.dim, opt.s, opt.box, opt.grid_m, opt.nonlinearity,
                                        nl.selfsim_gamma)},
             {"solver", solver_json(opt.solver)},
             {"threads", opt.threads},
             {"levels",
              {{"level", opt.level},
               {"S_level", scalar(sphere.value, 0.05)},
               {"infimum_I", scalar(gs.report.infimum_I, 0.05)},
               {"beta", scalar(gs.beta, 0.05)},
               {"multiplier", gs.multiplier}}},
             {"residuals",
              {{"pohozaev", scalar(gs.report.pohozaev_residual, 1e-2)},
               {"nehari", scalar(gs.report.nehari_residual, 1e-2)},
               {"pde", scalar(gs.pde_residual, 1e-2)},
               {"stationarity", scalar(sphere.tangential_norm, opt.solver.tol)}}},
             {"converged", sphere.converged && gs.report.converged},
             {"input_hash", sha1_hex(ident.str())}};

    if (!opt.out_field.empty()) save_field(opt.out_field, gs.u, opt.s);
    rep["timings"] = {{"total_seconds", elapsed_seconds(t0)}};
    write_report(opt.out_report, rep);
    return {rep, sphere.converged && gs.report.converged};
}

json run_levels(const LevelsOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    FracParams p = make_frac_params(opt.dim, opt.s);
    GridSpec grid = make_grid(opt.dim, opt.grid_m, opt.box);
    Nonlinearity nl = make_nonlinearity(opt.nonlinearity, p);

    LevelsReport rep = levels(nl, p, grid, opt.solver, opt.extra_levels);

    std::ostringstream ident;
    ident << opt.dim << "|" << opt.s << "|" << opt.box << "|" << opt.grid_m << "|"
          << opt.nonlinearity << "|" << opt.solver.seed;

    json j{{"schema_version", 1},
           {"command", "levels"},
           {"parameters",
            params_json(opt.dim, opt.s, opt.box, opt.grid_m, opt.nonlinearity, nl.selfsim_gamma)},
           {"solver", solver_json(opt.solver)},
           {"levels", to_json(rep, 0.05)},
           {"residuals",
            {{"pohozaev", scalar(rep.pohozaev_residual, 1e-2)},
             {"nehari", scalar(rep.nehari_residual, 1e-2)},
             {"pde", scalar(rep.pde_residual, 1e-2)},
             {"stationarity", scalar(rep.stationarity, opt.solver.tol)}}},
           {"converged", rep.converged},
           {"input_hash", sha1_hex(ident.str())}};
    j["timings"] = {{"total_seconds", elapsed_seconds(t0)}};
    write_report(opt.out_report, j);
    return j;
}

CheckOutcome run_check(const CheckOptions& opt) {
    LoadedField lf = load_field(opt.field_path);
    FracParams p = make_frac_params(lf.field.grid.dim, lf.s);
    Nonlinearity nl = make_nonlinearity(opt.nonlinearity, p);

    double residual = 0.0;
    bool pass = false;
    if (opt.check == "pohozaev") {
        residual = std::fabs(pohozaev_relative(lf.field, nl, p));
        pass = residual < opt.tol;
    } else if (opt.check == "nehari") {
        residual = std::fabs(nehari_relative(lf.field, nl, p));
        pass = residual < opt.tol;
    } else if (opt.check == "sobolev") {
        // quotient against the sharp constant, 2% aliasing slack
        residual = sobolev_quotient(lf.field, p) / sobolev_constant(p);
        pass = residual <= 1.02;
    } else if (opt.check == "selfsim") {
        GroupElement g = identity_element(lf.field.grid.dim, 2.0);
        g.level = 1;
        residual = phi_dilation_invariance(lf.field, nl, g, p);
        pass = residual < opt.tol;
    } else {
        throw std::invalid_argument("unknown check '" + opt.check + "'");
    }

    json rep{{"schema_version", 1},
             {"command", "check"},
             {"check", opt.check},
             {"field", opt.field_path},
             {"parameters", {{"dim", lf.field.grid.dim}, {"s", lf.s}}},
             {"residual", scalar(residual, opt.tol)},
             {"pass", pass}};
    return {rep, pass};
}

json run_decompose(const DecomposeOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<LoadedField> seq = load_sequence(opt.manifest_path);
    FracParams p = make_frac_params(seq.front().field.grid.dim, seq.front().s);
    std::vector<Field> fields;
    fields.reserve(seq.size());
    for (auto& lf : seq) fields.push_back(std::move(lf.field));

    DecompositionReport rep = extract(fields, opt.gamma, opt.extract, p);

    json profiles = json::array();
    for (const auto& pr : rep.profiles) {
        json elems = json::array();
        for (const auto& el : pr.elements)
            elems.push_back({{"y", el.shift}, {"j", el.level}});
        profiles.push_back({{"class", profile_class_name(pr.cls)},
                            {"norm_sq", dnorm_sq(pr.w, p)},
                            {"elements", elems}});
    }
    const char* status = rep.status == ExtractStatus::Completed     ? "completed"
                         : rep.status == ExtractStatus::MaxProfiles ? "max_profiles"
                                                                    : "stalled";
    json j{{"schema_version", 1},
           {"command", "decompose"},
           {"parameters", {{"gamma", opt.gamma}, {"tol", opt.extract.tol},
                           {"max_profiles", opt.extract.max_profiles}, {"tail", opt.extract.tail}}},
           {"profiles", profiles},
           {"norm_budget", {{"sum", rep.norm_budget_sum},
                            {"limsup", rep.norm_budget_limsup},
                            {"slack", 1.05}}},
           {"remainder_crit_norms", rep.remainder_crit_norms},
           {"final_residual_history", rep.final_residual_history},
           {"separations", rep.separations},
           {"status", status},
           {"diagnostic", rep.diagnostic}};
    j["timings"] = {{"total_seconds", elapsed_seconds(t0)}};
    write_report(opt.out_report, j);
    return j;
}

json run_extend(const ExtendOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    LoadedField lf = load_field(opt.field_path);
    FracParams p = make_frac_params(lf.field.grid.dim, lf.s);
    ExtensionGrid eg = make_extension_grid(lf.field.grid, opt.y_max, opt.y_nodes, opt.grading);

    Field u = zero_mean(lf.field);
    const double energy_res = energy_identity_residual(u, p, eg);
    const double trace_res = neumann_trace_residual(u, p, eg);

    json j{{"schema_version", 1},
           {"command", "extend"},
           {"parameters",
            {{"dim", lf.field.grid.dim}, {"s", lf.s}, {"y_max", opt.y_max},
             {"y_nodes", opt.y_nodes}, {"grading", opt.grading}}},
           {"kappa", kappa(p)},
           {"residuals",
            {{"energy_identity", scalar(energy_res, 0.03)},
             {"neumann_trace", scalar(trace_res, 0.05)}}}};
    j["timings"] = {{"total_seconds", elapsed_seconds(t0)}};
    write_report(opt.out_report, j);
    return j;
}

std::string levels_resolution_csv(const LevelsOptions& opt, const std::vector<int>& grids) {
    std::ostringstream os;
    os << "grid,S1,l0,cI,infimum_I\n";
    for (int m : grids) {
        LevelsOptions o = opt;
        o.grid_m = m;
        FracParams p = make_frac_params(o.dim, o.s);
        GridSpec grid = make_grid(o.dim, o.grid_m, o.box);
        Nonlinearity nl = make_nonlinearity(o.nonlinearity, p);
        LevelsReport rep = levels(nl, p, grid, o.solver, {});
        os << m << "," << rep.S1 << "," << rep.l0 << "," << rep.cI << "," << rep.infimum_I << "\n";
    }
    return os.str();
}

} // namespace fracfield
