#pragma once

#include "fracfield/extension.hpp"
#include "fracfield/nonlinearity.hpp"
#include "fracfield/profile.hpp"
#include "fracfield/variational.hpp"

#include <json.hpp>

#include <string>
#include <vector>

// Library-level command implementations shared by the CLI and the test
// suites; every run is deterministic for fixed options (timing fields aside).

namespace fracfield {

nlohmann::json to_json(const LevelsReport& rep, double level_tol);

struct SolveOptions {
    int dim = 2;
    double s = 0.5;
    double box = 80.0;
    int grid_m = 256;
    std::string nonlinearity = "critical";  // critical | logcos
    double level = 1.0;
    SolverConfig solver;
    std::string out_field;   // optional FRCF output path
    std::string out_report;  // optional JSON report path
    int threads = 1;
};

struct SolveOutcome {
    nlohmann::json report;
    bool converged = false;
};

Nonlinearity make_nonlinearity(const std::string& name, const FracParams& p);

// maximize_S at the requested level plus ground-state certification.
SolveOutcome run_solve(const SolveOptions& opt);

struct LevelsOptions {
    int dim = 2;
    double s = 0.5;
    double box = 80.0;
    int grid_m = 256;
    std::string nonlinearity = "critical";
    std::vector<double> extra_levels = {0.5, 2.0, 4.0};
    SolverConfig solver;
    std::string out_report;
    int threads = 1;
};

nlohmann::json run_levels(const LevelsOptions& opt);

struct CheckOptions {
    std::string field_path;
    std::string check = "pohozaev";  // pohozaev | nehari | sobolev | selfsim
    std::string nonlinearity = "critical";
    double tol = 1e-2;
};

struct CheckOutcome {
    nlohmann::json report;
    bool pass = false;
};

CheckOutcome run_check(const CheckOptions& opt);

struct DecomposeOptions {
    std::string manifest_path;
    double gamma = 2.0;
    ExtractConfig extract;
    std::string out_report;
};

nlohmann::json run_decompose(const DecomposeOptions& opt);

struct ExtendOptions {
    std::string field_path;
    double y_max = 20.0;
    int y_nodes = 128;
    double grading = 2.0;
    std::string out_report;
};

nlohmann::json run_extend(const ExtendOptions& opt);

// CSV table of solver level vs grid resolution (the artifact's "figures").
std::string levels_resolution_csv(const LevelsOptions& opt, const std::vector<int>& grids);

int env_thread_cap();

} // namespace fracfield
