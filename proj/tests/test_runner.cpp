#include "fracfield/io.hpp"
#include "fracfield/rng.hpp"
#include "fracfield/runner.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>

using namespace fracfield;

TEST_CASE("levels command produces a schema-versioned report") {
    LevelsOptions opt;
    opt.dim = 2;
    opt.s = 0.5;
    opt.box = 40.0;
    opt.grid_m = 32;
    opt.extra_levels = {2.0};
    nlohmann::json rep = run_levels(opt);
    CHECK(rep["schema_version"] == 1);
    CHECK(rep["levels"]["S1"]["value"].get<double>() > 0.0);
    CHECK(rep["levels"]["S1"].contains("tol"));
    CHECK(rep["levels"]["l0"]["value"].get<double>() > 0.0);
    CHECK(rep["residuals"]["pohozaev"].contains("tol"));
    CHECK(rep.contains("input_hash"));
    CHECK(rep["input_hash"].get<std::string>().size() == 40);
}

TEST_CASE("decompose command round trips through the manifest format") {
    GridSpec g = make_grid(1, 2048, 80.0);
    FracParams p = make_frac_params(1, 0.25);
    const double h = g.spacing;
    Field w = gaussian_bump(g, 1.2);
    std::vector<GroupElement> els;
    for (int k = 0; k < 4; ++k) els.push_back(make_element(2.0, {h * 128.0 * k}, 0));
    auto seq = synthesize({make_planted(w, els, ProfileClass::N0)},
                          {0.01, 0.005, 0.0025, 0.00125}, g, p);

    for (std::size_t k = 0; k < seq.size(); ++k)
        save_field("./seq_" + std::to_string(k) + ".frcf", seq[k], p.s);
    {
        std::ofstream os("./seq.manifest");
        os << "# synthesized four-index sequence\n";
        for (std::size_t k = 0; k < seq.size(); ++k)
            os << "seq_" << k << ".frcf\n";
    }

    DecomposeOptions opt;
    opt.manifest_path = "./seq.manifest";
    opt.extract.tol = 5e-3;
    opt.extract.tail = 2;
    nlohmann::json rep = run_decompose(opt);
    CHECK(rep["status"] == "completed");
    REQUIRE(rep["profiles"].size() == 1);
    CHECK(rep["profiles"][0]["class"] == "N0");
    CHECK(rep["norm_budget"]["sum"].get<double>() <=
          rep["norm_budget"]["limsup"].get<double>() * 1.05);

    for (std::size_t k = 0; k < seq.size(); ++k)
        std::remove(("./seq_" + std::to_string(k) + ".frcf").c_str());
    std::remove("./seq.manifest");
}

TEST_CASE("extend command reports both identities") {
    GridSpec g = make_grid(1, 256, 40.0);
    Field u = gaussian_bump(g, 2.0);
    save_field("./extend_in.frcf", u, 0.45);

    ExtendOptions opt;
    opt.field_path = "./extend_in.frcf";
    opt.y_max = 20.0;
    opt.y_nodes = 64;
    nlohmann::json rep = run_extend(opt);
    CHECK(rep["residuals"]["energy_identity"]["value"].get<double>() < 0.03);
    CHECK(rep["residuals"]["neumann_trace"]["value"].get<double>() < 0.05);
    CHECK(rep["kappa"].get<double>() == doctest::Approx(kappa(0.45)).epsilon(1e-14));
    std::remove("./extend_in.frcf");
}

TEST_CASE("check command verdicts") {
    GridSpec g = make_grid(1, 512, 40.0);
    Field zero(g);
    save_field("./check_zero.frcf", zero, 0.25);
    CheckOptions copt;
    copt.field_path = "./check_zero.frcf";
    copt.check = "pohozaev";
    CheckOutcome out = run_check(copt);
    CHECK(out.pass);
    CHECK(out.report["residual"]["value"].get<double>() == 0.0);

    Field bump = gaussian_bump(g, 1.5);
    save_field("./check_bump.frcf", bump, 0.25);
    copt.field_path = "./check_bump.frcf";
    copt.check = "selfsim";
    copt.tol = 1e-3;
    CHECK(run_check(copt).pass);
    copt.check = "sobolev";
    CHECK(run_check(copt).pass);
    copt.check = "bogus";
    CHECK_THROWS_AS(run_check(copt), std::invalid_argument);

    std::remove("./check_zero.frcf");
    std::remove("./check_bump.frcf");
}

TEST_CASE("resolution CSV table") {
    LevelsOptions opt;
    opt.dim = 2;
    opt.s = 0.5;
    opt.box = 40.0;
    std::string csv = levels_resolution_csv(opt, {16, 32});
    CHECK(csv.find("grid,S1,l0,cI,infimum_I") == 0);
    CHECK(csv.find("16,") != std::string::npos);
    CHECK(csv.find("32,") != std::string::npos);
}

TEST_CASE("unknown nonlinearity is rejected before any compute") {
    FracParams p = make_frac_params(2, 0.5);
    CHECK_THROWS_AS(make_nonlinearity("sine", p), std::invalid_argument);
}
