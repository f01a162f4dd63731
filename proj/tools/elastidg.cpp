// Command-line driver for convergence studies.
#include "elastidg/study.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>

using namespace elastidg;

int main(int argc, char** argv)
{
    CLI::App app{"Mixed LDG solver for linear elasticity with symmetric stress"};
    app.require_subcommand(1);

    StudyConfig config;
    std::string solver = "direct";
    std::string format = "both";
    std::string diagnostics = "none";
    bool no_timing = false;

    auto* study = app.add_subcommand("study", "run a uniform-refinement convergence study");
    study->add_option("--dim", config.dim, "spatial dimension")->check(CLI::IsMember({2, 3}));
    study->add_option("--k", config.k, "displacement degree (stress uses k+1)")->check(CLI::NonNegativeNumber);
    study->add_option("--levels", config.levels, "values of 1/h, increasing")->delimiter(',');
    study->add_option("--eta", config.eta, "jump penalty")->check(CLI::PositiveNumber);
    study->add_option("--mu", config.mu, "Lame parameter mu");
    study->add_option("--lambda", config.lambda, "Lame parameter lambda");
    study->add_option("--solver", solver, "direct or schur-cg")->check(CLI::IsMember({"direct", "schur-cg"}));
    study->add_option("--format", format, "csv, md or both")->check(CLI::IsMember({"csv", "md", "both"}));
    study->add_option("--out", config.out, "output path")->required();
    study->add_option("--diagnostics", diagnostics, "none, infsup, kell, lifting or all")
        ->check(CLI::IsMember({"none", "infsup", "kell", "lifting", "all"}));
    study->add_option("--dump-mesh", config.dump_mesh_dir, "write vertex/element/facet listings here");
    study->add_option("--threads", config.max_threads, "level workers (0: ELASTIDG_THREADS or all cores)");
    study->add_flag("--no-timing", no_timing, "write solve_seconds as 0 for reproducible output");

    CLI11_PARSE(app, argc, argv);

    config.solver = solver == "direct" ? SolverMethod::direct : SolverMethod::schur_cg;
    static const std::map<std::string, OutputFormat> formats{
        {"csv", OutputFormat::csv}, {"md", OutputFormat::md}, {"both", OutputFormat::both}};
    config.format = formats.at(format);
    config.diagnostics.infsup = diagnostics == "infsup" || diagnostics == "all";
    config.diagnostics.kellipticity = diagnostics == "kell" || diagnostics == "all";
    config.diagnostics.lifting = diagnostics == "lifting" || diagnostics == "all";
    config.record_timing = !no_timing;

    try {
        validate(config);
        const StudyResult result = run_study(config);
        for (const auto& path : write_outputs(result)) {
            std::cout << "wrote " << path << "\n";
        }
        if (config.format != OutputFormat::csv) {
            std::cout << format_markdown(result);
        }
        if (!result.ok()) {
            const LevelResult& f = *result.failed;
            std::fprintf(stderr, "ELASTIDG_FAILURE level=%zu one_over_h=%d reason=\"%s\"\n", result.levels.size(),
                         f.one_over_h, f.failure.c_str());
            return 2;
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
