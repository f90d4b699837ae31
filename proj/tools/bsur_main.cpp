// Batch CLI over the bsur shared-library C interface.
//
//   bsur fit       --config run.txt --out results/
//   bsur simulate  --kind quickstart --out sim/
//   bsur evaluate  --truth sim/ --fit results/
//   bsur diag      --fit results/

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "bsur.h"

namespace {

int finish(int code) {
    if (code != BSUR_OK) std::fprintf(stderr, "error: %s\n", bsur_last_error());
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian SUR variable selection (spike-and-slab, tempered MCMC)"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(bsur_version()));

    auto* fit = app.add_subcommand("fit", "fit a model from a config file");
    std::string config, out_dir, data_path, y_spec, x_spec, x0_spec;
    long long seed = -1, threads = -1;
    bool quiet = false;
    fit->add_option("--config", config, "key=value run configuration")->required();
    fit->add_option("--out", out_dir, "output directory")->required();
    fit->add_option("--data", data_path, "override: combined data matrix");
    fit->add_option("--Y", y_spec, "override: Y blocks or file");
    fit->add_option("--X", x_spec, "override: X blocks or file");
    fit->add_option("--X0", x0_spec, "override: X0 blocks or file");
    fit->add_option("--seed", seed, "override: RNG seed");
    fit->add_option("--threads", threads, "override: worker threads");
    fit->add_flag("--quiet", quiet, "suppress progress output");

    auto* sim = app.add_subcommand("simulate", "generate synthetic data with truth files");
    std::string kind, recipe, sim_out;
    sim->add_option("--kind", kind, "quickstart or eqtl")->required();
    sim->add_option("--recipe", recipe, "key=value recipe file");
    sim->add_option("--out", sim_out, "output directory")->required();

    auto* eval = app.add_subcommand("evaluate", "score a fit against simulator truth");
    std::string truth_dir, fit_dir, metrics_out;
    eval->add_option("--truth", truth_dir, "directory with *_true.csv files")->required();
    eval->add_option("--fit", fit_dir, "fit output directory")->required();
    eval->add_option("--out", metrics_out, "metrics file (default <fit>/metrics.txt)");

    auto* diag = app.add_subcommand("diag", "emit trace/density plot data and graph.dot");
    std::string diag_dir;
    diag->add_option("--fit", diag_dir, "fit output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : BSUR_ERR_CONFIG;
    }

    if (fit->parsed())
        return finish(bsur_fit(config.c_str(), out_dir.c_str(),
                               data_path.empty() ? nullptr : data_path.c_str(),
                               y_spec.empty() ? nullptr : y_spec.c_str(),
                               x_spec.empty() ? nullptr : x_spec.c_str(),
                               x0_spec.empty() ? nullptr : x0_spec.c_str(), seed, threads,
                               quiet ? 1 : 0));
    if (sim->parsed())
        return finish(bsur_simulate(kind.c_str(), recipe.empty() ? nullptr : recipe.c_str(),
                                    sim_out.c_str()));
    if (eval->parsed())
        return finish(bsur_evaluate(truth_dir.c_str(), fit_dir.c_str(),
                                    metrics_out.empty() ? nullptr : metrics_out.c_str()));
    if (diag->parsed()) return finish(bsur_diag(diag_dir.c_str()));
    return BSUR_ERR_CONFIG;
}
