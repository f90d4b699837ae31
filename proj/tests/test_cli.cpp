// Exercises the shared-library C interface and the CLI binary end to end.
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "bsur.h"
#include "core/dataset.hpp"
#include "core/errors.hpp"
#include "core/runner.hpp"
#include "core/simulate.hpp"

namespace fs = std::filesystem;

namespace {

std::string temp_dir() {
    static int counter = 0;
    const std::string dir =
        (fs::temp_directory_path() /
         ("bsur_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++)))
            .string();
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(BSUR_CLI_PATH) + " " + args + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

}  // namespace

TEST_CASE("C API: dataset handles, fit handle, estimator access") {
    const std::string dir = temp_dir();
    REQUIRE(bsur_simulate("quickstart", nullptr, dir.c_str()) == BSUR_OK);

    bsur_dataset* data = nullptr;
    REQUIRE(bsur_dataset_open((dir + "/data.csv").c_str(), "1:3", "4:18", nullptr, &data) ==
            BSUR_OK);
    int n = 0, s = 0, p = 0, p0 = 0;
    CHECK(bsur_dataset_dims(data, &n, &s, &p, &p0) == BSUR_OK);
    CHECK(n == 10);
    CHECK(s == 3);
    CHECK(p == 15);
    CHECK(p0 == 0);

    write_file(dir + "/run.txt", "nIter = 400\nburnin = 200\nnChains = 1\nseed = 12\n");
    bsur_result* result = nullptr;
    REQUIRE(bsur_fit_dataset(data, (dir + "/run.txt").c_str(), &result) == BSUR_OK);

    int rows = 0, cols = 0;
    REQUIRE(bsur_result_get(result, "gamma_hat", nullptr, &rows, &cols) == BSUR_OK);
    CHECK(rows == 15);
    CHECK(cols == 3);
    std::vector<double> buf(rows * cols);
    REQUIRE(bsur_result_get(result, "gamma_hat", buf.data(), &rows, &cols) == BSUR_OK);
    for (double v : buf) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    CHECK(bsur_result_get(result, "no_such_thing", nullptr, &rows, &cols) == BSUR_ERR_CONFIG);
    CHECK(std::string(bsur_last_error()).find("unknown estimator") != std::string::npos);

    double loo = 0.0, waic = 0.0;
    CHECK(bsur_result_elpd(result, &loo, &waic) == BSUR_OK);
    CHECK(std::isfinite(loo));
    CHECK(std::isfinite(waic));

    const std::string out = dir + "/api_fit";
    CHECK(bsur_result_write(result, out.c_str()) == BSUR_OK);
    CHECK(fs::exists(out + "/gamma_hat.csv"));

    bsur_result_close(result);
    bsur_dataset_close(data);
    CHECK(std::string(bsur_version()) == "0.1.0");
}

TEST_CASE("C API maps error families to distinct codes") {
    CHECK(bsur_simulate("nope", nullptr, temp_dir().c_str()) == BSUR_ERR_CONFIG);
    CHECK(std::string(bsur_last_error()).find("unknown simulation kind") != std::string::npos);
    bsur_dataset* d = nullptr;
    CHECK(bsur_dataset_open("/no/such/file.csv", "1:2", "3:4", nullptr, &d) == BSUR_ERR_IO);
    CHECK(bsur_diag("/no/such/dir") == BSUR_ERR_IO);
}

TEST_CASE("CLI: simulate, fit, rerun reproducibility, diag, evaluate") {
    const std::string dir = temp_dir();
    REQUIRE(run_cli("simulate --kind quickstart --out " + dir + "/sim") == 0);
    CHECK(fs::exists(dir + "/sim/data.csv"));
    CHECK(fs::exists(dir + "/sim/B_true.csv"));
    CHECK(fs::exists(dir + "/sim/gamma_true.csv"));
    // 10 x 18 combined matrix
    const auto data = bsur::read_csv_matrix(dir + "/sim/data.csv");
    CHECK(data.values.n_rows == 10);
    CHECK(data.values.n_cols == 18);

    write_file(dir + "/run.txt",
               "data = " + dir + "/sim/data.csv\nY = 1:3\nX = 4:18\n" +
                   "nIter = 600\nburnin = 300\nnChains = 2\nseed = 5\ntick = 0\n");
    REQUIRE(run_cli("fit --config " + dir + "/run.txt --out " + dir + "/fit1 --quiet") == 0);
    for (const char* f : {"manifest.json", "gamma_hat.csv", "beta_hat.csv", "G_hat.csv",
                          "elpd.txt", "cpo.csv", "logP.csv", "model_size.csv"})
        CHECK(fs::exists(dir + "/fit1/" + std::string(f)));

    // byte-identical rerun with the same seed
    REQUIRE(run_cli("fit --config " + dir + "/run.txt --out " + dir + "/fit2 --quiet") == 0);
    CHECK(slurp(dir + "/fit1/gamma_hat.csv") == slurp(dir + "/fit2/gamma_hat.csv"));
    CHECK(slurp(dir + "/fit1/beta_hat.csv") == slurp(dir + "/fit2/beta_hat.csv"));
    CHECK(slurp(dir + "/fit1/logP.csv") == slurp(dir + "/fit2/logP.csv"));

    SUBCASE("diag emits plot data; trace rows equal nIter and DOT nodes equal s") {
        REQUIRE(run_cli("diag --fit " + dir + "/fit1") == 0);
        const auto traces = bsur::read_csv_matrix(dir + "/fit1/diag_traces.csv");
        CHECK(traces.values.n_rows == 600);
        const std::string dot = slurp(dir + "/fit1/graph.dot");
        CHECK(dot.find("y1;") != std::string::npos);
        CHECK(dot.find("y3;") != std::string::npos);
        CHECK(dot.find("y4") == std::string::npos);
        CHECK(fs::exists(dir + "/fit1/diag_logP_windows.csv"));
    }

    SUBCASE("deleting a listed output makes diag fail with a specific message") {
        fs::remove(dir + "/fit1/cpo.csv");
        const std::string cmd = std::string(BSUR_CLI_PATH) + " diag --fit " + dir +
                                "/fit1 2> " + dir + "/diag_err.txt";
        const int rc = std::system(cmd.c_str());
        CHECK(WEXITSTATUS(rc) == 4);
        CHECK(slurp(dir + "/diag_err.txt").find("missing output file: cpo.csv") !=
              std::string::npos);
    }

    SUBCASE("evaluate scores recovery and is idempotent") {
        REQUIRE(run_cli("evaluate --truth " + dir + "/sim --fit " + dir + "/fit1 > /dev/null") ==
                0);
        CHECK(fs::exists(dir + "/fit1/metrics.txt"));
        const std::string first = slurp(dir + "/fit1/metrics.txt");
        REQUIRE(run_cli("evaluate --truth " + dir + "/sim --fit " + dir + "/fit1 > /dev/null") ==
                0);
        CHECK(first == slurp(dir + "/fit1/metrics.txt"));
        CHECK(first.find("gamma_auc = ") != std::string::npos);
    }
}

TEST_CASE("MRF prior fit through the CLI with an edge-list file") {
    const std::string dir = temp_dir();
    REQUIRE(run_cli("simulate --kind quickstart --out " + dir + "/sim") == 0);
    // encourage joint selection of the pairs the truth actually couples
    std::vector<bsur::MrfPair> pairs;
    pairs.push_back({{1, 2}, {0, 1}});
    pairs.push_back({{0, 3}, {2}});
    const auto edges = bsur::build_mrf_graph(pairs, 15, 3);
    bsur::write_mrf_edges(dir + "/mrf.txt", edges);

    write_file(dir + "/run.txt",
               "data = " + dir + "/sim/data.csv\nY = 1:3\nX = 4:18\n" +
                   "gammaPrior = MRF\nmrfG = " + dir + "/mrf.txt\n" +
                   "hyperpar.mrf_d = -3\nhyperpar.mrf_e = 0.03\n" +
                   "nIter = 3000\nburnin = 1500\nnChains = 2\nseed = 8\ntick = 0\n");
    REQUIRE(run_cli("fit --config " + dir + "/run.txt --out " + dir + "/fit --quiet") == 0);
    REQUIRE(run_cli("evaluate --truth " + dir + "/sim --fit " + dir + "/fit > /dev/null") == 0);
    const std::string metrics = slurp(dir + "/fit/metrics.txt");
    const auto pos = metrics.find("gamma_auc = ");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(metrics.substr(pos + 12)) > 0.9);
}

TEST_CASE("CLI: config errors exit 2") {
    const std::string dir = temp_dir();
    write_file(dir + "/bad.txt", "gammaPrior = MRF\nnIter = 100\nburnin = 10\n");
    REQUIRE(run_cli("simulate --kind quickstart --out " + dir + "/sim") == 0);
    write_file(dir + "/bad2.txt",
               "data = " + dir + "/sim/data.csv\nY = 1:3\nX = 4:18\ngammaPrior = MRF\n" +
                   "nIter = 100\nburnin = 10\n");
    CHECK(run_cli("fit --config " + dir + "/bad2.txt --out " + dir + "/out --quiet") == 2);
    CHECK(run_cli("simulate --kind nope --out " + dir + "/x") == 2);
    CHECK(run_cli("fit --config /no/such/config --out " + dir + "/y --quiet") == 4);
}

TEST_CASE("evaluate metrics: perfect and uninformative estimators") {
    const std::string dir = temp_dir();
    arma::mat truth(4, 2, arma::fill::zeros);
    truth(1, 0) = 1.0;
    truth(3, 1) = 1.0;
    fs::create_directories(dir + "/truth");
    fs::create_directories(dir + "/fit");
    bsur::write_csv_matrix(dir + "/truth/gamma_true.csv", truth, {"y1", "y2"});

    SUBCASE("exact recovery: AUC 1, TPR 1, FPR 0") {
        bsur::write_csv_matrix(dir + "/fit/gamma_hat.csv", truth, {"y1", "y2"});
        const auto m = bsur::cmd_evaluate(dir + "/truth", dir + "/fit");
        CHECK(m.gamma_auc == doctest::Approx(1.0));
        CHECK(m.tpr == doctest::Approx(1.0));
        CHECK(m.fpr == doctest::Approx(0.0));
    }
    SUBCASE("constant one-half estimate: AUC one-half") {
        arma::mat flat(4, 2);
        flat.fill(0.5);
        bsur::write_csv_matrix(dir + "/fit/gamma_hat.csv", flat, {"y1", "y2"});
        const auto m = bsur::cmd_evaluate(dir + "/truth", dir + "/fit");
        CHECK(m.gamma_auc == doctest::Approx(0.5));
    }
    SUBCASE("dimension mismatch is rejected") {
        bsur::write_csv_matrix(dir + "/fit/gamma_hat.csv", arma::mat(3, 2, arma::fill::zeros),
                               {"y1", "y2"});
        CHECK_THROWS_AS(bsur::cmd_evaluate(dir + "/truth", dir + "/fit"), bsur::ConfigError);
    }
}

TEST_CASE("eqtl simulation through the CLI writes the full truth set") {
    const std::string dir = temp_dir();
    write_file(dir + "/recipe.txt", "n = 40\np = 20\ns = 4\nseed = 9\n");
    REQUIRE(run_cli("simulate --kind eqtl --recipe " + dir + "/recipe.txt --out " + dir +
                    "/eq") == 0);
    for (const char* f : {"data.csv", "B_true.csv", "gamma_true.csv", "G_true.csv", "snr.txt",
                          "config_template.txt"})
        CHECK(fs::exists(dir + "/eq/" + std::string(f)));
    const auto data = bsur::read_csv_matrix(dir + "/eq/data.csv");
    CHECK(data.values.n_rows == 40);
    CHECK(data.values.n_cols == 24);

    SUBCASE("the default recipe gives the 100 x 160 combined matrix") {
        REQUIRE(run_cli("simulate --kind eqtl --out " + dir + "/eq_default") == 0);
        const auto full = bsur::read_csv_matrix(dir + "/eq_default/data.csv");
        CHECK(full.values.n_rows == 100);
        CHECK(full.values.n_cols == 160);
    }
}

TEST_CASE("converged quick-start run: moving-window logP densities overlap") {
    const std::string dir = temp_dir();
    REQUIRE(run_cli("simulate --kind quickstart --out " + dir + "/sim") == 0);
    write_file(dir + "/run.txt",
               "data = " + dir + "/sim/data.csv\nY = 1:3\nX = 4:18\n" +
                   "nIter = 10000\nburnin = 5000\nnChains = 2\nseed = 71\ntick = 0\n");
    REQUIRE(run_cli("fit --config " + dir + "/run.txt --out " + dir + "/fit --quiet") == 0);
    REQUIRE(run_cli("diag --fit " + dir + "/fit") == 0);

    // Kolmogorov-Smirnov between the third quarter and the last half of the
    // post-burn-in logP trace
    const arma::vec logP = bsur::read_csv_matrix(dir + "/fit/logP.csv").values.col(0);
    const arma::vec post = logP.tail(5000);
    const arma::vec q3 = arma::sort(post.subvec(2500, 3749));
    const arma::vec half = arma::sort(post.subvec(2500, 4999));
    double ks = 0.0;
    for (arma::uword i = 0; i < q3.n_elem; ++i) {
        const double f1 = static_cast<double>(i + 1) / q3.n_elem;
        const arma::uword below =
            std::upper_bound(half.begin(), half.end(), q3(i)) - half.begin();
        const double f2 = static_cast<double>(below) / half.n_elem;
        ks = std::max(ks, std::fabs(f1 - f2));
    }
    CHECK(ks < 0.2);
}
