#include "core/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/ess.hpp"
#include "core/simulate.hpp"

namespace bsur {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed for " + path);
}

json read_manifest(const std::string& fit_dir) {
    std::ifstream in(fit_dir + "/manifest.json");
    if (!in) throw IoError("missing run artifacts: cannot open " + fit_dir + "/manifest.json");
    json m;
    try {
        in >> m;
    } catch (const std::exception& e) {
        throw ConfigError("corrupt manifest.json: " + std::string(e.what()));
    }
    return m;
}

// Pin BLAS to one thread unless the caller configured it; threaded BLAS
// reductions are not bit-reproducible across machine load.
void pin_blas_once() {
    static const bool done = [] {
        setenv("OPENBLAS_NUM_THREADS", "1", 0);
        setenv("OMP_NUM_THREADS", "1", 0);
        return true;
    }();
    (void)done;
}

}  // namespace

void cmd_fit(const std::string& config_path, const std::string& out_dir,
             const FitOverrides& overrides, bool quiet) {
    pin_blas_once();
    RunConfig cfg = parse_run_config(config_path);
    if (!overrides.data_path.empty()) cfg.data_path = overrides.data_path;
    if (!overrides.y_spec.empty()) cfg.y_spec = overrides.y_spec;
    if (!overrides.x_spec.empty()) cfg.x_spec = overrides.x_spec;
    if (!overrides.x0_spec.empty()) cfg.x0_spec = overrides.x0_spec;
    if (!overrides.mrf_path.empty()) {
        cfg.mrf_path = overrides.mrf_path;
        cfg.spec.mrf_edges = read_mrf_edges(cfg.mrf_path);
    }
    if (overrides.seed >= 0) cfg.spec.seed = static_cast<std::uint64_t>(overrides.seed);
    if (overrides.max_threads > 0) cfg.spec.max_threads = static_cast<unsigned>(overrides.max_threads);

    const Dataset data = load_config_dataset(cfg);
    const ModelSpec spec = validate_spec(cfg.spec, data);
    ensure_dir(out_dir);

    const auto echo = spec_echo(spec);
    if (!quiet) {
        std::cerr << "run header (resolved settings):\n";
        for (const auto& [k, v] : echo) std::cerr << "  " << k << " = " << v << "\n";
        std::cerr << "  data: n=" << data.n() << " s=" << data.s() << " p=" << data.p()
                  << " p0=" << data.p0() << "\n";
    }

    const std::vector<std::string> planned = {
        "manifest.json",   "gamma_hat.csv", "beta_hat.csv", "beta_hat_conditional.csv",
        "G_hat.csv",       "elpd.txt",      "cpo.csv",      "logP.csv",
        "model_size.csv"};

    json manifest;
    manifest["status"] = "running";
    manifest["version"] = "0.1.0";
    for (const auto& [k, v] : echo) manifest[k] = v;
    manifest["n"] = data.n();
    manifest["s"] = data.s();
    manifest["p"] = data.p();
    manifest["p0"] = data.p0();
    manifest["data_hash"] = dataset_fingerprint(data);
    manifest["files"] = planned;
    const auto start = std::chrono::steady_clock::now();
    manifest["started_unix"] = static_cast<long long>(std::time(nullptr));
    write_text(out_dir + "/manifest.json", manifest.dump(2) + "\n");

    ProgressFn progress;
    if (!quiet)
        progress = [](arma::uword iter, double logP, arma::uword size, double temp,
                      double xrate) {
            std::fprintf(stderr, "iter=%llu logP=%.6g model_size=%llu temp=%.4g exch_rate=%.3f\n",
                         static_cast<unsigned long long>(iter), logP,
                         static_cast<unsigned long long>(size), temp, xrate);
        };

    const McmcOutput output = run_sampler(spec, data, progress);
    const PosteriorSummary summary = summarize(output);
    auto files = write_summary_files(out_dir, summary, output, data);
    files.insert(files.begin(), "manifest.json");

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    manifest["status"] = "complete";
    manifest["elapsed_sec"] = fmt17(elapsed);
    manifest["exchange_rate"] = fmt17(output.exchange_rate);
    manifest["hot_temperature"] = fmt17(output.final_hot_temperature);
    manifest["elpd_loo"] = fmt17(summary.elpd_loo);
    manifest["elpd_waic"] = fmt17(summary.elpd_waic);
    manifest["files"] = files;
    write_text(out_dir + "/manifest.json", manifest.dump(2) + "\n");

    if (!quiet) {
        std::cerr << "selected (mPIP > " << summary.threshold
                  << "): " << arma::accu(summary.selected) << " of " << data.s() << "x"
                  << data.p() << "\n";
        std::cerr << "elpd.LOO = " << summary.elpd_loo << ", elpd.WAIC = " << summary.elpd_waic
                  << "\n";
    }
}

namespace {

struct Recipe {
    EqtlRecipe eqtl;
};

Recipe parse_recipe(const std::string& path) {
    Recipe r;
    if (path.empty()) return r;
    std::ifstream in(path);
    if (!in) throw IoError("cannot open recipe file " + path);
    std::string line;
    arma::uword lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        if (eq == std::string::npos)
            throw ConfigError("expected key=value in recipe at line " + std::to_string(lineno));
        auto trim = [](std::string v) {
            const auto b = v.find_first_not_of(" \t\r\n");
            const auto e = v.find_last_not_of(" \t\r\n");
            return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        double num = 0.0;
        try {
            num = std::stod(val);
        } catch (const std::exception&) {
            throw ConfigError("bad numeric value for recipe key " + key);
        }
        if (key == "n") r.eqtl.n = static_cast<arma::uword>(num);
        else if (key == "p") r.eqtl.p = static_cast<arma::uword>(num);
        else if (key == "s") r.eqtl.s = static_cast<arma::uword>(num);
        else if (key == "seed") r.eqtl.seed = static_cast<std::uint64_t>(num);
        else if (key == "coef_sd") r.eqtl.coef_sd = num;
        else if (key == "noise_sd") r.eqtl.noise_sd = num;
        else if (key == "maf_min") r.eqtl.maf_min = num;
        else if (key == "maf_max") r.eqtl.maf_max = num;
        else if (key == "m_offdiag") r.eqtl.m_offdiag = num;
        else if (key == "m_scale") r.eqtl.m_scale = num;
        else if (key == "delta") r.eqtl.gwishart_delta = num;
        else throw ConfigError("unknown recipe key '" + key + "'");
    }
    return r;
}

void write_config_template(const std::string& out_dir, arma::uword s, arma::uword sp,
                           std::uint64_t seed) {
    std::string cfg;
    cfg += "data = " + out_dir + "/data.csv\n";
    cfg += "Y = 1:" + std::to_string(s) + "\n";
    cfg += "X = " + std::to_string(s + 1) + ":" + std::to_string(sp) + "\n";
    cfg += "covariancePrior = HIW\n";
    cfg += "gammaPrior = hotspot\n";
    cfg += "nIter = 10000\n";
    cfg += "burnin = 5000\n";
    cfg += "nChains = 2\n";
    cfg += "seed = " + std::to_string(seed) + "\n";
    write_text(out_dir + "/config_template.txt", cfg);
}

}  // namespace

void cmd_simulate(const std::string& kind, const std::string& recipe_path,
                  const std::string& out_dir) {
    pin_blas_once();
    ensure_dir(out_dir);
    if (kind == "quickstart") {
        std::uint64_t seed = 82193;
        if (!recipe_path.empty()) {
            const Recipe r = parse_recipe(recipe_path);
            seed = r.eqtl.seed;
        }
        const QuickstartTruth truth = simulate_quickstart(seed);
        write_dataset(out_dir + "/data.csv", truth.data);
        write_csv_matrix(out_dir + "/B_true.csv", truth.B_true, truth.data.y_names);
        write_csv_matrix(out_dir + "/gamma_true.csv",
                         arma::conv_to<arma::mat>::from(truth.gamma_true), truth.data.y_names);
        write_config_template(out_dir, truth.data.s(), truth.data.s() + truth.data.p(), seed);
    } else if (kind == "eqtl") {
        const Recipe r = parse_recipe(recipe_path);
        const EqtlTruth truth = simulate_eqtl(r.eqtl);
        write_dataset(out_dir + "/data.csv", truth.data);
        write_csv_matrix(out_dir + "/B_true.csv", truth.B_true, truth.data.y_names);
        write_csv_matrix(out_dir + "/gamma_true.csv",
                         arma::conv_to<arma::mat>::from(truth.gamma_true), truth.data.y_names);
        write_csv_matrix(out_dir + "/G_true.csv",
                         arma::conv_to<arma::mat>::from(truth.graph_true), truth.data.y_names);
        write_text(out_dir + "/snr.txt", "empirical_snr = " + fmt17(truth.snr) + "\n");
        write_config_template(out_dir, truth.data.s(), truth.data.s() + truth.data.p(),
                              r.eqtl.seed);
    } else {
        throw ConfigError("unknown simulation kind '" + kind + "' (expected quickstart or eqtl)");
    }
}

double rank_auc(const arma::vec& scores, const arma::uvec& labels) {
    const arma::uword n = scores.n_elem;
    arma::uvec order = arma::stable_sort_index(scores);
    arma::vec ranks(n);
    arma::uword i = 0;
    while (i < n) {
        arma::uword j = i;
        while (j + 1 < n && scores(order(j + 1)) == scores(order(i))) ++j;
        const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (arma::uword t = i; t <= j; ++t) ranks(order(t)) = midrank;
        i = j + 1;
    }
    double rank_sum_pos = 0.0;
    arma::uword n_pos = 0;
    for (arma::uword t = 0; t < n; ++t)
        if (labels(t)) {
            rank_sum_pos += ranks(t);
            ++n_pos;
        }
    const arma::uword n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw ConfigError("AUC undefined: need both positive and negative labels");
    return (rank_sum_pos - 0.5 * static_cast<double>(n_pos) * (n_pos + 1)) /
           (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

EvalMetrics cmd_evaluate(const std::string& truth_dir, const std::string& fit_dir,
                         const std::string& out_path) {
    const arma::mat gamma_true = read_csv_matrix(truth_dir + "/gamma_true.csv").values;
    const arma::mat gamma_hat = read_csv_matrix(fit_dir + "/gamma_hat.csv").values;
    if (gamma_true.n_rows != gamma_hat.n_rows || gamma_true.n_cols != gamma_hat.n_cols)
        throw ConfigError("dimension mismatch between gamma_true and gamma_hat");

    EvalMetrics m;
    m.gamma_auc = rank_auc(arma::vectorise(gamma_hat),
                           arma::vectorise(arma::conv_to<arma::umat>::from(gamma_true != 0.0)));
    arma::uword tp = 0, fp = 0, fn = 0, tn = 0;
    for (arma::uword idx = 0; idx < gamma_true.n_elem; ++idx) {
        const bool truth = gamma_true(idx) != 0.0;
        const bool hat = gamma_hat(idx) > 0.5;
        tp += truth && hat;
        fn += truth && !hat;
        fp += !truth && hat;
        tn += !truth && !hat;
    }
    m.tpr = tp + fn ? static_cast<double>(tp) / (tp + fn) : 0.0;
    m.fpr = fp + tn ? static_cast<double>(fp) / (fp + tn) : 0.0;

    if (fs::exists(truth_dir + "/G_true.csv") && fs::exists(fit_dir + "/G_hat.csv")) {
        const arma::mat g_true = read_csv_matrix(truth_dir + "/G_true.csv").values;
        const arma::mat g_hat = read_csv_matrix(fit_dir + "/G_hat.csv").values;
        if (g_true.n_rows != g_hat.n_rows)
            throw ConfigError("dimension mismatch between G_true and G_hat");
        arma::uword te = 0, te_hit = 0, tn_edges = 0, tn_hit = 0;
        for (arma::uword a = 0; a < g_true.n_rows; ++a)
            for (arma::uword b = a + 1; b < g_true.n_cols; ++b) {
                if (g_true(a, b) != 0.0) {
                    ++te;
                    te_hit += g_hat(a, b) > 0.5;
                } else {
                    ++tn_edges;
                    tn_hit += g_hat(a, b) <= 0.5;
                }
            }
        m.g_edge_recall = te ? static_cast<double>(te_hit) / te : 1.0;
        m.g_nonedge_recall = tn_edges ? static_cast<double>(tn_hit) / tn_edges : 1.0;
    }

    if (fs::exists(truth_dir + "/B_true.csv") && fs::exists(fit_dir + "/beta_hat.csv")) {
        const arma::mat b_true = read_csv_matrix(truth_dir + "/B_true.csv").values;
        const arma::mat b_hat_all = read_csv_matrix(fit_dir + "/beta_hat.csv").values;
        if (b_hat_all.n_rows < b_true.n_rows || b_hat_all.n_cols != b_true.n_cols)
            throw ConfigError("dimension mismatch between B_true and beta_hat");
        // selectable block sits in the last p rows (X0 rows come first)
        const arma::mat b_hat =
            b_hat_all.rows(b_hat_all.n_rows - b_true.n_rows, b_hat_all.n_rows - 1);
        double ss = 0.0;
        arma::uword cnt = 0;
        for (arma::uword idx = 0; idx < b_true.n_elem; ++idx)
            if (b_true(idx) != 0.0) {
                const double d = b_hat(idx) - b_true(idx);
                ss += d * d;
                ++cnt;
            }
        m.beta_rmse_support = cnt ? std::sqrt(ss / cnt) : 0.0;
    }

    std::string report;
    report += "gamma_auc = " + fmt17(m.gamma_auc) + "\n";
    report += "gamma_tpr_at_0.5 = " + fmt17(m.tpr) + "\n";
    report += "gamma_fpr_at_0.5 = " + fmt17(m.fpr) + "\n";
    if (m.g_edge_recall >= 0.0) {
        report += "g_edge_recall_at_0.5 = " + fmt17(m.g_edge_recall) + "\n";
        report += "g_nonedge_recall_at_0.5 = " + fmt17(m.g_nonedge_recall) + "\n";
    }
    if (m.beta_rmse_support >= 0.0)
        report += "beta_rmse_on_support = " + fmt17(m.beta_rmse_support) + "\n";
    write_text(out_path.empty() ? fit_dir + "/metrics.txt" : out_path, report);
    std::cout << report;
    return m;
}

void cmd_diag(const std::string& fit_dir) {
    const json manifest = read_manifest(fit_dir);
    if (!manifest.contains("files"))
        throw ConfigError("manifest.json has no file inventory");
    for (const auto& f : manifest["files"]) {
        const std::string name = f.get<std::string>();
        if (!fs::exists(fit_dir + "/" + name))
            throw IoError("missing output file: " + name);
    }

    const arma::vec logP = read_csv_matrix(fit_dir + "/logP.csv").values.col(0);
    const arma::vec msize = read_csv_matrix(fit_dir + "/model_size.csv").values.col(0);
    const arma::uword burnin = manifest.contains("burnin")
                                   ? static_cast<arma::uword>(
                                         std::stoull(manifest["burnin"].get<std::string>()))
                                   : logP.n_elem / 2;

    arma::mat traces(logP.n_elem, 3);
    for (arma::uword i = 0; i < logP.n_elem; ++i) traces(i, 0) = static_cast<double>(i + 1);
    traces.col(1) = logP;
    traces.col(2) = msize;
    write_csv_matrix(fit_dir + "/diag_traces.csv", traces, {"iter", "logP", "model_size"});

    // moving-window quantile summaries of the post-burn-in logP: four quarters
    // plus the last half, 101 quantiles each
    const arma::vec post = logP.tail(logP.n_elem - std::min(burnin, logP.n_elem - 1));
    struct Window {
        const char* label;
        arma::uword lo, hi;
    };
    const arma::uword L = post.n_elem;
    std::vector<Window> windows = {{"q1", 0, L / 4},
                                   {"q2", L / 4, L / 2},
                                   {"q3", L / 2, 3 * L / 4},
                                   {"q4", 3 * L / 4, L},
                                   {"last_half", L / 2, L}};
    std::string wcsv = "window,prob,logP\n";
    for (const auto& wdef : windows) {
        if (wdef.hi <= wdef.lo) continue;
        arma::vec seg = arma::sort(post.subvec(wdef.lo, wdef.hi - 1));
        for (int q = 0; q <= 100; ++q) {
            const double prob = q / 100.0;
            const arma::uword pos = std::min<arma::uword>(
                seg.n_elem - 1, static_cast<arma::uword>(prob * (seg.n_elem - 1) + 0.5));
            wcsv += std::string(wdef.label) + "," + fmt17(prob) + "," + fmt17(seg(pos)) + "\n";
        }
    }
    write_text(fit_dir + "/diag_logP_windows.csv", wcsv);

    // response graph at threshold 0.5
    const arma::mat g_hat = read_csv_matrix(fit_dir + "/G_hat.csv").values;
    std::string dot = "graph responses {\n";
    for (arma::uword k = 0; k < g_hat.n_rows; ++k)
        dot += "  y" + std::to_string(k + 1) + ";\n";
    for (arma::uword a = 0; a < g_hat.n_rows; ++a)
        for (arma::uword b = a + 1; b < g_hat.n_cols; ++b)
            if (g_hat(a, b) > 0.5)
                dot += "  y" + std::to_string(a + 1) + " -- y" + std::to_string(b + 1) +
                       " [weight=" + fmt17(g_hat(a, b)) + "];\n";
    dot += "}\n";
    write_text(fit_dir + "/graph.dot", dot);
}

}  // namespace bsur
