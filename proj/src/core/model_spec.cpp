#include "core/model_spec.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "core/errors.hpp"

namespace bsur {

const char* to_string(CovPrior v) {
    switch (v) {
        case CovPrior::IG: return "IG";
        case CovPrior::IW: return "IW";
        case CovPrior::HIW: return "HIW";
    }
    return "?";
}

const char* to_string(GammaPriorKind v) {
    switch (v) {
        case GammaPriorKind::Hierarchical: return "hierarchical";
        case GammaPriorKind::Hotspot: return "hotspot";
        case GammaPriorKind::Mrf: return "MRF";
    }
    return "?";
}

const char* to_string(GammaSamplerKind v) {
    return v == GammaSamplerKind::MC3 ? "MC3" : "bandit";
}

const char* to_string(GammaInitKind v) {
    switch (v) {
        case GammaInitKind::Zeros: return "0";
        case GammaInitKind::Ones: return "1";
        case GammaInitKind::Mle: return "MLE";
        case GammaInitKind::Random: return "R";
    }
    return "?";
}

namespace {

void require_positive(const std::optional<double>& v, const char* name) {
    if (v && !(*v > 0.0))
        throw ConfigError(std::string("non-positive hyperparameter: ") + name);
}

void fill(std::optional<double>& v, double def) {
    if (!v) v = def;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

ModelSpec validate_spec(ModelSpec spec, const Dataset& data) {
    data.validate();
    const double s = static_cast<double>(data.s());
    const double ps = static_cast<double>(data.p()) * s;

    if (spec.n_iter == 0) throw ConfigError("nIter must be positive");
    if (spec.n_chains == 0) throw ConfigError("nChains must be positive");
    if (spec.burnin >= spec.n_iter)
        throw ConfigError("burnin must be smaller than nIter");
    if (spec.max_threads == 0) spec.max_threads = 1;

    if (spec.gamma_prior == GammaPriorKind::Mrf) {
        if (!spec.mrf_edges)
            throw ConfigError("missing MRF graph: gammaPrior=MRF requires mrfG edges");
        std::set<std::pair<arma::uword, arma::uword>> seen;
        std::vector<MrfEdge> dedup;
        for (auto e : *spec.mrf_edges) {
            if (e.a == e.b) throw ConfigError("MRF edge connects an index to itself");
            if (e.a > e.b) std::swap(e.a, e.b);
            if (e.b >= static_cast<arma::uword>(ps))
                throw ConfigError("MRF edge index " + std::to_string(e.b) +
                                  " out of range for p*s = " + std::to_string((arma::uword)ps));
            if (seen.insert({e.a, e.b}).second) dedup.push_back(e);
        }
        spec.mrf_edges = std::move(dedup);
    } else if (spec.mrf_edges && !spec.mrf_edges->empty()) {
        throw ConfigError("mrfG edges given but gammaPrior is not MRF");
    }

    auto& h = spec.hyper;
    for (auto [v, name] : {std::pair{&h.a_w, "a_w"}, {&h.b_w, "b_w"},
                           {&h.a_sigma, "a_sigma"}, {&h.b_sigma, "b_sigma"},
                           {&h.a_omega, "a_omega"}, {&h.b_omega, "b_omega"},
                           {&h.a_o, "a_o"}, {&h.b_o, "b_o"},
                           {&h.a_pi, "a_pi"}, {&h.b_pi, "b_pi"},
                           {&h.a_tau, "a_tau"}, {&h.b_tau, "b_tau"},
                           {&h.a_eta, "a_eta"}, {&h.b_eta, "b_eta"}})
        require_positive(*v, name);
    if (h.mrf_e && *h.mrf_e < 0.0) throw ConfigError("non-positive hyperparameter: mrf_e must be >= 0");

    fill(h.a_w, 2.0);
    fill(h.b_w, 5.0);
    fill(h.a_sigma, 1.0);
    fill(h.b_sigma, 1.0);
    fill(h.a_omega, 2.0);
    fill(h.b_omega, std::max(ps - 2.0, 1.0));
    fill(h.a_o, 2.0);
    fill(h.b_o, std::max(static_cast<double>(data.p()) - 2.0, 1.0));
    fill(h.a_pi, 2.0);
    fill(h.b_pi, 1.0);
    fill(h.mrf_d, -3.0);
    fill(h.mrf_e, 0.03);
    fill(h.nu, s + 3.0);
    fill(h.a_tau, 0.1);
    fill(h.b_tau, 10.0);
    fill(h.a_eta, 0.1);
    fill(h.b_eta, 1.0);

    if (!(*h.nu > s + 1.0))
        throw ConfigError("nu must exceed s + 1 (got nu = " + std::to_string(*h.nu) +
                          " with s = " + std::to_string(data.s()) + ")");
    return spec;
}

std::vector<std::pair<std::string, std::string>> spec_echo(const ModelSpec& spec) {
    std::vector<std::pair<std::string, std::string>> kv;
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    kv.emplace_back("covariancePrior", to_string(spec.covariance_prior));
    kv.emplace_back("gammaPrior", to_string(spec.gamma_prior));
    kv.emplace_back("gammaSampler", to_string(spec.gamma_sampler));
    kv.emplace_back("gammaInit", to_string(spec.gamma_init));
    kv.emplace_back("nIter", std::to_string(spec.n_iter));
    kv.emplace_back("burnin", std::to_string(spec.burnin));
    kv.emplace_back("nChains", std::to_string(spec.n_chains));
    kv.emplace_back("seed", std::to_string(spec.seed));
    kv.emplace_back("maxThreads", std::to_string(spec.max_threads));
    kv.emplace_back("tick", std::to_string(spec.tick));
    const auto& h = spec.hyper;
    auto add = [&](const char* name, const std::optional<double>& v) {
        kv.emplace_back(std::string("hyperpar.") + name, v ? num(*v) : "unset");
    };
    add("a_w", h.a_w); add("b_w", h.b_w);
    add("a_sigma", h.a_sigma); add("b_sigma", h.b_sigma);
    add("a_omega", h.a_omega); add("b_omega", h.b_omega);
    add("a_o", h.a_o); add("b_o", h.b_o);
    add("a_pi", h.a_pi); add("b_pi", h.b_pi);
    add("nu", h.nu);
    add("a_tau", h.a_tau); add("b_tau", h.b_tau);
    add("a_eta", h.a_eta); add("b_eta", h.b_eta);
    add("mrf_d", h.mrf_d); add("mrf_e", h.mrf_e);
    if (spec.mrf_edges)
        kv.emplace_back("mrfEdges", std::to_string(spec.mrf_edges->size()));
    return kv;
}

std::vector<MrfEdge> read_mrf_edges(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open MRF graph file " + path);
    std::vector<MrfEdge> edges;
    std::string line;
    arma::uword lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::istringstream ss(t);
        long long a = -1, b = -1;
        double w = 1.0;
        if (!(ss >> a >> b))
            throw ConfigError("bad MRF edge at " + path + ":" + std::to_string(lineno));
        ss >> w;  // optional
        if (a < 0 || b < 0)
            throw ConfigError("negative MRF index at " + path + ":" + std::to_string(lineno));
        edges.push_back({static_cast<arma::uword>(a), static_cast<arma::uword>(b), w});
    }
    return edges;
}

void write_mrf_edges(const std::string& path, const std::vector<MrfEdge>& edges) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    char buf[40];
    for (const auto& e : edges) {
        std::snprintf(buf, sizeof(buf), "%.17g", e.weight);
        out << e.a << ' ' << e.b << ' ' << buf << '\n';
    }
}

namespace {

double to_num(const std::string& key, const std::string& val) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(val, &pos);
        if (pos != val.size()) throw std::invalid_argument(val);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for " + key + ": '" + val + "'");
    }
}

arma::uword to_count(const std::string& key, const std::string& val) {
    const double v = to_num(key, val);
    if (v < 0 || v != std::floor(v))
        throw ConfigError(key + " must be a non-negative integer");
    return static_cast<arma::uword>(v);
}

}  // namespace

RunConfig parse_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    RunConfig cfg;
    bool threads_set = false;
    std::string line;
    arma::uword lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key=value at " + path + ":" + std::to_string(lineno));
        const std::string key = trim(t.substr(0, eq));
        const std::string val = trim(t.substr(eq + 1));

        auto& spec = cfg.spec;
        auto& h = spec.hyper;
        if (key == "data") cfg.data_path = val;
        else if (key == "Y") cfg.y_spec = val;
        else if (key == "X") cfg.x_spec = val;
        else if (key == "X_0") cfg.x0_spec = val;
        else if (key == "mrfG") cfg.mrf_path = val;
        else if (key == "covariancePrior") {
            if (val == "IG") spec.covariance_prior = CovPrior::IG;
            else if (val == "IW") spec.covariance_prior = CovPrior::IW;
            else if (val == "HIW") spec.covariance_prior = CovPrior::HIW;
            else throw ConfigError("covariancePrior must be IG, IW or HIW (got '" + val + "')");
        } else if (key == "gammaPrior") {
            if (val == "hierarchical") spec.gamma_prior = GammaPriorKind::Hierarchical;
            else if (val == "hotspot") spec.gamma_prior = GammaPriorKind::Hotspot;
            else if (val == "MRF") spec.gamma_prior = GammaPriorKind::Mrf;
            else throw ConfigError("gammaPrior must be hierarchical, hotspot or MRF (got '" + val + "')");
        } else if (key == "gammaSampler") {
            if (val == "MC3") spec.gamma_sampler = GammaSamplerKind::MC3;
            else if (val == "bandit") spec.gamma_sampler = GammaSamplerKind::Bandit;
            else throw ConfigError("gammaSampler must be MC3 or bandit (got '" + val + "')");
        } else if (key == "gammaInit") {
            if (val == "0") spec.gamma_init = GammaInitKind::Zeros;
            else if (val == "1") spec.gamma_init = GammaInitKind::Ones;
            else if (val == "MLE") spec.gamma_init = GammaInitKind::Mle;
            else if (val == "R") spec.gamma_init = GammaInitKind::Random;
            else throw ConfigError("gammaInit must be 0, 1, MLE or R (got '" + val + "')");
        } else if (key == "nIter") spec.n_iter = to_count(key, val);
        else if (key == "burnin") spec.burnin = to_count(key, val);
        else if (key == "nChains") spec.n_chains = to_count(key, val);
        else if (key == "seed") spec.seed = static_cast<std::uint64_t>(to_count(key, val));
        else if (key == "maxThreads") { spec.max_threads = static_cast<unsigned>(to_count(key, val)); threads_set = true; }
        else if (key == "tick") spec.tick = static_cast<unsigned>(to_count(key, val));
        else if (key == "hyperpar.a_w") h.a_w = to_num(key, val);
        else if (key == "hyperpar.b_w") h.b_w = to_num(key, val);
        else if (key == "hyperpar.a_sigma") h.a_sigma = to_num(key, val);
        else if (key == "hyperpar.b_sigma") h.b_sigma = to_num(key, val);
        else if (key == "hyperpar.a_omega") h.a_omega = to_num(key, val);
        else if (key == "hyperpar.b_omega") h.b_omega = to_num(key, val);
        else if (key == "hyperpar.a_o") h.a_o = to_num(key, val);
        else if (key == "hyperpar.b_o") h.b_o = to_num(key, val);
        else if (key == "hyperpar.a_pi") h.a_pi = to_num(key, val);
        else if (key == "hyperpar.b_pi") h.b_pi = to_num(key, val);
        else if (key == "hyperpar.nu") h.nu = to_num(key, val);
        else if (key == "hyperpar.a_tau") h.a_tau = to_num(key, val);
        else if (key == "hyperpar.b_tau") h.b_tau = to_num(key, val);
        else if (key == "hyperpar.a_eta") h.a_eta = to_num(key, val);
        else if (key == "hyperpar.b_eta") h.b_eta = to_num(key, val);
        else if (key == "hyperpar.mrf_d") h.mrf_d = to_num(key, val);
        else if (key == "hyperpar.mrf_e") h.mrf_e = to_num(key, val);
        else throw ConfigError("unknown config key '" + key + "' at " + path + ":" +
                               std::to_string(lineno));
    }

    if (!threads_set) {
        if (const char* env = std::getenv("SUR_ESS_THREADS")) {
            const std::string v = trim(env);
            if (!v.empty()) cfg.spec.max_threads = static_cast<unsigned>(to_count("SUR_ESS_THREADS", v));
        }
    }
    if (!cfg.mrf_path.empty()) cfg.spec.mrf_edges = read_mrf_edges(cfg.mrf_path);
    return cfg;
}

Dataset load_config_dataset(const RunConfig& cfg) {
    if (!cfg.data_path.empty()) {
        if (cfg.y_spec.empty() || cfg.x_spec.empty())
            throw ConfigError("combined data matrix requires Y and X column blocks");
        return load_dataset_combined(cfg.data_path,
                                     parse_column_block(cfg.y_spec),
                                     parse_column_block(cfg.x_spec),
                                     parse_column_block(cfg.x0_spec));
    }
    if (cfg.y_spec.empty() || cfg.x_spec.empty())
        throw ConfigError("need either data= with blocks, or Y= and X= file paths");
    return load_dataset_files(cfg.y_spec, cfg.x_spec, cfg.x0_spec);
}

}  // namespace bsur
