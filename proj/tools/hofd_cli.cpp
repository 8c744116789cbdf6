// Experiment runner: sample a benchmark (or CSV dataset), build the
// hierarchically orthogonal dictionary on one half of the data, fit a sparse
// decomposition on the other half, and report sensitivity indices.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hofd/hofd.hpp"

namespace {

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stoi(cell));
    return out;
}

struct CommonFlags {
    std::string model = "ishigami";
    int n = 300;
    int lvl = 8;
    std::string basis = "legendre";
    std::string selector = "boost";
    double gamma = 0.7;
    int kmax = 500;
    std::string kmax_rule = "cp";
    double kmax_c = 5.0;
    std::string cp_mode = "standardized";
    double eps = 1e-2;
    double delta = 0.5;
    int reps = 1;
    std::uint64_t seed = 0;
    double split = 0.5;
    int jobs = 0;
    std::string out;
    bool fresh_sample = false;
    double correlation = 0.0;
    double sigma_eps = 0.0;
    double ishigami_a = 7.0;
    double ishigami_b = 0.1;
    std::string gsobol_a = "0,1,4.5,9,99,99,99,99,99,99";
    int lasso_grid = 50;
    double lasso_min_ratio = 1e-3;
    double threshold = 1e-12;
    bool trace = false;
    bool export_design = false;
    std::string manifest_path;
};

void add_common_flags(CLI::App* app, CommonFlags& f) {
    app->add_option("--model", f.model, "ishigami, gsobol, or csv:PATH");
    app->add_option("--n", f.n, "total sample size");
    app->add_option("--L", f.lvl, "basis truncation per variable");
    app->add_option("--basis", f.basis)
        ->check(CLI::IsMember({"legendre", "fourier", "hermite"}));
    app->add_option("--selector", f.selector)
        ->check(CLI::IsMember({"boost", "foba", "lasso"}));
    app->add_option("--gamma", f.gamma, "boosting shrinkage in (0,1]");
    app->add_option("--kmax", f.kmax, "boosting iteration budget");
    app->add_option("--kmax-rule", f.kmax_rule)->check(CLI::IsMember({"cp", "fixed", "log"}));
    app->add_option("--kmax-c", f.kmax_c, "constant for --kmax-rule log (k = C log n2)");
    app->add_option("--cp-mode", f.cp_mode)
        ->check(CLI::IsMember({"standardized", "paper-literal"}));
    app->add_option("--eps", f.eps, "FoBa forward stopping threshold");
    app->add_option("--delta", f.delta, "FoBa backward slack in (0,1]");
    app->add_option("--reps", f.reps, "replications");
    app->add_option("--seed", f.seed, "base seed; replicate r uses seed + r");
    app->add_option("--split", f.split, "fraction of rows for basis construction");
    app->add_option("--jobs", f.jobs, "worker threads (0 = hardware)");
    app->add_option("--out", f.out, "output directory");
    app->add_flag("--fresh-sample", f.fresh_sample,
                  "estimate indices on a third sample instead of the fit half");
    app->add_option("--correlation", f.correlation,
                    "equicorrelation of a Gaussian copula over the inputs");
    app->add_option("--sigma-eps", f.sigma_eps, "observation noise stddev");
    app->add_option("--ishigami-a", f.ishigami_a);
    app->add_option("--ishigami-b", f.ishigami_b);
    app->add_option("--gsobol-a", f.gsobol_a, "comma-separated coefficients");
    app->add_option("--lasso-grid", f.lasso_grid, "lambda grid size");
    app->add_option("--lasso-min-ratio", f.lasso_min_ratio, "lambda_min / lambda_max");
    app->add_option("--threshold", f.threshold, "Gram degeneracy threshold");
    app->add_flag("--trace", f.trace, "write the first replicate's fit trace");
    app->add_flag("--export-design", f.export_design,
                  "write the first replicate's design matrix and atom document");
    app->add_option("--manifest", f.manifest_path,
                    "load the full configuration from a manifest.json");
}

hofd::ExperimentConfig build_config(const CommonFlags& f) {
    using namespace hofd;
    if (!f.manifest_path.empty()) {
        std::ifstream in(f.manifest_path);
        if (!in) throw ConfigError("cannot open manifest " + f.manifest_path);
        std::stringstream ss;
        ss << in.rdbuf();
        ExperimentConfig cfg = detail::config_from_manifest(nlohmann::json::parse(ss.str()));
        cfg.out_dir = f.out;
        return cfg;
    }
    ExperimentConfig cfg;
    if (f.model == "ishigami")
        cfg.model = ModelSpec::ishigami(f.ishigami_a, f.ishigami_b);
    else if (f.model == "gsobol")
        cfg.model = ModelSpec::gsobol(parse_double_list(f.gsobol_a));
    else if (f.model.rfind("csv:", 0) == 0)
        cfg.model = ModelSpec::dataset(f.model.substr(4));
    else
        throw ConfigError("unknown model '" + f.model + "'");
    cfg.model.noise_sigma = f.sigma_eps;
    if (f.correlation != 0.0) cfg.model.set_equicorrelation(f.correlation);
    cfg.n = f.n;
    cfg.split = f.split;
    cfg.basis = f.basis == "legendre" ? BasisKind::Legendre
                : (f.basis == "fourier" ? BasisKind::Fourier : BasisKind::Hermite);
    cfg.lvl = f.lvl;
    cfg.selector = f.selector == "boost" ? Selector::Boost
                   : (f.selector == "foba" ? Selector::Foba : Selector::Lasso);
    cfg.boost.gamma = f.gamma;
    cfg.boost.k_max = f.kmax;
    cfg.boost.cp_mode =
        f.cp_mode == "standardized" ? CpMode::Standardized : CpMode::PaperLiteral;
    cfg.kmax_rule = f.kmax_rule == "cp" ? KmaxRule::Cp
                    : (f.kmax_rule == "fixed" ? KmaxRule::Fixed : KmaxRule::Log);
    cfg.kmax_c = f.kmax_c;
    cfg.foba_eps = f.eps;
    cfg.foba_delta = f.delta;
    cfg.lasso_grid = f.lasso_grid;
    cfg.lasso_min_ratio = f.lasso_min_ratio;
    cfg.degeneracy_threshold = f.threshold;
    cfg.reps = f.reps;
    cfg.seed = f.seed;
    cfg.jobs = f.jobs;
    cfg.fresh_sample = f.fresh_sample;
    cfg.export_trace = f.trace;
    cfg.export_design = f.export_design;
    cfg.out_dir = f.out;
    return cfg;
}

void print_run_summary(const hofd::ExperimentConfig& cfg, const hofd::ExperimentReport& rep) {
    using namespace hofd;
    std::vector<Subset> subsets;
    for (const auto& r : rep.replicates) {
        if (!r.ok) continue;
        for (const auto& e : r.report.indices)
            if (std::find(subsets.begin(), subsets.end(), e.u) == subsets.end())
                subsets.push_back(e.u);
    }
    std::sort(subsets.begin(), subsets.end());
    std::printf("replicates: %d ok, %d failed\n", int(rep.replicates.size()) - rep.failed,
                rep.failed);
    auto das = rep.collect([](const ReplicateResult& r) { return r.d_a; });
    auto nnzs = rep.collect([](const ReplicateResult& r) { return double(r.fit.nnz()); });
    auto walls = rep.collect([](const ReplicateResult& r) { return r.fit.wall_seconds; });
    if (!das.empty())
        std::printf("degeneracy d(A) median: %.6g   |beta|_0 median: %g   fit seconds median: %.4g\n",
                    median(das), median(nnzs), median(walls));
    for (const auto& u : subsets) {
        std::vector<double> vals;
        for (const auto& r : rep.replicates)
            if (r.ok) vals.push_back(r.report.index_for(u));
        std::printf("  S_{%s}: median %.4f  (q25 %.4f, q75 %.4f)\n", u.label().c_str(),
                    median(vals), quantile(vals, 0.25), quantile(vals, 0.75));
    }
    if (!cfg.out_dir.empty()) std::printf("report written to %s\n", cfg.out_dir.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse orthogonal decomposition and sensitivity indices"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    CLI::App* run = app.add_subcommand("run", "run replicated experiments");
    add_common_flags(run, run_flags);

    CommonFlags conv_flags;
    std::string n_list_text = "250,1000,4000";
    int ref_mult = 16;
    int eval_n = 10000;
    CLI::App* conv = app.add_subcommand("converge", "error-vs-n study");
    add_common_flags(conv, conv_flags);
    conv->add_option("--n-list", n_list_text, "comma-separated increasing sizes");
    conv->add_option("--ref-mult", ref_mult, "reference size = mult * max(n-list)");
    conv->add_option("--eval-n", eval_n, "fresh evaluation sample size");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            hofd::ExperimentConfig cfg = build_config(run_flags);
            hofd::ExperimentReport rep = hofd::run_experiment(cfg);
            print_run_summary(cfg, rep);
        } else {
            hofd::ExperimentConfig cfg = build_config(conv_flags);
            auto points = hofd::convergence_study(cfg, parse_int_list(n_list_text),
                                                  ref_mult, eval_n);
            std::printf("%10s %22s %22s\n", "n", "hogs_err_median", "pred_err_median");
            for (const auto& pt : points)
                std::printf("%10d %22.6g %22.6g\n", pt.n, pt.hogs_err_median,
                            pt.pred_err_median);
            if (!cfg.out_dir.empty())
                std::printf("study written to %s/convergence.csv\n", cfg.out_dir.c_str());
        }
    } catch (const hofd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const hofd::AllReplicatesFailed& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
