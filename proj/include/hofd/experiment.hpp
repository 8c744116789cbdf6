#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "hofd/basis.hpp"
#include "hofd/boosting.hpp"
#include "hofd/dictionary.hpp"
#include "hofd/errors.hpp"
#include "hofd/fit.hpp"
#include "hofd/foba.hpp"
#include "hofd/gram.hpp"
#include "hofd/io.hpp"
#include "hofd/lasso.hpp"
#include "hofd/models.hpp"
#include "hofd/rng.hpp"
#include "hofd/sensitivity.hpp"

namespace hofd {

enum class Selector { Boost, Foba, Lasso };
enum class KmaxRule { Cp, Fixed, Log };

inline std::string to_string(Selector s) {
    switch (s) {
        case Selector::Boost: return "boost";
        case Selector::Foba: return "foba";
        default: return "lasso";
    }
}

/// Everything a run needs; a run is reconstructible from its manifest alone.
struct ExperimentConfig {
    ModelSpec model;
    int n = 300;
    double split = 0.5;  // fraction of rows feeding the basis construction
    BasisKind basis = BasisKind::Legendre;
    int lvl = 8;  // truncation L; interaction order is fixed at d = 2
    Selector selector = Selector::Boost;
    BoostConfig boost;
    KmaxRule kmax_rule = KmaxRule::Cp;
    double kmax_c = 5.0;  // k = ceil(kmax_c * log n2) under KmaxRule::Log
    double foba_eps = 1e-2;
    double foba_delta = 0.5;
    int lasso_grid = 50;
    double lasso_min_ratio = 1e-3;
    double degeneracy_threshold = 1e-12;
    int reps = 1;
    std::uint64_t seed = 0;
    int jobs = 0;  // 0 = hardware concurrency
    bool fresh_sample = false;
    bool export_trace = false;
    bool export_design = false;
    std::string out_dir;

    int n1() const { return static_cast<int>(std::lround(n * split)); }
    int n2() const { return n - n1(); }

    void validate() const {
        const int p = model.dim();
        if (p < 1) throw ConfigError("model has no inputs");
        if (lvl < 1) throw ConfigError("L must be >= 1");
        if (!(split > 0.0 && split < 1.0)) throw ConfigError("split must be in (0,1)");
        if (n < 4 * lvl + 2) throw ConfigError("n must be >= 4L+2");
        if (n1() < 2 * lvl + 1 || n2() < 2 * lvl + 1)
            throw ConfigError("split produces a half below 2L+1 rows");
        if (reps < 1) throw ConfigError("reps must be >= 1");
        boost.validate();
        if (!(foba_eps > 0.0)) throw ConfigError("eps must be > 0");
        if (!(foba_delta > 0.0 && foba_delta <= 1.0)) throw ConfigError("delta in (0,1]");
        if (lasso_grid < 2) throw ConfigError("lasso grid needs >= 2 points");
        if (!(lasso_min_ratio > 0.0 && lasso_min_ratio < 1.0))
            throw ConfigError("lasso min ratio in (0,1)");
        if (kmax_rule == KmaxRule::Log && !(kmax_c > 0.0))
            throw ConfigError("kmax_c must be > 0");
        if (fresh_sample && model.kind == ModelKind::Dataset)
            throw ConfigError("fresh-sample is unsupported for dataset models");
        if (model.kind == ModelKind::Dataset && model.dataset_x.rows() < n)
            throw ConfigError("dataset has fewer rows than n");
    }
};

/// Per-variable basis systems on the model's declared supports. Hermite uses
/// moment-matched parameters (midpoint mean, uniform-width stddev).
inline std::vector<BasisSystem> make_bases(const ModelSpec& model, BasisKind kind, int lvl) {
    std::vector<BasisSystem> bases;
    for (const auto& [a, b] : model.ranges) {
        switch (kind) {
            case BasisKind::Legendre: bases.push_back(BasisSystem::legendre(a, b, lvl)); break;
            case BasisKind::Fourier: bases.push_back(BasisSystem::fourier(a, b, lvl)); break;
            default:
                bases.push_back(BasisSystem::hermite(0.5 * (a + b),
                                                     (b - a) / std::sqrt(12.0), lvl));
        }
    }
    return bases;
}

struct ReplicateResult {
    int replicate = 0;
    bool ok = false;
    std::string error;
    double d_a = 0.0;
    std::vector<std::pair<int, int>> skipped;
    long long m_n = 0;
    SensitivityReport report;
    FitResult fit;
};

struct ExperimentReport {
    std::vector<ReplicateResult> replicates;
    int failed = 0;

    std::vector<double> collect(const std::function<double(const ReplicateResult&)>& f) const {
        std::vector<double> out;
        for (const auto& r : replicates)
            if (r.ok) out.push_back(f(r));
        return out;
    }
};

namespace detail {

inline void parallel_for(int count, int jobs, const std::function<void(int)>& body) {
    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    jobs = std::max(1, std::min(jobs, count));
    if (jobs == 1) {
        for (int k = 0; k < count; ++k) body(k);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mtx;
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (int t = 0; t < jobs; ++t)
        workers.emplace_back([&] {
            for (;;) {
                int k = next.fetch_add(1);
                if (k >= count) return;
                try {
                    body(k);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mtx);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    for (auto& w : workers) w.join();
    if (first_error) std::rethrow_exception(first_error);
}

inline BoostConfig effective_boost(const ExperimentConfig& cfg) {
    BoostConfig bc = cfg.boost;
    switch (cfg.kmax_rule) {
        case KmaxRule::Cp:
            bc.stopping = StoppingRule::MallowsCp;
            break;
        case KmaxRule::Fixed:
            bc.stopping = StoppingRule::FixedK;
            break;
        case KmaxRule::Log:
            bc.stopping = StoppingRule::FixedK;
            bc.k_max = std::max(1, static_cast<int>(std::ceil(cfg.kmax_c * std::log(double(cfg.n2())))));
            break;
    }
    return bc;
}

}  // namespace detail

/// One replicate of the two-stage pipeline: sample, shuffle-split, build the
/// interaction atoms on the first half, fit on the second, estimate indices.
inline ReplicateResult run_replicate(const ExperimentConfig& cfg, int replicate) {
    ReplicateResult rr;
    rr.replicate = replicate;
    try {
        const std::uint64_t seed_r = cfg.seed + static_cast<std::uint64_t>(replicate);
        Sample s = sample(cfg.model, cfg.n, seed_r);

        // Seeded row shuffle, then split by row order.
        Rng shuffle_rng(derive_seed(seed_r, 0x5117));
        for (int k = cfg.n - 1; k > 0; --k) {
            int pick = static_cast<int>(shuffle_rng.next_raw() % static_cast<std::uint64_t>(k + 1));
            s.x.row(k).swap(s.x.row(pick));
            std::swap(s.y[k], s.y[pick]);
        }
        const int n1 = cfg.n1();
        Eigen::MatrixXd x1 = s.x.topRows(n1);
        Eigen::MatrixXd x2 = s.x.bottomRows(cfg.n - n1);
        Eigen::VectorXd y2 = s.y.tail(cfg.n - n1);

        auto bases = make_bases(cfg.model, cfg.basis, cfg.lvl);
        HogsResult hogs = run_hogs(x1, bases, cfg.degeneracy_threshold);
        rr.d_a = hogs.degeneracy;
        rr.skipped = hogs.skipped;

        Dictionary dict(bases, hogs);
        rr.m_n = dict.size();
        DesignMatrix design = dict.evaluate(x2);

        switch (cfg.selector) {
            case Selector::Boost:
                rr.fit = boost_fit(design, y2, detail::effective_boost(cfg));
                break;
            case Selector::Foba:
                rr.fit = foba_fit(design, y2, cfg.foba_eps, cfg.foba_delta);
                break;
            case Selector::Lasso:
                rr.fit = lasso_fit(design, y2,
                                   lasso_default_grid(design, y2, cfg.lasso_grid,
                                                      cfg.lasso_min_ratio));
                break;
        }

        if (cfg.fresh_sample) {
            Sample fresh = sample(cfg.model, cfg.n2(), derive_seed(seed_r, 0xF2E5));
            rr.report = indices(component_values(rr.fit, dict, fresh.x), fresh.y);
        } else {
            rr.report = indices(component_values(rr.fit, dict, x2), y2);
        }
        rr.ok = true;
    } catch (const std::exception& e) {
        rr.ok = false;
        rr.error = e.what();
    }
    return rr;
}

namespace detail {

inline nlohmann::json manifest_json(const ExperimentConfig& cfg) {
    nlohmann::json m;
    m["model"]["kind"] = cfg.model.kind == ModelKind::Ishigami
                             ? "ishigami"
                             : (cfg.model.kind == ModelKind::GSobol ? "gsobol" : "dataset");
    m["model"]["ishigami_a"] = cfg.model.ishigami_a;
    m["model"]["ishigami_b"] = cfg.model.ishigami_b;
    m["model"]["gsobol_a"] = cfg.model.gsobol_a;
    m["model"]["dataset_path"] = cfg.model.dataset_path;
    m["model"]["noise_sigma"] = cfg.model.noise_sigma;
    if (!cfg.model.independent_inputs()) {
        std::vector<std::vector<double>> corr;
        for (int r = 0; r < cfg.model.correlation.rows(); ++r) {
            std::vector<double> row(cfg.model.correlation.cols());
            for (int c = 0; c < cfg.model.correlation.cols(); ++c)
                row[c] = cfg.model.correlation(r, c);
            corr.push_back(std::move(row));
        }
        m["model"]["correlation"] = corr;
    }
    m["n"] = cfg.n;
    m["split"] = cfg.split;
    m["basis"] = to_string(cfg.basis);
    m["L"] = cfg.lvl;
    m["d"] = 2;
    m["selector"] = to_string(cfg.selector);
    m["boost"]["gamma"] = cfg.boost.gamma;
    m["boost"]["k_max"] = cfg.boost.k_max;
    m["boost"]["cp_mode"] =
        cfg.boost.cp_mode == CpMode::Standardized ? "standardized" : "paper-literal";
    m["kmax_rule"] = cfg.kmax_rule == KmaxRule::Cp ? "cp"
                     : (cfg.kmax_rule == KmaxRule::Fixed ? "fixed" : "log");
    m["kmax_c"] = cfg.kmax_c;
    m["foba"]["eps"] = cfg.foba_eps;
    m["foba"]["delta"] = cfg.foba_delta;
    m["lasso"]["grid"] = cfg.lasso_grid;
    m["lasso"]["min_ratio"] = cfg.lasso_min_ratio;
    m["degeneracy_threshold"] = cfg.degeneracy_threshold;
    m["reps"] = cfg.reps;
    m["seed"] = cfg.seed;
    m["jobs"] = cfg.jobs;
    m["fresh_sample"] = cfg.fresh_sample;
    m["export_trace"] = cfg.export_trace;
    m["export_design"] = cfg.export_design;
    m["deviations"]["normalized_atoms"] = true;
    m["deviations"]["cp_sigma2_anchor"] = "RSS(K*)/(n2-K*) with K* = min(trace, n2/4)";
    m["derived"]["p"] = cfg.model.dim();
    m["derived"]["n1"] = cfg.n1();
    m["derived"]["n2"] = cfg.n2();
    m["derived"]["m_n"] = dictionary_size(cfg.model.dim(), cfg.lvl);
    return m;
}

inline ExperimentConfig config_from_manifest(const nlohmann::json& m) {
    ExperimentConfig cfg;
    const auto& jm = m.at("model");
    std::string kind = jm.at("kind").get<std::string>();
    if (kind == "ishigami")
        cfg.model = ModelSpec::ishigami(jm.at("ishigami_a").get<double>(),
                                        jm.at("ishigami_b").get<double>());
    else if (kind == "gsobol")
        cfg.model = ModelSpec::gsobol(jm.at("gsobol_a").get<std::vector<double>>());
    else
        cfg.model = ModelSpec::dataset(jm.at("dataset_path").get<std::string>());
    cfg.model.noise_sigma = jm.at("noise_sigma").get<double>();
    if (jm.contains("correlation")) {
        auto rows = jm.at("correlation").get<std::vector<std::vector<double>>>();
        cfg.model.correlation.resize(rows.size(), rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < rows[r].size(); ++c)
                cfg.model.correlation(r, c) = rows[r][c];
    }
    cfg.n = m.at("n").get<int>();
    cfg.split = m.at("split").get<double>();
    std::string basis = m.at("basis").get<std::string>();
    cfg.basis = basis == "legendre" ? BasisKind::Legendre
                : (basis == "fourier" ? BasisKind::Fourier : BasisKind::Hermite);
    cfg.lvl = m.at("L").get<int>();
    std::string sel = m.at("selector").get<std::string>();
    cfg.selector = sel == "boost" ? Selector::Boost
                   : (sel == "foba" ? Selector::Foba : Selector::Lasso);
    cfg.boost.gamma = m.at("boost").at("gamma").get<double>();
    cfg.boost.k_max = m.at("boost").at("k_max").get<int>();
    cfg.boost.cp_mode = m.at("boost").at("cp_mode").get<std::string>() == "standardized"
                            ? CpMode::Standardized
                            : CpMode::PaperLiteral;
    std::string rule = m.at("kmax_rule").get<std::string>();
    cfg.kmax_rule = rule == "cp" ? KmaxRule::Cp
                    : (rule == "fixed" ? KmaxRule::Fixed : KmaxRule::Log);
    cfg.kmax_c = m.at("kmax_c").get<double>();
    cfg.foba_eps = m.at("foba").at("eps").get<double>();
    cfg.foba_delta = m.at("foba").at("delta").get<double>();
    cfg.lasso_grid = m.at("lasso").at("grid").get<int>();
    cfg.lasso_min_ratio = m.at("lasso").at("min_ratio").get<double>();
    cfg.degeneracy_threshold = m.at("degeneracy_threshold").get<double>();
    cfg.reps = m.at("reps").get<int>();
    cfg.seed = m.at("seed").get<std::uint64_t>();
    cfg.jobs = m.at("jobs").get<int>();
    cfg.fresh_sample = m.at("fresh_sample").get<bool>();
    cfg.export_trace = m.at("export_trace").get<bool>();
    cfg.export_design = m.at("export_design").get<bool>();
    return cfg;
}

inline void write_report_files(const ExperimentConfig& cfg, const ExperimentReport& rep) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    const std::string dir = cfg.out_dir + "/";

    write_text_file(dir + "manifest.json", manifest_json(cfg).dump(2) + "\n");

    // Per-replicate indices.
    CsvWriter idx;
    idx.header({"replicate", "u", "var", "cov_sum", "s", "vy", "residual_share"});
    std::vector<Subset> all_subsets;
    for (const auto& r : rep.replicates) {
        if (!r.ok) continue;
        for (const auto& e : r.report.indices) {
            idx.row_strings({std::to_string(r.replicate), e.u.label(), format_double(e.var),
                             format_double(e.cov_sum), format_double(e.s),
                             format_double(r.report.vy),
                             format_double(r.report.residual_share)});
            if (std::find(all_subsets.begin(), all_subsets.end(), e.u) == all_subsets.end())
                all_subsets.push_back(e.u);
        }
    }
    idx.save(dir + "indices.csv");

    // Replication summary (absent subsets count as exactly zero).
    std::sort(all_subsets.begin(), all_subsets.end());
    CsvWriter summary;
    summary.header({"u", "median", "q25", "q75"});
    for (const auto& u : all_subsets) {
        std::vector<double> vals;
        for (const auto& r : rep.replicates)
            if (r.ok) vals.push_back(r.report.index_for(u));
        summary.row_strings({u.label(), format_double(median(vals)),
                             format_double(quantile(vals, 0.25)),
                             format_double(quantile(vals, 0.75))});
    }
    summary.save(dir + "summary.csv");

    // Timing / sparsity table.
    auto nnzs = rep.collect([](const ReplicateResult& r) { return double(r.fit.nnz()); });
    auto walls = rep.collect([](const ReplicateResult& r) { return r.fit.wall_seconds; });
    CsvWriter timing;
    timing.header({"selector", "beta_l0", "elapsed_seconds"});
    if (!nnzs.empty())
        timing.row_strings({to_string(cfg.selector), format_double(median(nnzs)),
                            format_double(median(walls))});
    timing.save(dir + "timing.csv");

    // Degeneracy, per replicate and in summary shape.
    CsvWriter deg;
    deg.header({"replicate", "d_a", "skipped_pairs"});
    for (const auto& r : rep.replicates)
        if (r.ok)
            deg.row_strings({std::to_string(r.replicate), format_double(r.d_a),
                             std::to_string(r.skipped.size())});
    deg.save(dir + "degeneracy.csv");

    auto das = rep.collect([](const ReplicateResult& r) { return r.d_a; });
    CsvWriter degsum;
    degsum.header({"d_a_median", "theta_lower", "n_pow_one_minus_two_theta", "log_m_n"});
    if (!das.empty()) {
        double d_med = std::max(median(das), 1e-300);
        double theta = std::log(1.0 / d_med) / std::log(double(cfg.n));
        double n_pow = std::pow(double(cfg.n), 1.0 - 2.0 * theta);
        double log_mn = std::log(double(dictionary_size(cfg.model.dim(), cfg.lvl)));
        degsum.row_strings({format_double(d_med), format_double(theta),
                            format_double(n_pow), format_double(log_mn)});
    }
    degsum.save(dir + "degeneracy_summary.csv");

    // Full per-replicate reports.
    nlohmann::json jrep;
    jrep["replicates"] = nlohmann::json::array();
    for (const auto& r : rep.replicates) {
        nlohmann::json jr;
        jr["replicate"] = r.replicate;
        jr["ok"] = r.ok;
        if (!r.ok) {
            jr["error"] = r.error;
            jrep["replicates"].push_back(jr);
            continue;
        }
        jr["d_a"] = r.d_a;
        jr["m_n"] = r.m_n;
        jr["beta_l0"] = r.fit.nnz();
        jr["chosen_k"] = r.fit.chosen_k;
        jr["indices"] = nlohmann::json::array();
        for (const auto& e : r.report.indices)
            jr["indices"].push_back({{"u", e.u.label()},
                                     {"var", e.var},
                                     {"cov_sum", e.cov_sum},
                                     {"s", e.s}});
        jr["vy"] = r.report.vy;
        jr["residual_share"] = r.report.residual_share;
        jrep["replicates"].push_back(jr);
    }
    write_text_file(dir + "report.json", jrep.dump(2) + "\n");

    if (cfg.export_trace)
        for (const auto& r : rep.replicates)
            if (r.ok) {
                trace_to_csv(r.fit.trace, dir + "trace.csv");
                break;
            }
}

}  // namespace detail

/// Runs all replicates (worker pool, deterministic per-replicate seeds) and,
/// when an output directory is set, writes the report files.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentReport rep;
    rep.replicates.resize(cfg.reps);
    detail::parallel_for(cfg.reps, cfg.jobs,
                         [&](int r) { rep.replicates[r] = run_replicate(cfg, r); });
    for (const auto& r : rep.replicates)
        if (!r.ok) ++rep.failed;
    if (rep.failed == cfg.reps)
        throw AllReplicatesFailed("all " + std::to_string(cfg.reps) + " replicates failed: " +
                                  rep.replicates.front().error);

    if (cfg.export_design && !cfg.out_dir.empty()) {
        // replicate 0 artifacts for audit: design matrix and atom document
        const std::uint64_t seed0 = cfg.seed;
        Sample s = sample(cfg.model, cfg.n, seed0);
        Rng shuffle_rng(derive_seed(seed0, 0x5117));
        for (int k = cfg.n - 1; k > 0; --k) {
            int pick = static_cast<int>(shuffle_rng.next_raw() % static_cast<std::uint64_t>(k + 1));
            s.x.row(k).swap(s.x.row(pick));
            std::swap(s.y[k], s.y[pick]);
        }
        auto bases = make_bases(cfg.model, cfg.basis, cfg.lvl);
        HogsResult hogs = run_hogs(s.x.topRows(cfg.n1()), bases, cfg.degeneracy_threshold);
        Dictionary dict(bases, hogs);
        std::filesystem::create_directories(cfg.out_dir);
        design_matrix_to_csv(dict.evaluate(s.x.bottomRows(cfg.n2())), dict,
                             cfg.out_dir + "/design.csv");
        write_text_file(cfg.out_dir + "/atoms.json", atoms_to_json(hogs.atoms));
    }
    if (!cfg.out_dir.empty()) detail::write_report_files(cfg, rep);
    return rep;
}

struct ConvergencePoint {
    int n = 0;
    double hogs_err_median = 0.0;
    double pred_err_median = 0.0;
};

/// Consistency experiment: for each n, the median (over seeds) of the
/// worst-atom coefficient distance to a large-sample proxy truth, and of the
/// out-of-sample prediction error of the fitted decomposition against the
/// noiseless model on a fresh sample.
inline std::vector<ConvergencePoint> convergence_study(const ExperimentConfig& cfg,
                                                       const std::vector<int>& n_list,
                                                       int ref_mult = 16,
                                                       int eval_n = 10000) {
    if (n_list.empty()) throw ConfigError("convergence_study: empty n list");
    for (std::size_t k = 1; k < n_list.size(); ++k)
        if (n_list[k] <= n_list[k - 1])
            throw ConfigError("convergence_study: n list must be increasing");
    if (cfg.model.kind == ModelKind::Dataset)
        throw ConfigError("convergence_study: dataset models have no reference truth");
    {
        ExperimentConfig probe = cfg;
        probe.n = n_list.front();
        probe.validate();
    }

    const int n_ref = ref_mult * n_list.back();
    const int kinds = static_cast<int>(n_list.size());
    auto bases = make_bases(cfg.model, cfg.basis, cfg.lvl);

    std::vector<std::vector<double>> err_hogs(kinds), err_pred(kinds);
    for (auto& v : err_hogs) v.resize(cfg.reps);
    for (auto& v : err_pred) v.resize(cfg.reps);

    detail::parallel_for(cfg.reps, cfg.jobs, [&](int r) {
        // Proxy truth from a large-sample construction.
        Sample ref = sample(cfg.model, n_ref, derive_seed(cfg.seed, 8ull * r));
        HogsResult ref_hogs = run_hogs(
            ref.x.topRows(static_cast<int>(std::lround(n_ref * cfg.split))), bases,
            cfg.degeneracy_threshold);
        std::map<std::tuple<int, int, int, int>, const SecondOrderAtom*> ref_atoms;
        for (const auto& a : ref_hogs.atoms)
            ref_atoms[{a.i, a.j, a.li, a.lj}] = &a;

        Sample eval = sample(cfg.model, eval_n, derive_seed(cfg.seed, 8ull * r + 7));
        Eigen::VectorXd truth(eval_n);
        for (int s = 0; s < eval_n; ++s) truth[s] = model_value(cfg.model, eval.x.row(s));

        for (int t = 0; t < kinds; ++t) {
            const int n = n_list[t];
            Sample s = sample(cfg.model, n, derive_seed(cfg.seed, 8ull * r + 1 + t));
            const int n1 = static_cast<int>(std::lround(n * cfg.split));
            HogsResult hogs = run_hogs(s.x.topRows(n1), bases, cfg.degeneracy_threshold);

            double worst = 0.0;
            for (const auto& a : hogs.atoms) {
                auto it = ref_atoms.find({a.i, a.j, a.li, a.lj});
                if (it == ref_atoms.end()) continue;
                const SecondOrderAtom& b = *it->second;
                double err = std::sqrt((a.lambda_i - b.lambda_i).squaredNorm() +
                                       (a.lambda_j - b.lambda_j).squaredNorm()) +
                             std::abs(a.c - b.c);
                worst = std::max(worst, err);
            }
            err_hogs[t][r] = worst;

            Dictionary dict(bases, hogs);
            DesignMatrix design = dict.evaluate(s.x.bottomRows(n - n1));
            Eigen::VectorXd y2 = s.y.tail(n - n1);
            ExperimentConfig sub = cfg;
            sub.n = n;
            FitResult fit;
            switch (cfg.selector) {
                case Selector::Boost: fit = boost_fit(design, y2, detail::effective_boost(sub)); break;
                case Selector::Foba: fit = foba_fit(design, y2, cfg.foba_eps, cfg.foba_delta); break;
                case Selector::Lasso:
                    fit = lasso_fit(design, y2,
                                    lasso_default_grid(design, y2, cfg.lasso_grid,
                                                       cfg.lasso_min_ratio));
                    break;
            }
            Eigen::VectorXd fhat = Eigen::VectorXd::Constant(eval_n, fit.intercept);
            for (const auto& [index, coef] : fit.beta)
                fhat += coef * dict.eval_column(dict.atom(index), eval.x);
            err_pred[t][r] = std::sqrt((fhat - truth).squaredNorm() / double(eval_n));
        }
    });

    std::vector<ConvergencePoint> out;
    for (int t = 0; t < kinds; ++t)
        out.push_back({n_list[t], median(err_hogs[t]), median(err_pred[t])});

    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        CsvWriter csv;
        csv.header({"n", "hogs_err_median", "pred_err_median"});
        for (const auto& pt : out)
            csv.row_strings({std::to_string(pt.n), format_double(pt.hogs_err_median),
                             format_double(pt.pred_err_median)});
        csv.save(cfg.out_dir + "/convergence.csv");
    }
    return out;
}

}  // namespace hofd
