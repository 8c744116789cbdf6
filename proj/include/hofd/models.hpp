#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "hofd/errors.hpp"
#include "hofd/io.hpp"
#include "hofd/rng.hpp"

namespace hofd {

enum class ModelKind { Ishigami, GSobol, Dataset };

/// A benchmark model plus its input law: independent uniforms on per-variable
/// ranges, or a Gaussian copula (correlation matrix) with uniform marginals.
/// Dataset models wrap an externally supplied (X, y) table.
struct ModelSpec {
    ModelKind kind = ModelKind::Ishigami;
    double ishigami_a = 7.0;
    double ishigami_b = 0.1;
    std::vector<double> gsobol_a;
    std::vector<std::pair<double, double>> ranges;  // per-variable support
    Eigen::MatrixXd correlation;                    // empty => independent
    double noise_sigma = 0.0;
    std::string dataset_path;
    Eigen::MatrixXd dataset_x;  // loaded rows for Dataset models
    Eigen::VectorXd dataset_y;

    static ModelSpec ishigami(double a = 7.0, double b = 0.1) {
        ModelSpec s;
        s.kind = ModelKind::Ishigami;
        s.ishigami_a = a;
        s.ishigami_b = b;
        s.ranges.assign(3, {-M_PI, M_PI});
        return s;
    }

    static ModelSpec gsobol(std::vector<double> a) {
        if (a.empty()) throw ConfigError("gsobol model: empty coefficient vector");
        for (double ai : a)
            if (ai < 0.0) throw ConfigError("gsobol model: coefficients must be >= 0");
        ModelSpec s;
        s.kind = ModelKind::GSobol;
        s.gsobol_a = std::move(a);
        s.ranges.assign(s.gsobol_a.size(), {0.0, 1.0});
        return s;
    }

    /// g-Sobol with the standard stress coefficients (0,1,4.5,9,99,...,99).
    static ModelSpec gsobol_default(int p = 10) {
        std::vector<double> a{0.0, 1.0, 4.5, 9.0};
        while (static_cast<int>(a.size()) < p) a.push_back(99.0);
        a.resize(p);
        return gsobol(std::move(a));
    }

    /// Loads a CSV dataset with header x1,...,xp,y.
    static ModelSpec dataset(const std::string& path) {
        CsvTable table = read_csv(path);
        if (table.header.empty() || table.header.back() != "y")
            throw ConfigError("dataset: expected header x1,...,xp,y");
        const int p = static_cast<int>(table.header.size()) - 1;
        if (p < 1) throw ConfigError("dataset: no input columns");
        if (table.rows.empty()) throw ConfigError("dataset: no rows");
        ModelSpec s;
        s.kind = ModelKind::Dataset;
        s.dataset_path = path;
        s.dataset_x.resize(table.rows.size(), p);
        s.dataset_y.resize(table.rows.size());
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            for (int c = 0; c < p; ++c) s.dataset_x(r, c) = table.rows[r][c];
            s.dataset_y[r] = table.rows[r][p];
        }
        for (int c = 0; c < p; ++c)
            s.ranges.emplace_back(s.dataset_x.col(c).minCoeff(), s.dataset_x.col(c).maxCoeff());
        return s;
    }

    int dim() const {
        switch (kind) {
            case ModelKind::Ishigami: return 3;
            case ModelKind::GSobol: return static_cast<int>(gsobol_a.size());
            default: return static_cast<int>(dataset_x.cols());
        }
    }

    bool independent_inputs() const { return correlation.size() == 0; }

    /// Equicorrelated Gaussian copula over all input pairs.
    void set_equicorrelation(double rho) {
        const int p = dim();
        if (rho == 0.0) {
            correlation.resize(0, 0);
            return;
        }
        if (!(rho > -1.0 / (p - 1) && rho < 1.0))
            throw BadCorrelation("equicorrelation rho out of the SPD range");
        correlation = Eigen::MatrixXd::Constant(p, p, rho);
        correlation.diagonal().setOnes();
    }
};

/// Noiseless model value at one input point.
inline double model_value(const ModelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x) {
    switch (spec.kind) {
        case ModelKind::Ishigami: {
            double s1 = std::sin(x[0]);
            return s1 + spec.ishigami_a * std::sin(x[1]) * std::sin(x[1]) +
                   spec.ishigami_b * x[2] * x[2] * x[2] * x[2] * s1;
        }
        case ModelKind::GSobol: {
            double prod = 1.0;
            for (std::size_t i = 0; i < spec.gsobol_a.size(); ++i)
                prod *= (std::abs(4.0 * x[i] - 2.0) + spec.gsobol_a[i]) / (1.0 + spec.gsobol_a[i]);
            return prod;
        }
        default:
            throw ConfigError("model_value: dataset models have no analytic form");
    }
}

struct Sample {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
};

namespace detail {

inline Eigen::MatrixXd draw_uniform_inputs(const ModelSpec& spec, int n, Rng& rng) {
    const int p = spec.dim();
    Eigen::MatrixXd x(n, p);
    if (spec.independent_inputs()) {
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < p; ++c) {
                const auto& [a, b] = spec.ranges[c];
                x(r, c) = rng.uniform(a, b);
            }
        return x;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(spec.correlation);
    if (llt.info() != Eigen::Success)
        throw BadCorrelation("correlation matrix is not positive definite");
    const Eigen::MatrixXd chol = llt.matrixL();
    Eigen::VectorXd z(p);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < p; ++c) z[c] = rng.normal();
        Eigen::VectorXd g = chol * z;
        for (int c = 0; c < p; ++c) {
            const auto& [a, b] = spec.ranges[c];
            x(r, c) = a + (b - a) * normal_cdf(g[c]);
        }
    }
    return x;
}

}  // namespace detail

/// Draws (X, y) with y = f(X) + noise. Deterministic given the seed.
/// Dataset models return a seeded row permutation truncated to n.
inline Sample sample(const ModelSpec& spec, int n, std::uint64_t seed) {
    if (n < 1) throw ConfigError("sample: n must be >= 1");
    Rng rng(seed);
    Sample out;
    if (spec.kind == ModelKind::Dataset) {
        const int rows = static_cast<int>(spec.dataset_x.rows());
        if (n > rows)
            throw InsufficientSample("sample: dataset has " + std::to_string(rows) +
                                     " rows, requested " + std::to_string(n));
        std::vector<int> order(rows);
        std::iota(order.begin(), order.end(), 0);
        for (int k = rows - 1; k > 0; --k) {  // Fisher-Yates on the raw stream
            int pick = static_cast<int>(rng.next_raw() % static_cast<std::uint64_t>(k + 1));
            std::swap(order[k], order[pick]);
        }
        out.x.resize(n, spec.dataset_x.cols());
        out.y.resize(n);
        for (int r = 0; r < n; ++r) {
            out.x.row(r) = spec.dataset_x.row(order[r]);
            out.y[r] = spec.dataset_y[order[r]];
        }
        return out;
    }
    out.x = detail::draw_uniform_inputs(spec, n, rng);
    out.y.resize(n);
    for (int r = 0; r < n; ++r) out.y[r] = model_value(spec, out.x.row(r));
    if (spec.noise_sigma > 0.0)
        for (int r = 0; r < n; ++r) out.y[r] += spec.noise_sigma * rng.normal();
    return out;
}

struct IshigamiIndices {
    double s1 = 0.0, s2 = 0.0, s3 = 0.0, s13 = 0.0;
};

/// Closed-form first-order and interaction indices of the Ishigami model on
/// independent U[-pi,pi]^3 inputs.
inline IshigamiIndices ishigami_analytical_indices(double a, double b) {
    const double pi4 = M_PI * M_PI * M_PI * M_PI;
    const double pi8 = pi4 * pi4;
    double v1 = (1.0 + b * pi4 / 5.0) * (1.0 + b * pi4 / 5.0) / 2.0;
    double v2 = a * a / 8.0;
    double v13 = 8.0 * b * b * pi8 / 225.0;
    double v = v1 + v2 + v13;
    IshigamiIndices out;
    out.s1 = v1 / v;
    out.s2 = v2 / v;
    out.s3 = 0.0;
    out.s13 = v13 / v;
    return out;
}

/// Brute-force closed Sobol index V(E[f | X_u]) / V(f) by double-loop
/// conditional expectation, for independent inputs only. For singletons this
/// is the classical first-order index. Test oracle, not a production path.
inline double mc_sensitivity_oracle(const ModelSpec& spec, const std::vector<int>& u,
                                    long long n_mc, std::uint64_t seed) {
    if (!spec.independent_inputs())
        throw DependentInputsUnsupported("mc_sensitivity_oracle: independent inputs only");
    if (spec.kind == ModelKind::Dataset)
        throw ConfigError("mc_sensitivity_oracle: dataset models unsupported");
    const int p = spec.dim();
    for (int v : u)
        if (v < 0 || v >= p) throw IndexOutOfRange("mc_sensitivity_oracle: bad subset");

    // Small inner loop with explicit bias correction; the outer loop carries
    // the estimator variance, so it gets the bulk of the budget.
    const long long n_in = std::max(2LL, std::min(32LL, n_mc / 64));
    const long long n_out = std::max(2LL, n_mc / n_in);
    Rng rng(seed);
    Eigen::VectorXd x(p);

    // Conditional means with the inner-loop noise bias removed:
    // V(E[f|X_u]) ~ Var_out(mean_in) - mean_out(var_in) / n_in.
    double sum_m = 0.0, sum_m2 = 0.0, sum_v = 0.0;
    double sum_f = 0.0, sum_f2 = 0.0;
    for (long long o = 0; o < n_out; ++o) {
        for (int v : u) {
            const auto& [a, b] = spec.ranges[v];
            x[v] = rng.uniform(a, b);
        }
        double acc = 0.0, acc2 = 0.0;
        for (long long i = 0; i < n_in; ++i) {
            for (int c = 0; c < p; ++c) {
                if (std::find(u.begin(), u.end(), c) != u.end()) continue;
                const auto& [a, b] = spec.ranges[c];
                x[c] = rng.uniform(a, b);
            }
            double f = model_value(spec, x);
            acc += f;
            acc2 += f * f;
            sum_f += f;
            sum_f2 += f * f;
        }
        double mean_in = acc / n_in;
        double var_in = (acc2 - n_in * mean_in * mean_in) / double(n_in - 1);
        sum_m += mean_in;
        sum_m2 += mean_in * mean_in;
        sum_v += var_in;
    }
    const double n_tot = double(n_out) * double(n_in);
    double mean_m = sum_m / n_out;
    double var_cond = (sum_m2 - n_out * mean_m * mean_m) / double(n_out - 1) -
                      (sum_v / n_out) / double(n_in);
    double mean_f = sum_f / n_tot;
    double var_f = (sum_f2 - n_tot * mean_f * mean_f) / (n_tot - 1.0);
    if (var_f <= 0.0) throw ZeroVariance("mc_sensitivity_oracle: flat model");
    return var_cond / var_f;
}

}  // namespace hofd
