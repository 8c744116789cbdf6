#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "hofd/dictionary.hpp"
#include "hofd/errors.hpp"
#include "hofd/fit.hpp"

namespace hofd {

/// Input subset of a decomposition component: singleton {i} or pair {i,j},
/// 0-based, j = -1 for singletons. Ordered so reports are deterministic.
struct Subset {
    int i = 0;
    int j = -1;

    bool operator<(const Subset& o) const {
        if (i != o.i) return i < o.i;
        return j < o.j;
    }
    bool operator==(const Subset& o) const { return i == o.i && j == o.j; }

    bool contains(int v) const { return v == i || v == j; }

    /// True when neither subset contains the other (their covariance enters
    /// the sensitivity index).
    bool non_nested_with(const Subset& o) const {
        if (j < 0 && o.j < 0) return i != o.i;          // distinct singletons
        if (j < 0) return !o.contains(i);               // {i} vs pair
        if (o.j < 0) return !contains(o.i);             // pair vs {i}
        return !(*this == o);                           // distinct pairs
    }

    std::string label() const {  // 1-based, CSV-safe
        if (j < 0) return std::to_string(i + 1);
        return std::to_string(i + 1) + "-" + std::to_string(j + 1);
    }
};

using ComponentMap = std::map<Subset, Eigen::VectorXd>;

/// Per-subset component evaluations f_u(x^s) = sum of the subset's selected
/// atoms weighted by the fitted coefficients. Subsets with no selected atom
/// are omitted.
inline ComponentMap component_values(const FitResult& fit, const Dictionary& dict,
                                     const Eigen::Ref<const Eigen::MatrixXd>& x) {
    ComponentMap out;
    for (const auto& [index, coef] : fit.beta) {
        if (coef == 0.0) continue;
        const Atom& a = dict.atom(index);
        Subset u{a.i, a.order == 2 ? a.j : -1};
        Eigen::VectorXd col = coef * dict.eval_column(a, x);
        auto it = out.find(u);
        if (it == out.end())
            out.emplace(u, std::move(col));
        else
            it->second += col;
    }
    return out;
}

struct IndexEntry {
    Subset u;
    double var = 0.0;      // V(f_u)
    double cov_sum = 0.0;  // sum of Cov(f_u, f_v) over non-nested v
    double s = 0.0;        // sensitivity index
};

struct SensitivityReport {
    std::vector<IndexEntry> indices;  // ordered by subset
    double vy = 0.0;
    double residual_share = 0.0;

    double index_for(const Subset& u) const {
        for (const auto& e : indices)
            if (e.u == u) return e.s;
        return 0.0;
    }
};

/// Variance-based indices of the fitted decomposition, with the covariance
/// corrections that dependent inputs require:
///   S_u = [V(f_u) + sum_{v: u,v non-nested} Cov(f_u, f_v)] / V(y).
/// Empirical moments use the n-1 divisor. The residual share gathers the
/// noise variance, the fit/noise cross term and the nested-pair covariances,
/// so that sum_u S_u + residual_share = 1 identically.
inline SensitivityReport indices(const ComponentMap& components,
                                 const Eigen::VectorXd& y) {
    const Eigen::Index n = y.size();
    if (n < 2) throw InsufficientSample("indices: need at least 2 evaluations");
    for (const auto& kv : components)
        if (kv.second.size() != n)
            throw ConfigError("indices: component/sample size mismatch");

    SensitivityReport report;
    const Eigen::VectorXd y_c = y.array() - y.mean();
    report.vy = y_c.squaredNorm() / double(n - 1);
    if (report.vy < 1e-14) throw ZeroVariance("indices: V(y) below 1e-14");

    std::vector<Subset> keys;
    std::vector<Eigen::VectorXd> centered;
    for (const auto& [u, f] : components) {
        keys.push_back(u);
        centered.push_back(f.array() - f.mean());
    }
    const std::size_t q = keys.size();
    auto cov = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        return a.dot(b) / double(n - 1);
    };

    Eigen::VectorXd resid_c = y_c;
    for (const auto& f : centered) resid_c -= f;

    double nested_cov = 0.0, cross_cov = 0.0;
    for (std::size_t a = 0; a < q; ++a) {
        IndexEntry e;
        e.u = keys[a];
        e.var = cov(centered[a], centered[a]);
        for (std::size_t b = 0; b < q; ++b) {
            if (a == b) continue;
            double c_ab = cov(centered[a], centered[b]);
            if (keys[a].non_nested_with(keys[b]))
                e.cov_sum += c_ab;
            else
                nested_cov += c_ab;
        }
        cross_cov += cov(centered[a], resid_c);
        e.s = (e.var + e.cov_sum) / report.vy;
        report.indices.push_back(e);
    }
    double resid_var = cov(resid_c, resid_c);
    report.residual_share = (resid_var + 2.0 * cross_cov + nested_cov) / report.vy;
    return report;
}

/// Closed-form Sobol index of the g-function benchmark:
///   S_u = (1/D) prod_{i in u} D_i,  D_i = 1/(3 (1+a_i)^2),
///   D = prod_i (1 + D_i) - 1.
inline double gsobol_analytical(const std::vector<double>& a, const std::vector<int>& u) {
    if (a.empty()) throw ConfigError("gsobol_analytical: empty coefficient vector");
    double d_total = 1.0;
    for (double ai : a) {
        if (ai < 0.0) throw ConfigError("gsobol_analytical: coefficients must be >= 0");
        d_total *= 1.0 + 1.0 / (3.0 * (1.0 + ai) * (1.0 + ai));
    }
    d_total -= 1.0;
    double num = 1.0;
    for (int i : u) {
        if (i < 0 || i >= static_cast<int>(a.size()))
            throw IndexOutOfRange("gsobol_analytical: variable index out of range");
        num *= 1.0 / (3.0 * (1.0 + a[i]) * (1.0 + a[i]));
    }
    return num / d_total;
}

}  // namespace hofd
