#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <vector>

#include "hofd/dictionary.hpp"
#include "hofd/errors.hpp"
#include "hofd/fit.hpp"

namespace hofd {

/// Iteration where the standardized-Cp variance estimate is anchored:
/// RSS_{K*}/(n2 - K*) with K* = min(trace length, floor(n2/4)), so the
/// estimate keeps at least 3n2/4 residual degrees of freedom even when the
/// iteration budget exceeds the sample size.
inline int cp_sigma_anchor(int trace_len, int n2) {
    int k = n2 / 4;
    if (k < 1) k = 1;
    if (k > trace_len) k = trace_len;
    return k;
}

/// Mallows-Cp stopping index over a boosting trace (ties to the smallest k).
/// Standardized: E_k = RSS_k / sigma2 - n2 + 2k, sigma2 anchored as above.
/// PaperLiteral: E_k = RSS_k / n2 - n2 + 2k.
inline int cp_boost(const std::vector<TraceRow>& trace, int n2,
                    CpMode mode = CpMode::Standardized) {
    if (trace.empty()) throw ConfigError("cp_boost: empty trace");
    const int len = static_cast<int>(trace.size());
    double sigma2 = 1.0;
    if (mode == CpMode::Standardized) {
        int anchor = cp_sigma_anchor(len, n2);
        sigma2 = trace[anchor - 1].rss / double(n2 - anchor);
        if (!(sigma2 > 1e-300)) sigma2 = 1e-300;
    }
    int best_k = 1;
    double best = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= len; ++k) {
        double e = (mode == CpMode::Standardized)
                       ? trace[k - 1].rss / sigma2 - n2 + 2.0 * k
                       : trace[k - 1].rss / double(n2) - n2 + 2.0 * k;
        if (e < best) {  // strict: ties keep the smallest k
            best = e;
            best_k = k;
        }
    }
    return best_k;
}

/// Fills the cp column of a trace for reporting.
inline void annotate_cp(std::vector<TraceRow>& trace, int n2, CpMode mode) {
    if (trace.empty()) return;
    double sigma2 = 1.0;
    if (mode == CpMode::Standardized) {
        int anchor = cp_sigma_anchor(static_cast<int>(trace.size()), n2);
        sigma2 = trace[anchor - 1].rss / double(n2 - anchor);
        if (!(sigma2 > 1e-300)) sigma2 = 1e-300;
    }
    for (auto& row : trace)
        row.cp = (mode == CpMode::Standardized)
                     ? row.rss / sigma2 - n2 + 2.0 * row.step
                     : row.rss / double(n2) - n2 + 2.0 * row.step;
}

/// L2-boosting over the dictionary columns. y is centered by its empirical
/// mean (kept as the intercept); columns are rescaled to unit empirical norm
/// for the run and coefficients mapped back to the raw atoms at the end. At
/// each step the atom with the largest |<residual, atom>_n2| is selected
/// (ties to the lowest canonical index) and the coefficient advanced by
/// gamma times the projection.
inline FitResult boost_fit(const DesignMatrix& design, const Eigen::VectorXd& y,
                           const BoostConfig& cfg) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const int n2 = design.rows();
    const int m = design.cols();
    if (m == 0) throw EmptyDictionary("boost_fit: empty design");
    if (n2 < 2) throw InsufficientSample("boost_fit: n2 < 2");
    if (y.size() != n2) throw ConfigError("boost_fit: y size mismatch");
    if (!y.allFinite() || !design.values.allFinite())
        throw NonFiniteInput("boost_fit: non-finite input");

    FitResult fit;
    fit.intercept = y.mean();
    Eigen::VectorXd resid = y.array() - fit.intercept;

    // Unit empirical norm columns; zero-norm columns can never be selected.
    Eigen::VectorXd scale = design.col_norms;
    Eigen::MatrixXd cols(n2, m);
    std::vector<bool> selectable(m, true);
    for (int c = 0; c < m; ++c) {
        if (scale[c] > 1e-154) {
            cols.col(c) = design.values.col(c) / scale[c];
        } else {
            cols.col(c).setZero();
            selectable[c] = false;
        }
    }

    // rss by recursion so the trace is non-increasing by construction:
    // ||r - w c||_n^2 = ||r||_n^2 - gamma(2-gamma) corr^2 with ||c||_n = 1.
    double rss = resid.squaredNorm();
    std::vector<std::pair<int, double>> increments;
    increments.reserve(cfg.k_max);
    fit.trace.reserve(cfg.k_max);

    for (int k = 1; k <= cfg.k_max; ++k) {
        Eigen::VectorXd corr = (cols.transpose() * resid) / double(n2);
        int best = -1;
        double best_abs = -1.0;
        for (int c = 0; c < m; ++c) {
            if (!selectable[c]) continue;
            double a = std::abs(corr[c]);
            if (a > best_abs) {
                best_abs = a;
                best = c;
            }
        }
        if (best < 0 || best_abs == 0.0) break;  // nothing left to fit

        double w = cfg.gamma * corr[best];
        resid.noalias() -= w * cols.col(best);
        increments.emplace_back(best, w);
        rss -= double(n2) * cfg.gamma * (2.0 - cfg.gamma) * corr[best] * corr[best];
        if (rss < 0.0) rss = 0.0;

        TraceRow row;
        row.step = k;
        row.atom = best;
        row.corr = corr[best];
        row.rss = rss;
        fit.trace.push_back(row);
        if (rss == 0.0) break;
    }

    if (fit.trace.empty()) {
        fit.chosen_k = 0;
        fit.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return fit;
    }

    annotate_cp(fit.trace, n2, cfg.cp_mode);
    fit.chosen_k = (cfg.stopping == StoppingRule::MallowsCp)
                       ? cp_boost(fit.trace, n2, cfg.cp_mode)
                       : static_cast<int>(fit.trace.size());

    for (int k = 0; k < fit.chosen_k; ++k) {
        const auto& [c, w] = increments[k];
        fit.beta[c] += w / scale[c];
    }
    fit.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return fit;
}

}  // namespace hofd
