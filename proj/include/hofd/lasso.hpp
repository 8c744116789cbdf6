#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <vector>

#include "hofd/dictionary.hpp"
#include "hofd/errors.hpp"
#include "hofd/fit.hpp"

namespace hofd {

inline double soft_threshold(double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

/// Geometric grid from lambda_max (the coefficient kill point
/// max_c |<y, col_c>_n| on unit-empirical-norm columns) down to
/// lambda_max * ratio_min.
inline std::vector<double> lasso_default_grid(const DesignMatrix& design,
                                              const Eigen::VectorXd& y,
                                              int count = 50, double ratio_min = 1e-3) {
    if (count < 2) throw ConfigError("lasso grid needs >= 2 points");
    const int n2 = design.rows();
    Eigen::VectorXd yc = y.array() - y.mean();
    double lmax = 0.0;
    for (int c = 0; c < design.cols(); ++c) {
        double norm = design.col_norms[c];
        if (norm <= 1e-154) continue;
        lmax = std::max(lmax, std::abs(design.values.col(c).dot(yc)) / (norm * n2));
    }
    if (lmax <= 0.0) lmax = 1.0;
    std::vector<double> grid(count);
    double rho = std::pow(ratio_min, 1.0 / (count - 1));
    double lam = lmax;
    for (int k = 0; k < count; ++k) {
        grid[k] = lam;
        lam *= rho;
    }
    return grid;
}

/// Coordinate-descent solutions of
///   min (1/(2 n2)) ||yc - X beta||^2 + lambda ||beta||_1
/// on unit-empirical-norm columns, warm-started along the grid. Returns one
/// coefficient vector per lambda, on the raw-atom scale.
inline std::vector<Eigen::VectorXd> lasso_path(const DesignMatrix& design,
                                               const Eigen::VectorXd& y,
                                               const std::vector<double>& grid,
                                               int max_sweeps = 100000,
                                               double tol = 1e-8) {
    const int n2 = design.rows();
    const int m = design.cols();
    if (m == 0) throw EmptyDictionary("lasso_path: empty design");
    if (n2 < 2) throw InsufficientSample("lasso_path: n2 < 2");
    if (!y.allFinite() || !design.values.allFinite())
        throw NonFiniteInput("lasso_path: non-finite input");
    if (grid.empty()) throw ConfigError("lasso_path: empty grid");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!(grid[k] > 0.0)) throw ConfigError("lasso_path: lambdas must be positive");
        if (k > 0 && !(grid[k] < grid[k - 1]))
            throw ConfigError("lasso_path: grid must be strictly decreasing");
    }

    Eigen::VectorXd yc = y.array() - y.mean();
    Eigen::MatrixXd cols(n2, m);
    std::vector<bool> live(m, true);
    for (int c = 0; c < m; ++c) {
        if (design.col_norms[c] > 1e-154) {
            cols.col(c) = design.values.col(c) / design.col_norms[c];
        } else {
            cols.col(c).setZero();
            live[c] = false;
        }
    }

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd resid = yc;
    std::vector<Eigen::VectorXd> path;
    path.reserve(grid.size());

    for (double lambda : grid) {
        int sweeps = 0;
        for (;;) {
            if (++sweeps > max_sweeps)
                throw NoConvergence("lasso_path: sweep limit at lambda = " +
                                    std::to_string(lambda));
            double max_change = 0.0;
            for (int c = 0; c < m; ++c) {
                if (!live[c]) continue;
                double old = beta[c];
                double rho = cols.col(c).dot(resid) / double(n2) + old;
                double next = soft_threshold(rho, lambda);
                if (next != old) {
                    resid.noalias() += (old - next) * cols.col(c);
                    beta[c] = next;
                    max_change = std::max(max_change, std::abs(next - old));
                }
            }
            if (max_change < tol) break;
        }
        Eigen::VectorXd raw = beta;
        for (int c = 0; c < m; ++c)
            raw[c] = live[c] ? beta[c] / design.col_norms[c] : 0.0;
        path.push_back(std::move(raw));
    }
    return path;
}

/// Lasso with the grid-index criterion E_k = ||y - X beta(lambda_k)||_n2^2
/// - n2 + 2k (empirical norm), argmin over the grid, ties to the smallest k.
inline FitResult lasso_fit(const DesignMatrix& design, const Eigen::VectorXd& y,
                           const std::vector<double>& grid) {
    const auto t0 = std::chrono::steady_clock::now();
    const int n2 = design.rows();
    auto path = lasso_path(design, y, grid);

    FitResult fit;
    fit.intercept = y.mean();
    Eigen::VectorXd yc = y.array() - fit.intercept;

    int best_k = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < path.size(); ++k) {
        double rss = (yc - design.values * path[k]).squaredNorm();
        double e = rss / double(n2) - n2 + 2.0 * (k + 1);
        TraceRow row;
        row.step = static_cast<int>(k) + 1;
        row.atom = -1;
        row.corr = grid[k];
        row.rss = rss;
        row.cp = e;
        fit.trace.push_back(row);
        if (e < best) {
            best = e;
            best_k = static_cast<int>(k);
        }
    }
    fit.chosen_k = best_k + 1;
    for (int c = 0; c < design.cols(); ++c)
        if (path[best_k][c] != 0.0) fit.beta[c] = path[best_k][c];
    fit.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return fit;
}

}  // namespace hofd
