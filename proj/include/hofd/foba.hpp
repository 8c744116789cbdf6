#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <set>
#include <vector>

#include "hofd/dictionary.hpp"
#include "hofd/errors.hpp"
#include "hofd/fit.hpp"

namespace hofd {

namespace detail {

/// Least squares over the active columns; returns false if the normal
/// equations are numerically singular.
inline bool refit_active(const Eigen::MatrixXd& gram, const Eigen::VectorXd& b,
                         Eigen::VectorXd& beta) {
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) return false;
    beta = llt.solve(b);
    return beta.allFinite();
}

}  // namespace detail

/// Forward-backward greedy selection. The forward step adds the atom whose
/// least-squares refit lowers RSS the most and stops once the best
/// improvement, in empirical (1/n2) norm, falls below eps. After every
/// forward step, active atoms whose removal costs less than delta times the
/// last forward improvement are deleted.
inline FitResult foba_fit(const DesignMatrix& design, const Eigen::VectorXd& y,
                          double eps = 1e-2, double delta = 0.5) {
    if (!(eps > 0.0)) throw ConfigError("foba_fit: eps must be > 0");
    if (!(delta > 0.0 && delta <= 1.0)) throw ConfigError("foba_fit: delta in (0,1]");
    const auto t0 = std::chrono::steady_clock::now();
    const int n2 = design.rows();
    const int m = design.cols();
    if (m == 0) throw EmptyDictionary("foba_fit: empty design");
    if (n2 < 2) throw InsufficientSample("foba_fit: n2 < 2");
    if (!y.allFinite() || !design.values.allFinite())
        throw NonFiniteInput("foba_fit: non-finite input");

    FitResult fit;
    fit.normalized_atoms = false;  // refits are scale-free
    fit.intercept = y.mean();
    const Eigen::VectorXd yc = y.array() - fit.intercept;

    const Eigen::VectorXd col_y = design.values.transpose() * yc;
    const Eigen::VectorXd col_sq = design.col_norms.array().square() * double(n2);

    std::vector<int> active;
    Eigen::MatrixXd gram(0, 0);
    Eigen::VectorXd b(0), beta(0);
    double rss = yc.squaredNorm();
    std::set<int> collinear_seen;

    const int max_active = std::min(n2 - 1, m);
    const int forward_cap = 4 * std::min(n2, m) + 16;
    int step = 0, forward_steps = 0;
    double last_gain = 0.0;  // empirical-norm scale

    auto grow = [&](int c, const Eigen::VectorXd& cross) {
        const int k = static_cast<int>(active.size());
        gram.conservativeResize(k + 1, k + 1);
        b.conservativeResize(k + 1);
        for (int t = 0; t < k; ++t) {
            gram(t, k) = cross[t];
            gram(k, t) = cross[t];
        }
        gram(k, k) = col_sq[c];
        b[k] = col_y[c];
        active.push_back(c);
    };
    auto shrink = [&](int pos) {
        const int k = static_cast<int>(active.size());
        for (int r = pos; r + 1 < k; ++r) {
            for (int cc = 0; cc < k; ++cc) gram(r, cc) = gram(r + 1, cc);
        }
        for (int cc = pos; cc + 1 < k; ++cc) {
            for (int r = 0; r + 1 < k; ++r) gram(r, cc) = gram(r, cc + 1);
        }
        for (int t = pos; t + 1 < k; ++t) b[t] = b[t + 1];
        gram.conservativeResize(k - 1, k - 1);
        b.conservativeResize(k - 1);
        active.erase(active.begin() + pos);
    };

    while (static_cast<int>(active.size()) < max_active) {
        if (++forward_steps > forward_cap)
            throw Error("foba_fit: iteration cap exceeded");

        // Forward: best RSS reduction over candidates via the Schur
        // complement of the active normal equations.
        int best = -1;
        double best_gain_ss = -1.0;
        Eigen::VectorXd best_cross;
        std::set<int> in_active(active.begin(), active.end());
        Eigen::LLT<Eigen::MatrixXd> active_llt;
        if (!active.empty()) active_llt.compute(gram);
        for (int c = 0; c < m; ++c) {
            if (in_active.count(c)) continue;
            Eigen::VectorXd cross(active.size());
            for (std::size_t t = 0; t < active.size(); ++t)
                cross[t] = design.values.col(active[t]).dot(design.values.col(c));
            double s = col_sq[c];
            double num = col_y[c];
            if (!active.empty()) {
                Eigen::VectorXd w = active_llt.solve(cross);
                s -= cross.dot(w);
                num -= cross.dot(beta);
            }
            if (!(s > 1e-12 * std::max(col_sq[c], 1e-300))) {
                if (collinear_seen.insert(c).second) ++fit.singular_drops;
                continue;
            }
            double gain_ss = num * num / s;
            if (gain_ss > best_gain_ss) {
                best_gain_ss = gain_ss;
                best = c;
                best_cross = cross;
            }
        }
        if (best < 0) break;
        double gain = best_gain_ss / double(n2);
        if (gain < eps) break;

        grow(best, best_cross);
        if (!detail::refit_active(gram, b, beta))
            throw SingularRefit("foba_fit: active-set refit singular after add");
        rss = std::max(0.0, yc.squaredNorm() - b.dot(beta));
        last_gain = gain;

        TraceRow row;
        row.step = ++step;
        row.atom = best;
        row.corr = gain;
        row.rss = rss;
        fit.trace.push_back(row);

        // Backward: delete atoms whose removal barely costs anything.
        while (active.size() > 1) {
            Eigen::MatrixXd inv =
                Eigen::LLT<Eigen::MatrixXd>(gram).solve(
                    Eigen::MatrixXd::Identity(gram.rows(), gram.cols()));
            int worst = -1;
            double worst_inc = std::numeric_limits<double>::infinity();
            for (std::size_t t = 0; t < active.size(); ++t) {
                double inc = beta[t] * beta[t] / inv(t, t) / double(n2);
                if (inc < worst_inc) {
                    worst_inc = inc;
                    worst = static_cast<int>(t);
                }
            }
            if (!(worst_inc < delta * last_gain)) break;
            int removed = active[worst];
            shrink(worst);
            if (!detail::refit_active(gram, b, beta))
                throw SingularRefit("foba_fit: active-set refit singular after removal");
            rss = std::max(0.0, yc.squaredNorm() - b.dot(beta));

            TraceRow rrow;
            rrow.step = ++step;
            rrow.atom = removed;
            rrow.corr = worst_inc;
            rrow.rss = rss;
            rrow.removal = true;
            fit.trace.push_back(rrow);
        }
    }

    for (std::size_t t = 0; t < active.size(); ++t) fit.beta[active[t]] = beta[t];
    fit.chosen_k = 0;
    for (const auto& row : fit.trace)
        if (!row.removal) ++fit.chosen_k;
    fit.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return fit;
}

}  // namespace hofd
