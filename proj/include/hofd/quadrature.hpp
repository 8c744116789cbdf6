#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>

namespace hofd {

struct QuadratureRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

namespace detail {

/// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix of the
/// three-term recurrence, weights are mu0 * (first eigenvector component)^2.
inline QuadratureRule golub_welsch(const Eigen::VectorXd& offdiag, double mu0) {
    const int n = static_cast<int>(offdiag.size()) + 1;
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k + 1 < n; ++k) {
        jacobi(k, k + 1) = offdiag[k];
        jacobi(k + 1, k) = offdiag[k];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
    QuadratureRule rule;
    rule.nodes = es.eigenvalues();
    rule.weights.resize(n);
    for (int k = 0; k < n; ++k) {
        double v = es.eigenvectors()(0, k);
        rule.weights[k] = mu0 * v * v;
    }
    return rule;
}

}  // namespace detail

/// n-point Gauss-Legendre rule on [-1, 1] (weight function 1, sum w = 2).
inline const QuadratureRule& gauss_legendre(int n) {
    static std::map<int, QuadratureRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    Eigen::VectorXd b(n - 1);
    for (int k = 1; k < n; ++k)
        b[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
    return cache.emplace(n, detail::golub_welsch(b, 2.0)).first->second;
}

/// n-point Gauss-Hermite rule for weight exp(-x^2) (sum w = sqrt(pi)).
inline const QuadratureRule& gauss_hermite(int n) {
    static std::map<int, QuadratureRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    Eigen::VectorXd b(n - 1);
    for (int k = 1; k < n; ++k)
        b[k - 1] = std::sqrt(k / 2.0);
    return cache.emplace(n, detail::golub_welsch(b, std::sqrt(M_PI))).first->second;
}

}  // namespace hofd
