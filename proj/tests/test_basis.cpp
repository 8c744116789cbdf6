#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>

#include "hofd/basis.hpp"
#include "hofd/quadrature.hpp"

using namespace hofd;

namespace {

// Independent oracle: orthonormalize the monomials 1, x, x^2, ... on [-1,1]
// under the uniform density by Gram-Schmidt with quadrature inner products,
// then evaluate the resulting polynomials at a point.
double monomial_gs_oracle(int level, double x) {
    const QuadratureRule& rule = gauss_legendre(128);
    auto inner = [&](const std::vector<double>& c1, const std::vector<double>& c2) {
        double acc = 0.0;
        for (int q = 0; q < rule.nodes.size(); ++q) {
            double t = rule.nodes[q];
            double v1 = 0.0, v2 = 0.0, tp = 1.0;
            for (std::size_t k = 0; k < std::max(c1.size(), c2.size()); ++k) {
                if (k < c1.size()) v1 += c1[k] * tp;
                if (k < c2.size()) v2 += c2[k] * tp;
                tp *= t;
            }
            acc += 0.5 * rule.weights[q] * v1 * v2;  // uniform density on [-1,1]
        }
        return acc;
    };
    std::vector<std::vector<double>> ortho;
    for (int deg = 0; deg <= level; ++deg) {
        std::vector<double> mono(deg + 1, 0.0);
        mono[deg] = 1.0;
        for (const auto& prev : ortho) {
            double proj = inner(mono, prev);
            for (std::size_t k = 0; k < prev.size(); ++k) mono[k] -= proj * prev[k];
        }
        double norm = std::sqrt(inner(mono, mono));
        for (auto& c : mono) c /= norm;
        ortho.push_back(mono);
    }
    double v = 0.0, tp = 1.0;
    for (double c : ortho[level]) {
        v += c * tp;
        tp *= x;
    }
    return v;
}

}  // namespace

TEST_CASE("legendre values match the monomial orthonormalization oracle") {
    auto sys = BasisSystem::legendre(-1.0, 1.0, 6);
    CHECK(sys.eval(1, 0.5) == Catch::Approx(0.8660254037844386).epsilon(1e-12));
    CHECK(sys.eval(1, 0.5) == Catch::Approx(std::sqrt(3.0) * 0.5).epsilon(1e-14));
    for (int l = 0; l <= 6; ++l)
        for (double x : {-0.9, -0.3, 0.0, 0.5, 0.99}) {
            double oracle = monomial_gs_oracle(l, x);
            // Gram-Schmidt fixes functions up to sign
            CHECK(std::abs(sys.eval(l, x)) == Catch::Approx(std::abs(oracle)).margin(1e-9));
        }
}

TEST_CASE("constant function is index zero for every kind") {
    CHECK(BasisSystem::legendre(-2.0, 3.0, 4).eval(0, 1.7) == 1.0);
    CHECK(BasisSystem::fourier(-M_PI, M_PI, 8).eval(0, 0.3) == 1.0);
    CHECK(BasisSystem::hermite(1.0, 2.0, 5).eval(0, -10.0) == 1.0);
}

TEST_CASE("fourier values and ordering") {
    auto sys = BasisSystem::fourier(-M_PI, M_PI, 8);
    CHECK(sys.eval(1, M_PI / 2) == Catch::Approx(1.4142135623730951).epsilon(1e-12));
    // quadrature oracle: ||sqrt(2) sin x||^2 under U[-pi,pi] equals one
    const QuadratureRule& rule = gauss_legendre(256);
    double norm2 = 0.0;
    for (int q = 0; q < rule.nodes.size(); ++q) {
        double x = M_PI * rule.nodes[q];
        double v = std::sqrt(2.0) * std::sin(x);
        norm2 += 0.5 * rule.weights[q] * v * v;
    }
    CHECK(norm2 == Catch::Approx(1.0).epsilon(1e-12));
    // ordering: odd indices sine, even cosine, frequency (l+1)/2
    CHECK(sys.eval(2, 0.0) == Catch::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(sys.eval(3, M_PI / 4) == Catch::Approx(std::sqrt(2.0) * std::sin(M_PI / 2)).epsilon(1e-12));
    CHECK(sys.eval(8, 0.0) == Catch::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("gram matrices are identity under the declared marginals") {
    auto check_identity = [](const Eigen::MatrixXd& g, double tol) {
        Eigen::MatrixXd err = g - Eigen::MatrixXd::Identity(g.rows(), g.cols());
        CHECK(err.cwiseAbs().maxCoeff() < tol);
    };
    check_identity(BasisSystem::legendre(-1.0, 1.0, 3).gram_quadrature(), 1e-10);
    check_identity(BasisSystem::fourier(-M_PI, M_PI, 8).gram_quadrature(), 1e-10);
    check_identity(BasisSystem::hermite(0.0, 1.0, 5).gram_quadrature(), 1e-8);
    // shifted supports and parameters, up to L = 10
    check_identity(BasisSystem::legendre(-M_PI, M_PI, 10).gram_quadrature(), 1e-10);
    check_identity(BasisSystem::fourier(0.0, 1.0, 10).gram_quadrature(), 1e-10);
    check_identity(BasisSystem::legendre(2.0, 7.5, 10).gram_quadrature(), 1e-10);
    check_identity(BasisSystem::hermite(2.0, 3.0, 10).gram_quadrature(), 1e-8);
}

TEST_CASE("bounded kinds stay below their sup bounds") {
    const int lvl = 8;
    auto leg = BasisSystem::legendre(-2.0, 5.0, lvl);
    auto fou = BasisSystem::fourier(-2.0, 5.0, lvl);
    double max_leg = 0.0, max_fou = 0.0;
    for (int k = 0; k < 100000; ++k) {
        double x = -2.0 + 7.0 * k / 99999.0;
        for (int l = 1; l <= lvl; ++l) {
            max_leg = std::max(max_leg, std::abs(leg.eval(l, x)));
            max_fou = std::max(max_fou, std::abs(fou.eval(l, x)));
        }
    }
    CHECK(max_leg <= std::sqrt(2.0 * lvl + 1.0) + 1e-12);
    CHECK(max_fou <= std::sqrt(2.0) + 1e-12);
}

TEST_CASE("evaluation is pure") {
    auto sys = BasisSystem::hermite(0.3, 1.7, 9);
    for (double x : {-3.1, 0.0, 0.72, 41.0}) {
        double a = sys.eval(9, x);
        double b = sys.eval(9, x);
        CHECK(std::memcmp(&a, &b, sizeof a) == 0);
    }
}

TEST_CASE("index and support errors") {
    auto sys = BasisSystem::legendre(0.0, 1.0, 3);
    CHECK_THROWS_AS(sys.eval(4, 0.5), IndexOutOfRange);
    CHECK_THROWS_AS(sys.eval(-1, 0.5), IndexOutOfRange);
    CHECK_THROWS_AS(sys.eval(1, 1.5), OutOfSupport);
    CHECK_THROWS_AS(sys.eval(1, -0.1), OutOfSupport);

    auto clamped = BasisSystem::legendre(0.0, 1.0, 3, SupportPolicy::Clamp);
    CHECK(clamped.eval(1, 1.5) == clamped.eval(1, 1.0));
    CHECK(clamped.eval(2, -9.0) == clamped.eval(2, 0.0));

    auto herm = BasisSystem::hermite(0.0, 1.0, 3);
    CHECK_NOTHROW(herm.eval(3, 1e6));
    CHECK_THROWS_AS(BasisSystem::legendre(1.0, 1.0, 3), ConfigError);
    CHECK_THROWS_AS(BasisSystem::hermite(0.0, -1.0, 3), ConfigError);
}
