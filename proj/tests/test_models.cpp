#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "hofd/models.hpp"
#include "hofd/sensitivity.hpp"

using namespace hofd;

TEST_CASE("model values at hand points") {
    ModelSpec ishi = ModelSpec::ishigami(7.0, 0.1);
    Eigen::Vector3d zero(0.0, 0.0, 0.0);
    CHECK(model_value(ishi, zero) == Catch::Approx(0.0).margin(1e-15));
    Eigen::Vector3d p(M_PI / 2, M_PI / 2, 0.0);
    CHECK(model_value(ishi, p) == Catch::Approx(8.0).epsilon(1e-12));

    ModelSpec gs = ModelSpec::gsobol_default(10);
    Eigen::VectorXd x = Eigen::VectorXd::Constant(10, 0.3);
    x[0] = 0.5;  // the a_1 = 0 factor vanishes at 0.5
    CHECK(model_value(gs, x) == Catch::Approx(0.0).margin(1e-15));
    CHECK(gs.gsobol_a[3] == 9.0);
    CHECK(gs.gsobol_a[9] == 99.0);
}

TEST_CASE("ishigami closed form validated against the brute-force oracle") {
    IshigamiIndices idx = ishigami_analytical_indices(7.0, 0.1);
    CHECK(idx.s1 == Catch::Approx(0.3139).margin(5e-5));
    CHECK(idx.s2 == Catch::Approx(0.4424).margin(5e-5));
    CHECK(idx.s13 == Catch::Approx(0.2437).margin(5e-5));
    CHECK(idx.s3 == 0.0);
    CHECK(idx.s1 + idx.s2 + idx.s3 + idx.s13 == Catch::Approx(1.0).epsilon(1e-12));

    ModelSpec ishi = ModelSpec::ishigami(7.0, 0.1);
    double s1_mc = mc_sensitivity_oracle(ishi, {0}, 10000000, 5);
    double s2_mc = mc_sensitivity_oracle(ishi, {1}, 10000000, 6);
    double s3_mc = mc_sensitivity_oracle(ishi, {2}, 10000000, 7);
    CHECK(std::abs(s1_mc - idx.s1) < 1e-3);
    CHECK(std::abs(s2_mc - idx.s2) < 1e-3);
    CHECK(std::abs(s3_mc - idx.s3) < 1e-3);

    IshigamiIndices flat = ishigami_analytical_indices(7.0, 0.0);
    CHECK(flat.s13 == 0.0);
    CHECK(flat.s2 == Catch::Approx((49.0 / 8.0) / (0.5 + 49.0 / 8.0)).epsilon(1e-12));
    IshigamiIndices pure = ishigami_analytical_indices(0.0, 0.0);
    CHECK(pure.s1 == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("oracle self-consistency") {
    ModelSpec gs = ModelSpec::gsobol_default(10);
    double s1 = mc_sensitivity_oracle(gs, {0}, 1000000, 11);
    CHECK(s1 == Catch::Approx(0.716).margin(5e-3));
    CHECK(s1 == Catch::Approx(gsobol_analytical(gs.gsobol_a, {0})).margin(5e-3));

    // two equally weak factors: symmetry pins both first-order shares at 1/2
    ModelSpec sym = ModelSpec::gsobol({99.0, 99.0});
    CHECK(mc_sensitivity_oracle(sym, {0}, 200000, 13) == Catch::Approx(0.5).margin(0.01));
    CHECK(mc_sensitivity_oracle(sym, {1}, 200000, 14) == Catch::Approx(0.5).margin(0.01));

    ModelSpec dep = ModelSpec::ishigami();
    dep.set_equicorrelation(0.5);
    CHECK_THROWS_AS(mc_sensitivity_oracle(dep, {0}, 1000, 1), DependentInputsUnsupported);
}

TEST_CASE("copula marginals and correlation") {
    ModelSpec spec = ModelSpec::gsobol({1.0, 1.0, 1.0});
    spec.set_equicorrelation(0.85);
    const int n = 10000;
    Sample s = sample(spec, n, 31);

    // Kolmogorov-Smirnov distance of each marginal to U[0,1]
    for (int c = 0; c < 3; ++c) {
        std::vector<double> v(n);
        for (int r = 0; r < n; ++r) v[r] = s.x(r, c);
        std::sort(v.begin(), v.end());
        double ks = 0.0;
        for (int r = 0; r < n; ++r) {
            ks = std::max(ks, std::abs(v[r] - double(r + 1) / n));
            ks = std::max(ks, std::abs(v[r] - double(r) / n));
        }
        CHECK(ks <= 0.02);
    }

    // Pearson correlation of the copula uniforms vs (6/pi) asin(rho/2)
    double target = 6.0 / M_PI * std::asin(0.85 / 2.0);
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
            Eigen::VectorXd ca = s.x.col(a).array() - s.x.col(a).mean();
            Eigen::VectorXd cb = s.x.col(b).array() - s.x.col(b).mean();
            double corr = ca.dot(cb) / std::sqrt(ca.squaredNorm() * cb.squaredNorm());
            CHECK(std::abs(corr - target) <= 0.05);
        }
}

TEST_CASE("bad correlation matrices are rejected") {
    ModelSpec spec = ModelSpec::gsobol({1.0, 1.0, 1.0});
    CHECK_THROWS_AS(spec.set_equicorrelation(-0.9), BadCorrelation);
    spec.correlation = Eigen::MatrixXd::Constant(3, 3, 1.0);  // rank one
    CHECK_THROWS_AS(sample(spec, 10, 1), BadCorrelation);
}

TEST_CASE("sampling is reproducible and noise is controlled") {
    ModelSpec spec = ModelSpec::ishigami();
    Sample a = sample(spec, 200, 99);
    Sample b = sample(spec, 200, 99);
    CHECK((a.x - b.x).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.y - b.y).cwiseAbs().maxCoeff() == 0.0);
    Sample c = sample(spec, 200, 100);
    CHECK((a.x - c.x).cwiseAbs().maxCoeff() > 0.0);

    for (int r = 0; r < 200; ++r)
        CHECK(a.y[r] == Catch::Approx(model_value(spec, a.x.row(r))).margin(1e-14));

    spec.noise_sigma = 0.5;
    Sample noisy = sample(spec, 200, 99);
    double sd = std::sqrt((noisy.y - a.y).squaredNorm() / 200.0);
    CHECK(sd == Catch::Approx(0.5).margin(0.15));
}

TEST_CASE("datasets load, shuffle, and reject bad rows") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "hofd_models_test";
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "data.csv");
        out << "x1,x2,y\n";
        for (int r = 0; r < 25; ++r)
            out << 0.1 * r << "," << 0.2 * r << "," << r << "\n";
    }
    ModelSpec ds = ModelSpec::dataset((dir / "data.csv").string());
    CHECK(ds.dim() == 2);
    CHECK(ds.ranges[0].first == Catch::Approx(0.0));
    CHECK(ds.ranges[1].second == Catch::Approx(4.8));
    Sample s = sample(ds, 10, 3);
    CHECK(s.x.rows() == 10);
    Sample again = sample(ds, 10, 3);
    CHECK((s.x - again.x).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(sample(ds, 26, 3), InsufficientSample);
    CHECK_THROWS_AS(model_value(ds, Eigen::Vector2d(0, 0)), ConfigError);

    {
        std::ofstream out(dir / "bad.csv");
        out << "x1,y\n1.0,2.0\nnan,3.0\n";
    }
    CHECK_THROWS_AS(ModelSpec::dataset((dir / "bad.csv").string()), Error);
    {
        std::ofstream out(dir / "noheader.csv");
        out << "x1,x2\n1.0,2.0\n";
    }
    CHECK_THROWS_AS(ModelSpec::dataset((dir / "noheader.csv").string()), ConfigError);
    fs::remove_all(dir);
}
