#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>

#include "hofd/dictionary.hpp"
#include "hofd/io.hpp"
#include "hofd/rng.hpp"

using namespace hofd;

namespace {

Eigen::MatrixXd uniform_sample(int n, int p, double a, double b, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd x(n, p);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < p; ++c) x(r, c) = rng.uniform(a, b);
    return x;
}

Dictionary build_dict(int p, int lvl, int n1, std::uint64_t seed,
                      std::vector<BasisSystem>* bases_out = nullptr,
                      Eigen::MatrixXd* x_out = nullptr) {
    std::vector<BasisSystem> bases(p, BasisSystem::legendre(-1.0, 1.0, lvl));
    Eigen::MatrixXd x = uniform_sample(n1, p, -1.0, 1.0, seed);
    HogsResult hogs = run_hogs(x, bases);
    if (bases_out) *bases_out = bases;
    if (x_out) *x_out = x;
    return Dictionary(bases, hogs);
}

}  // namespace

TEST_CASE("predictor counts follow pL + C(p,2) L^2") {
    CHECK(dictionary_size(3, 8) == 216);
    CHECK(dictionary_size(10, 5) == 1175);
    CHECK(dictionary_size(1, 3) == 3);

    Dictionary d38 = build_dict(3, 8, 200, 1);
    CHECK(d38.size() == 216);
    CHECK(d38.skipped_pairs().empty());

    Dictionary d13 = build_dict(1, 3, 50, 1);
    CHECK(d13.size() == 3);
    for (const auto& a : d13.atoms()) CHECK(a.order == 1);
}

TEST_CASE("canonical ordering is stable and total") {
    Dictionary d1 = build_dict(3, 2, 100, 9);
    Dictionary d2 = build_dict(3, 2, 100, 9);
    REQUIRE(d1.size() == d2.size());
    for (int c = 0; c < d1.size(); ++c) {
        CHECK(d1.atom(c).canonical_index == c);
        CHECK(d1.atom(c).name() == d2.atom(c).name());
    }
    // first-order block sorted by (i, l), then pairs by (i, j, li, lj)
    CHECK(d1.atom(0).name() == "u=(1);l=(1)");
    CHECK(d1.atom(1).name() == "u=(1);l=(2)");
    CHECK(d1.atom(2).name() == "u=(2);l=(1)");
    CHECK(d1.atom(6).name() == "u=(1,2);l=(1,1)");
    CHECK(d1.atom(7).name() == "u=(1,2);l=(1,2)");
    CHECK(d1.atom(8).name() == "u=(1,2);l=(2,1)");
    CHECK(d1.atom(10).name() == "u=(1,3);l=(1,1)");
}

TEST_CASE("evaluation matches the defining formulas") {
    std::vector<BasisSystem> bases;
    Eigen::MatrixXd x1;
    Dictionary dict = build_dict(2, 3, 120, 17, &bases, &x1);
    Eigen::MatrixXd xe = uniform_sample(40, 2, -1.0, 1.0, 99);
    DesignMatrix dm = dict.evaluate(xe);
    REQUIRE(dm.cols() == dict.size());
    REQUIRE(dm.rows() == 40);

    for (int c = 0; c < dict.size(); ++c) {
        const Atom& a = dict.atom(c);
        for (int r : {0, 7, 39}) {
            double expected;
            if (a.order == 1) {
                expected = bases[a.i].eval(a.li, xe(r, a.i));
            } else {
                expected = bases[a.i].eval(a.li, xe(r, a.i)) * bases[a.j].eval(a.lj, xe(r, a.j));
                for (int k = 1; k <= 3; ++k) {
                    expected += a.lambda_i[k - 1] * bases[a.i].eval(k, xe(r, a.i));
                    expected += a.lambda_j[k - 1] * bases[a.j].eval(k, xe(r, a.j));
                }
                expected += a.c;
            }
            CHECK(dm.values(r, c) == Catch::Approx(expected).margin(1e-13));
        }
    }
}

TEST_CASE("second-order columns inherit the construction constraints") {
    std::vector<BasisSystem> bases;
    Eigen::MatrixXd x1;
    Dictionary dict = build_dict(3, 4, 150, 23, &bases, &x1);
    DesignMatrix dm = dict.evaluate(x1);
    const int n1 = dm.rows();
    for (int c = 0; c < dict.size(); ++c) {
        const Atom& a = dict.atom(c);
        if (a.order == 1) continue;
        CHECK(std::abs(dm.col_means[c]) < 1e-8);
        for (int first = 0; first < dict.size(); ++first) {
            const Atom& f = dict.atom(first);
            if (f.order != 1 || (f.i != a.i && f.i != a.j)) continue;
            double ip = dm.values.col(first).dot(dm.values.col(c)) / n1;
            CHECK(std::abs(ip) < 1e-8);
        }
    }
}

TEST_CASE("second-order column means shrink with the sample") {
    // atoms built and probed at the same growing scale n
    const int n = 100000;
    std::vector<BasisSystem> bases;
    Eigen::MatrixXd x1;
    Dictionary dict = build_dict(2, 3, n, 31, &bases, &x1);
    Eigen::MatrixXd xe = uniform_sample(n, 2, -1.0, 1.0, 77);
    DesignMatrix dm = dict.evaluate(xe);
    for (int c = 0; c < dict.size(); ++c)
        if (dict.atom(c).order == 2)
            CHECK(std::abs(dm.col_means[c]) < 5.0 / std::sqrt(double(n)));
}

TEST_CASE("empty and mismatched inputs are rejected") {
    HogsResult empty;
    CHECK_THROWS_AS(Dictionary({}, empty), EmptyDictionary);
    Dictionary dict = build_dict(2, 2, 80, 2);
    Eigen::MatrixXd bad = uniform_sample(10, 3, -1.0, 1.0, 1);
    CHECK_THROWS_AS(dict.evaluate(bad), ConfigError);
    Eigen::MatrixXd outside = Eigen::MatrixXd::Constant(5, 2, 2.0);
    CHECK_THROWS_AS(dict.evaluate(outside), OutOfSupport);
}

TEST_CASE("design export and atom document round-trip") {
    namespace fs = std::filesystem;
    std::vector<BasisSystem> bases;
    Eigen::MatrixXd x1;
    Dictionary dict = build_dict(2, 2, 60, 4, &bases, &x1);
    DesignMatrix dm = dict.evaluate(x1.topRows(12));

    fs::path dir = fs::temp_directory_path() / "hofd_dict_test";
    fs::create_directories(dir);
    design_matrix_to_csv(dm, dict, (dir / "design.csv").string());
    CsvTable table = read_csv((dir / "design.csv").string());
    REQUIRE(static_cast<int>(table.header.size()) == dict.size());
    CHECK(table.header.front() == "u=(1);l=(1)");
    CHECK(table.header.back() == "u=(1,2);l=(2,2)");
    CHECK(table.rows.size() == 12u);
    CHECK(table.rows[3][2] == dm.values(3, 2));  // 17 digits round-trips

    HogsResult hogs = run_hogs(x1, bases);
    std::string doc = atoms_to_json(hogs.atoms);
    auto loaded = atoms_from_json(doc);
    REQUIRE(loaded.size() == hogs.atoms.size());
    for (std::size_t k = 0; k < loaded.size(); ++k) {
        CHECK(loaded[k].i == hogs.atoms[k].i);
        CHECK(loaded[k].lj == hogs.atoms[k].lj);
        CHECK(loaded[k].c == hogs.atoms[k].c);
        CHECK((loaded[k].lambda_i - hogs.atoms[k].lambda_i).cwiseAbs().maxCoeff() == 0.0);
        CHECK((loaded[k].lambda_j - hogs.atoms[k].lambda_j).cwiseAbs().maxCoeff() == 0.0);
    }
    fs::remove_all(dir);
}
