#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "hofd/basis.hpp"
#include "hofd/errors.hpp"

namespace hofd {

/// Empirical Gram system of one variable pair: the 2L x 2L matrix of
/// empirical inner products of [phi_1^i..phi_L^i, phi_1^j..phi_L^j], its raw
/// determinant, and the factorization of the mean-centered matrix used to
/// solve the interaction constraints.
struct GramSystem {
    int i = 0, j = 0;               // variable indices, 0-based
    int lvl = 0;                    // truncation L shared by both variables
    int n1 = 0;                     // sample size behind the inner products
    Eigen::MatrixXd a_hat;          // raw empirical inner products, symmetric
    Eigen::VectorXd col_mean;       // empirical means of the 2L functions
    double det_value = 0.0;         // det(a_hat)
    Eigen::PartialPivLU<Eigen::MatrixXd> centered_lu;  // LU of a_hat - m m^T
};

/// One second-order interaction function
///   phi^{ij}_{(li,lj)} = phi_li^i phi_lj^j + sum_k lambda_i[k] phi_k^i
///                      + sum_k lambda_j[k] phi_k^j + c,
/// built so that its empirical inner products with every phi_k^i, phi_k^j and
/// with the constant vanish on the construction sample.
struct SecondOrderAtom {
    int i = 0, j = 0;      // variable indices, 0-based
    int li = 1, lj = 1;    // levels, 1-based
    Eigen::VectorXd lambda_i, lambda_j;
    double c = 0.0;
};

namespace detail {

inline Eigen::MatrixXd pair_evals(const Eigen::Ref<const Eigen::MatrixXd>& samples,
                                  const std::vector<BasisSystem>& bases, int i, int j) {
    const int lvl = bases[i].truncation();
    Eigen::MatrixXd f(samples.rows(), 2 * lvl);
    f.leftCols(lvl) = bases[i].eval_matrix(samples.col(i));
    f.rightCols(lvl) = bases[j].eval_matrix(samples.col(j));
    return f;
}

}  // namespace detail

/// Assembles the empirical Gram system of pair (i, j) from the construction
/// sample. Entries are (1/n1) sum_r phi_k(x^r) phi_m(x^r).
inline GramSystem empirical_gram(const Eigen::Ref<const Eigen::MatrixXd>& samples,
                                 const std::vector<BasisSystem>& bases, int i, int j) {
    if (i == j) throw ConfigError("empirical_gram: i and j must differ");
    const int lvl = bases[i].truncation();
    if (bases[j].truncation() != lvl)
        throw ConfigError("empirical_gram: mismatched truncation levels");
    const int n1 = static_cast<int>(samples.rows());
    if (n1 < 2 * lvl + 1)
        throw InsufficientSample("empirical_gram: n1 = " + std::to_string(n1) +
                                 " < 2L+1 = " + std::to_string(2 * lvl + 1));

    Eigen::MatrixXd f = detail::pair_evals(samples, bases, i, j);

    GramSystem g;
    g.i = i; g.j = j; g.lvl = lvl; g.n1 = n1;
    g.a_hat = Eigen::MatrixXd::Zero(2 * lvl, 2 * lvl);
    g.a_hat.selfadjointView<Eigen::Lower>().rankUpdate(f.transpose(), 1.0 / n1);
    g.a_hat = g.a_hat.selfadjointView<Eigen::Lower>();
    g.col_mean = f.colwise().mean();
    g.det_value = Eigen::PartialPivLU<Eigen::MatrixXd>(g.a_hat).determinant();
    g.centered_lu.compute(g.a_hat - g.col_mean * g.col_mean.transpose());
    return g;
}

namespace detail {

inline SecondOrderAtom solve_atom_with_evals(const GramSystem& gram,
                                             const Eigen::MatrixXd& f,
                                             int li, int lj) {
    const int lvl = gram.lvl;
    const Eigen::VectorXd prod =
        f.col(li - 1).cwiseProduct(f.col(lvl + lj - 1));
    const double prod_mean = prod.mean();

    // Eliminating the constant from the constraint system centers both the
    // Gram matrix and the right-hand side; the constant then follows from the
    // empirical-mean condition.
    Eigen::VectorXd rhs = -(f.transpose() * prod) / gram.n1;
    rhs += prod_mean * gram.col_mean;
    Eigen::VectorXd lambda = gram.centered_lu.solve(rhs);
    if (!lambda.allFinite())
        throw SolveFailure("second-order atom solve produced non-finite coefficients");

    SecondOrderAtom atom;
    atom.i = gram.i; atom.j = gram.j; atom.li = li; atom.lj = lj;
    atom.lambda_i = lambda.head(lvl);
    atom.lambda_j = lambda.tail(lvl);
    atom.c = -(prod_mean + gram.col_mean.dot(lambda));
    return atom;
}

}  // namespace detail

/// Solves one interaction atom for the pair behind `gram`. Fails with
/// DegenerateGram when det(a_hat) is below the threshold.
inline SecondOrderAtom solve_second_order_atom(const GramSystem& gram,
                                               const Eigen::Ref<const Eigen::MatrixXd>& samples,
                                               const std::vector<BasisSystem>& bases,
                                               int li, int lj,
                                               double degeneracy_threshold = 1e-12) {
    if (li < 1 || li > gram.lvl || lj < 1 || lj > gram.lvl)
        throw IndexOutOfRange("second-order level index out of 1..L");
    if (gram.det_value < degeneracy_threshold)
        throw DegenerateGram("pair (" + std::to_string(gram.i + 1) + "," +
                             std::to_string(gram.j + 1) + ") det = " +
                             std::to_string(gram.det_value));
    Eigen::MatrixXd f = detail::pair_evals(samples, bases, gram.i, gram.j);
    return detail::solve_atom_with_evals(gram, f, li, lj);
}

/// Solves all L^2 atoms of one pair, reusing the shared factorization and
/// basis evaluations. Atom order is lexicographic in (li, lj).
inline std::vector<SecondOrderAtom> solve_pair_atoms(const GramSystem& gram,
                                                     const Eigen::Ref<const Eigen::MatrixXd>& samples,
                                                     const std::vector<BasisSystem>& bases,
                                                     double degeneracy_threshold = 1e-12) {
    if (gram.det_value < degeneracy_threshold)
        throw DegenerateGram("pair (" + std::to_string(gram.i + 1) + "," +
                             std::to_string(gram.j + 1) + ") det = " +
                             std::to_string(gram.det_value));
    Eigen::MatrixXd f = detail::pair_evals(samples, bases, gram.i, gram.j);
    std::vector<SecondOrderAtom> atoms;
    atoms.reserve(static_cast<std::size_t>(gram.lvl) * gram.lvl);
    for (int li = 1; li <= gram.lvl; ++li)
        for (int lj = 1; lj <= gram.lvl; ++lj)
            atoms.push_back(detail::solve_atom_with_evals(gram, f, li, lj));
    return atoms;
}

/// Minimum raw determinant over the given pair systems.
inline double degeneracy(const std::vector<GramSystem>& grams) {
    if (grams.empty()) throw ConfigError("degeneracy: no pairs");
    double d = grams.front().det_value;
    for (const auto& g : grams) d = std::min(d, g.det_value);
    return d;
}

/// Output of the full second-order construction over all pairs i < j.
/// Degenerate pairs are skipped (their atoms are absent) and recorded.
struct HogsResult {
    std::vector<GramSystem> grams;                // all pairs i < j, in order
    std::vector<SecondOrderAtom> atoms;           // built pairs only
    std::vector<std::pair<int, int>> skipped;     // degenerate pairs, 0-based
    double degeneracy = 1.0;                      // min det over all pairs
};

inline HogsResult run_hogs(const Eigen::Ref<const Eigen::MatrixXd>& samples,
                           const std::vector<BasisSystem>& bases,
                           double degeneracy_threshold = 1e-12) {
    const int p = static_cast<int>(bases.size());
    HogsResult out;
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            GramSystem gram = empirical_gram(samples, bases, i, j);
            if (gram.det_value < degeneracy_threshold) {
                out.skipped.emplace_back(i, j);
            } else {
                auto atoms = solve_pair_atoms(gram, samples, bases, degeneracy_threshold);
                out.atoms.insert(out.atoms.end(), atoms.begin(), atoms.end());
            }
            out.grams.push_back(std::move(gram));
        }
    }
    if (!out.grams.empty()) out.degeneracy = degeneracy(out.grams);
    return out;
}

}  // namespace hofd
