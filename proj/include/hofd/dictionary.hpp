#pragma once

#include <Eigen/Dense>
#include <cstdio>
#include <string>
#include <vector>

#include "hofd/basis.hpp"
#include "hofd/errors.hpp"
#include "hofd/gram.hpp"

namespace hofd {

/// One dictionary element. First-order atoms are raw basis functions
/// phi_l^i; second-order atoms carry their correction coefficients.
struct Atom {
    int order = 1;       // 1 or 2
    int i = 0, j = -1;   // subset u, 0-based (j unused for order 1)
    int li = 1, lj = 0;  // levels, 1-based (lj unused for order 1)
    Eigen::VectorXd lambda_i, lambda_j;
    double c = 0.0;
    int canonical_index = -1;

    /// Display name with 1-based variable indices, e.g. "u=(1);l=(2)" or
    /// "u=(1,3);l=(2,4)".
    std::string name() const {
        char buf[64];
        if (order == 1)
            std::snprintf(buf, sizeof buf, "u=(%d);l=(%d)", i + 1, li);
        else
            std::snprintf(buf, sizeof buf, "u=(%d,%d);l=(%d,%d)", i + 1, j + 1, li, lj);
        return buf;
    }
};

/// Evaluations of every atom on a sample, one column per atom in canonical
/// order, with per-column empirical norms and means.
struct DesignMatrix {
    Eigen::MatrixXd values;      // n x m_n, column-major
    Eigen::VectorXd col_norms;   // sqrt((1/n) sum col^2)
    Eigen::VectorXd col_means;
    int rows() const { return static_cast<int>(values.rows()); }
    int cols() const { return static_cast<int>(values.cols()); }
};

/// The ordered dictionary: all first-order atoms sorted by (i, l_i), then
/// all second-order atoms sorted lexicographically by (i, j, l_i, l_j).
/// canonical_index is the position in this order.
class Dictionary {
public:
    Dictionary(std::vector<BasisSystem> bases, const HogsResult& hogs)
        : bases_(std::move(bases)) {
        const int p = static_cast<int>(bases_.size());
        if (p == 0) throw EmptyDictionary("dictionary: p = 0");
        lvl_ = bases_.front().truncation();
        if (lvl_ == 0) throw EmptyDictionary("dictionary: L = 0");
        for (const auto& b : bases_)
            if (b.truncation() != lvl_)
                throw ConfigError("dictionary: all variables must share one truncation");

        for (int i = 0; i < p; ++i)
            for (int l = 1; l <= lvl_; ++l) {
                Atom a;
                a.order = 1; a.i = i; a.li = l;
                a.canonical_index = static_cast<int>(atoms_.size());
                atoms_.push_back(std::move(a));
            }
        // run_hogs emits pairs in (i, j) order and atoms in (li, lj) order,
        // which is already canonical.
        for (const auto& s : hogs.atoms) {
            Atom a;
            a.order = 2; a.i = s.i; a.j = s.j; a.li = s.li; a.lj = s.lj;
            a.lambda_i = s.lambda_i; a.lambda_j = s.lambda_j; a.c = s.c;
            a.canonical_index = static_cast<int>(atoms_.size());
            atoms_.push_back(std::move(a));
        }
        skipped_ = hogs.skipped;
    }

    int size() const { return static_cast<int>(atoms_.size()); }
    int dim() const { return static_cast<int>(bases_.size()); }
    int truncation() const { return lvl_; }
    const Atom& atom(int c) const { return atoms_.at(c); }
    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<BasisSystem>& bases() const { return bases_; }
    const std::vector<std::pair<int, int>>& skipped_pairs() const { return skipped_; }

    /// One atom evaluated over the rows of X.
    Eigen::VectorXd eval_column(const Atom& a,
                                const Eigen::Ref<const Eigen::MatrixXd>& x) const {
        if (a.order == 1) return bases_[a.i].eval_matrix(x.col(a.i)).col(a.li - 1);
        Eigen::MatrixXd fi = bases_[a.i].eval_matrix(x.col(a.i));
        Eigen::MatrixXd fj = bases_[a.j].eval_matrix(x.col(a.j));
        return second_order_column(a, fi, fj);
    }

    /// Full design matrix on a sample; entry (s, c) = atom_c(x^s).
    DesignMatrix evaluate(const Eigen::Ref<const Eigen::MatrixXd>& x) const {
        if (x.cols() != dim())
            throw ConfigError("evaluate: sample has " + std::to_string(x.cols()) +
                              " columns, dictionary expects " + std::to_string(dim()));
        const int n = static_cast<int>(x.rows());

        std::vector<Eigen::MatrixXd> per_var(dim());
        for (int i = 0; i < dim(); ++i) per_var[i] = bases_[i].eval_matrix(x.col(i));

        DesignMatrix dm;
        dm.values.resize(n, size());
        for (int c = 0; c < size(); ++c) {
            const Atom& a = atoms_[c];
            if (a.order == 1)
                dm.values.col(c) = per_var[a.i].col(a.li - 1);
            else
                dm.values.col(c) = second_order_column(a, per_var[a.i], per_var[a.j]);
        }
        if (!dm.values.allFinite())
            throw NonFiniteInput("design matrix contains non-finite entries");
        dm.col_means = dm.values.colwise().mean();
        dm.col_norms = (dm.values.colwise().squaredNorm() / double(n)).cwiseSqrt();
        return dm;
    }

private:
    Eigen::VectorXd second_order_column(const Atom& a, const Eigen::MatrixXd& fi,
                                        const Eigen::MatrixXd& fj) const {
        Eigen::VectorXd col = fi.col(a.li - 1).cwiseProduct(fj.col(a.lj - 1));
        col.noalias() += fi * a.lambda_i;
        col.noalias() += fj * a.lambda_j;
        col.array() += a.c;
        return col;
    }

    std::vector<BasisSystem> bases_;
    std::vector<Atom> atoms_;
    std::vector<std::pair<int, int>> skipped_;
    int lvl_ = 0;
};

/// Predictor count before degenerate-pair removal: pL + C(p,2) L^2.
inline long long dictionary_size(int p, int lvl) {
    return static_cast<long long>(p) * lvl +
           (static_cast<long long>(p) * (p - 1) / 2) * lvl * lvl;
}

}  // namespace hofd
