#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "hofd/errors.hpp"
#include "hofd/quadrature.hpp"

namespace hofd {

enum class BasisKind { Legendre, Fourier, Hermite };

/// What eval() does with a point outside the declared support of a bounded
/// basis (Legendre/Fourier). Hermite accepts any real.
enum class SupportPolicy { Error, Clamp };

inline std::string to_string(BasisKind k) {
    switch (k) {
        case BasisKind::Legendre: return "legendre";
        case BasisKind::Fourier: return "fourier";
        default: return "hermite";
    }
}

/// A univariate system {phi_0 = 1, phi_1, ..., phi_L} orthonormal with
/// respect to one declared marginal law:
///   Legendre  - U[a,b], phi_l = sqrt(2l+1) P_l(t), t the affine map to [-1,1]
///   Fourier   - U[a,b] mapped to [-pi,pi], phi_{2k-1} = sqrt(2) sin(kt),
///               phi_{2k} = sqrt(2) cos(kt)
///   Hermite   - N(mu, sigma^2), phi_l = He_l((x-mu)/sigma) / sqrt(l!)
///
/// Immutable after construction; evaluation is pure.
class BasisSystem {
public:
    static BasisSystem legendre(double a, double b, int truncation,
                                SupportPolicy policy = SupportPolicy::Error) {
        check_interval(a, b, truncation);
        BasisSystem s;
        s.kind_ = BasisKind::Legendre;
        s.a_ = a; s.b_ = b; s.truncation_ = truncation; s.policy_ = policy;
        return s;
    }

    static BasisSystem fourier(double a, double b, int truncation,
                               SupportPolicy policy = SupportPolicy::Error) {
        check_interval(a, b, truncation);
        BasisSystem s;
        s.kind_ = BasisKind::Fourier;
        s.a_ = a; s.b_ = b; s.truncation_ = truncation; s.policy_ = policy;
        return s;
    }

    static BasisSystem hermite(double mu, double sigma, int truncation) {
        if (!(sigma > 0.0)) throw ConfigError("hermite basis: sigma must be > 0");
        if (truncation < 1) throw ConfigError("basis truncation must be >= 1");
        BasisSystem s;
        s.kind_ = BasisKind::Hermite;
        s.mu_ = mu; s.sigma_ = sigma; s.truncation_ = truncation;
        return s;
    }

    BasisKind kind() const { return kind_; }
    int truncation() const { return truncation_; }
    bool bounded() const { return kind_ != BasisKind::Hermite; }
    double lower() const { return a_; }
    double upper() const { return b_; }
    double mean() const { return mu_; }
    double stddev() const { return sigma_; }

    /// phi_l(x) for l in 0..L; phi_0 is identically 1.
    double eval(int l, double x) const {
        if (l < 0 || l > truncation_)
            throw IndexOutOfRange("basis index " + std::to_string(l) +
                                  " out of range 0.." + std::to_string(truncation_));
        if (l == 0) return 1.0;
        switch (kind_) {
            case BasisKind::Legendre: {
                double t = map_to_unit(x);
                return std::sqrt(2.0 * l + 1.0) * legendre_p(l, t);
            }
            case BasisKind::Fourier: {
                double t = -M_PI + M_PI * (map_to_unit(x) + 1.0);
                int k = (l + 1) / 2;
                return (l % 2 == 1) ? std::sqrt(2.0) * std::sin(k * t)
                                    : std::sqrt(2.0) * std::cos(k * t);
            }
            default: {
                double z = (x - mu_) / sigma_;
                return hermite_orthonormal(l, z);
            }
        }
    }

    /// All non-constant functions at x, as a length-L vector (levels 1..L).
    Eigen::VectorXd eval_levels(double x) const {
        Eigen::VectorXd out(truncation_);
        for (int l = 1; l <= truncation_; ++l) out[l - 1] = eval(l, x);
        return out;
    }

    /// Matrix of evaluations: rows follow xs, columns are levels 1..L.
    Eigen::MatrixXd eval_matrix(const Eigen::Ref<const Eigen::VectorXd>& xs) const {
        Eigen::MatrixXd out(xs.size(), truncation_);
        for (Eigen::Index r = 0; r < xs.size(); ++r)
            for (int l = 1; l <= truncation_; ++l) out(r, l - 1) = eval(l, xs[r]);
        return out;
    }

    /// Gram matrix <phi_k, phi_m> for k,m in 0..L under the declared marginal,
    /// by fixed high-order quadrature (256-pt Gauss-Legendre for bounded kinds,
    /// 128-pt Gauss-Hermite otherwise). Orthonormal systems give the identity.
    Eigen::MatrixXd gram_quadrature() const {
        const int m = truncation_ + 1;
        Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(m, m);
        if (bounded()) {
            const QuadratureRule& rule = gauss_legendre(256);
            for (int q = 0; q < rule.nodes.size(); ++q) {
                double x = a_ + 0.5 * (rule.nodes[q] + 1.0) * (b_ - a_);
                double w = 0.5 * rule.weights[q];  // density 1/(b-a) absorbs the map
                accumulate(gram, x, w);
            }
        } else {
            const QuadratureRule& rule = gauss_hermite(128);
            const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
            for (int q = 0; q < rule.nodes.size(); ++q) {
                double x = mu_ + sigma_ * std::sqrt(2.0) * rule.nodes[q];
                accumulate(gram, x, rule.weights[q] * inv_sqrt_pi);
            }
        }
        return gram;
    }

private:
    BasisSystem() = default;

    static void check_interval(double a, double b, int truncation) {
        if (!(a < b)) throw ConfigError("basis interval requires a < b");
        if (truncation < 1) throw ConfigError("basis truncation must be >= 1");
    }

    double map_to_unit(double x) const {
        double t = 2.0 * (x - a_) / (b_ - a_) - 1.0;
        if (t < -1.0 || t > 1.0) {
            // tolerate float-level overshoot, then clamp or complain
            const double slack = 1e-12;
            if (t < -1.0 - slack || t > 1.0 + slack) {
                if (policy_ == SupportPolicy::Error)
                    throw OutOfSupport("x = " + std::to_string(x) + " outside [" +
                                       std::to_string(a_) + ", " + std::to_string(b_) + "]");
            }
            t = t < -1.0 ? -1.0 : (t > 1.0 ? 1.0 : t);
        }
        return t;
    }

    static double legendre_p(int l, double t) {
        if (l == 0) return 1.0;
        double pm1 = 1.0, p = t;
        for (int k = 1; k < l; ++k) {
            double pp1 = ((2.0 * k + 1.0) * t * p - k * pm1) / (k + 1.0);
            pm1 = p;
            p = pp1;
        }
        return p;
    }

    // Normalized probabilists' Hermite recurrence, stable with no factorials:
    // h_{l+1} = (z h_l - sqrt(l) h_{l-1}) / sqrt(l+1)
    static double hermite_orthonormal(int l, double z) {
        double hm1 = 1.0, h = z;
        for (int k = 1; k < l; ++k)
            {
                double hp1 = (z * h - std::sqrt(double(k)) * hm1) / std::sqrt(double(k + 1));
                hm1 = h;
                h = hp1;
            }
        return h;
    }

    void accumulate(Eigen::MatrixXd& gram, double x, double w) const {
        const int m = truncation_ + 1;
        Eigen::VectorXd v(m);
        for (int l = 0; l < m; ++l) v[l] = eval(l, x);
        gram.noalias() += w * v * v.transpose();
    }

    BasisKind kind_ = BasisKind::Legendre;
    double a_ = -1.0, b_ = 1.0;
    double mu_ = 0.0, sigma_ = 1.0;
    int truncation_ = 1;
    SupportPolicy policy_ = SupportPolicy::Error;
};

}  // namespace hofd
