#pragma once

// Complex ridge regression onto the square-root (detector-inverted) target,
// with contiguous-block cross-validation of the regularisation strength.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "photorc/core.hpp"
#include "photorc/detector.hpp"
#include "photorc/reservoir.hpp"

namespace photorc {

struct RidgeConfig {
    /// Grid of regularisation values. With relative_grid each entry g maps
    /// to alpha = sqrt(g * trace(X^H X) / F); otherwise entries are alpha.
    std::vector<double> alpha_grid = default_grid();
    bool relative_grid = true;
    std::size_t folds = 5;
    bool regularize_bias = false;

    static std::vector<double> default_grid() {
        std::vector<double> g;
        for (int e = -12; e <= 2; ++e) g.push_back(std::pow(10.0, e));
        return g;
    }
};

struct RidgeFit {
    double alpha = 0.0;
    ReadoutWeights weights;
    std::vector<double> grid_alphas;  // absolute alphas, ascending
    std::vector<double> cv_errors;    // mean validation error per grid point
};

/// sqrt(d / R) elementwise.
inline std::vector<double> invert_target(std::span<const double> d, double responsivity) {
    require(responsivity > 0, "responsivity must be positive");
    std::vector<double> t(d.size());
    for (std::size_t n = 0; n < d.size(); ++n) {
        require(d[n] >= 0, "targets must be non-negative");
        t[n] = std::sqrt(d[n] / responsivity);
    }
    return t;
}

namespace detail {

/// Solves (G + alpha^2 I') w = rhs; I' is the identity with a zero at
/// index `skip` (pass -1 to penalize every channel).
inline Eigen::VectorXcd solve_regularized(Eigen::MatrixXcd gram, const Eigen::VectorXcd& rhs, double alpha, Eigen::Index skip) {
    const double a2 = alpha * alpha;
    for (Eigen::Index i = 0; i < gram.rows(); ++i)
        if (i != skip) gram(i, i) += a2;
    const Eigen::LDLT<Eigen::MatrixXcd> ldlt(gram);
    const double tiny = std::numeric_limits<double>::epsilon() * static_cast<double>(gram.rows());
    const Eigen::VectorXd d = ldlt.vectorD().cwiseAbs();
    if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > tiny) || !(d.minCoeff() > tiny * d.maxCoeff()))
        throw SingularSystem("ridge system is singular (alpha=" + std::to_string(alpha) + ")");
    return ldlt.solve(rhs);
}

}  // namespace detail

/// w = (X^H X + alpha^2 I')^-1 X^H t, where I' has a zero at the bias channel
/// unless regularize_bias.
inline ReadoutWeights ridge_solve(const Eigen::MatrixXcd& x, const Eigen::VectorXcd& t, double alpha,
                                  bool regularize_bias = true, std::optional<std::size_t> bias_channel = std::nullopt) {
    require(x.rows() == t.size(), "state rows and target length differ");
    require(alpha >= 0, "alpha must be non-negative");
    const Eigen::MatrixXcd gram = x.adjoint() * x;
    const Eigen::VectorXcd rhs = x.adjoint() * t;
    const Eigen::Index skip = (!regularize_bias && bias_channel) ? static_cast<Eigen::Index>(*bias_channel) : -1;
    return {detail::solve_regularized(gram, rhs, alpha, skip)};
}

inline ReadoutWeights ridge_solve(const StateMatrix& x, std::span<const double> t, double alpha, bool regularize_bias) {
    const Eigen::VectorXcd tv = Eigen::Map<const Eigen::VectorXd>(t.data(), static_cast<Eigen::Index>(t.size())).cast<cdouble>();
    return ridge_solve(x.samples, tv, alpha, regularize_bias, x.bias_channel);
}

/// Picks alpha by k-fold contiguous-block CV, scoring mean |x w - t|^2 on
/// each held-out block, then refits on all rows.
inline RidgeFit cv_alpha(const Eigen::MatrixXcd& x, const Eigen::VectorXcd& t, const RidgeConfig& cfg,
                         std::optional<std::size_t> bias_channel = std::nullopt) {
    require(!cfg.alpha_grid.empty(), "alpha grid is empty");
    require(cfg.folds >= 2, "need at least two folds");
    require(x.rows() == t.size(), "state rows and target length differ");
    const Eigen::Index n = x.rows();
    require(n >= static_cast<Eigen::Index>(cfg.folds), "fewer samples than folds");
    const Eigen::Index unpenalized = (!cfg.regularize_bias && bias_channel) ? static_cast<Eigen::Index>(*bias_channel) : -1;

    const Eigen::MatrixXcd gram = x.adjoint() * x;
    const Eigen::VectorXcd rhs = x.adjoint() * t;
    RidgeFit fit;
    const double scale = gram.diagonal().real().sum() / static_cast<double>(x.cols());
    for (double g : cfg.alpha_grid) {
        require(g >= 0, "alpha grid entries must be non-negative");
        fit.grid_alphas.push_back(cfg.relative_grid ? std::sqrt(g * scale) : g);
    }
    std::sort(fit.grid_alphas.begin(), fit.grid_alphas.end());
    fit.cv_errors.assign(fit.grid_alphas.size(), 0.0);

    for (std::size_t k = 0; k < cfg.folds; ++k) {
        const Eigen::Index lo = n * static_cast<Eigen::Index>(k) / static_cast<Eigen::Index>(cfg.folds);
        const Eigen::Index hi = n * static_cast<Eigen::Index>(k + 1) / static_cast<Eigen::Index>(cfg.folds);
        const auto xv = x.middleRows(lo, hi - lo);
        const auto tv = t.segment(lo, hi - lo);
        const Eigen::MatrixXcd gram_train = gram - xv.adjoint() * xv;
        const Eigen::VectorXcd rhs_train = rhs - xv.adjoint() * tv;
        for (std::size_t a = 0; a < fit.grid_alphas.size(); ++a) {
            double err = std::numeric_limits<double>::infinity();
            try {
                const Eigen::VectorXcd w = detail::solve_regularized(gram_train, rhs_train, fit.grid_alphas[a], unpenalized);
                err = (xv * w - tv).squaredNorm() / static_cast<double>(hi - lo);
            } catch (const SingularSystem&) {
            }
            fit.cv_errors[a] += err / static_cast<double>(cfg.folds);
        }
    }
    std::size_t best = 0;
    for (std::size_t a = 1; a < fit.cv_errors.size(); ++a)
        if (fit.cv_errors[a] < fit.cv_errors[best]) best = a;
    fit.alpha = fit.grid_alphas[best];
    fit.weights = {detail::solve_regularized(gram, rhs, fit.alpha, unpenalized)};
    return fit;
}

inline RidgeFit cv_alpha(const StateMatrix& x, std::span<const double> t, const RidgeConfig& cfg) {
    const Eigen::VectorXcd tv = Eigen::Map<const Eigen::VectorXd>(t.data(), static_cast<Eigen::Index>(t.size())).cast<cdouble>();
    return cv_alpha(x.samples, tv, cfg, x.bias_channel);
}

}  // namespace photorc
