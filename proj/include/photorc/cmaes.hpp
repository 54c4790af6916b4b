#pragma once

// (mu/mu_w, lambda) CMA-ES with cumulative step-size adaptation and
// rank-one + rank-mu covariance updates.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "photorc/core.hpp"

namespace photorc {

struct CmaConfig {
    double initial_sigma = 1.0;
    /// Zero selects 4 + floor(3 ln n).
    std::size_t population = 0;
    std::size_t max_iterations = 1000;
    std::uint64_t seed = 0;
    std::optional<double> target = std::nullopt;
};

inline std::size_t default_population(std::size_t dim) {
    return 4 + static_cast<std::size_t>(std::floor(3.0 * std::log(static_cast<double>(dim))));
}

struct CmaState {
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;
    double sigma = 1.0;
    Eigen::VectorXd path_sigma;
    Eigen::VectorXd path_c;
    std::size_t iteration = 0;
};

struct CmaIteration {
    std::size_t iteration = 0;    // 1-based
    std::size_t evaluations = 0;  // cumulative objective calls
    double best_f = 0.0;          // best-so-far
    const Eigen::VectorXd* best_x = nullptr;
    const CmaState* state = nullptr;
};

struct CmaResult {
    Eigen::VectorXd best_x;
    double best_f = std::numeric_limits<double>::infinity();
    std::vector<double> history;  // best-so-far f after each iteration
    std::size_t evaluations = 0;
    std::size_t population = 0;
    CmaState state;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;
using IterationCallback = std::function<void(const CmaIteration&)>;

inline CmaResult cmaes_minimize(const Objective& f, const Eigen::VectorXd& x0, const CmaConfig& cfg,
                                const IterationCallback& on_iteration = {}) {
    const auto n = static_cast<std::size_t>(x0.size());
    require(n >= 1, "search dimension must be >= 1");
    require(cfg.initial_sigma > 0, "initial sigma must be positive");
    const std::size_t lambda = cfg.population ? cfg.population : default_population(n);
    require(lambda >= 4, "population must be >= 4");
    const std::size_t mu = lambda / 2;
    const double dn = static_cast<double>(n);

    Eigen::VectorXd weights(static_cast<Eigen::Index>(mu));
    for (std::size_t i = 0; i < mu; ++i)
        weights[static_cast<Eigen::Index>(i)] = std::log((static_cast<double>(lambda) + 1.0) / 2.0) - std::log(static_cast<double>(i + 1));
    weights /= weights.sum();
    const double mu_eff = 1.0 / weights.squaredNorm();

    const double c_sigma = (mu_eff + 2.0) / (dn + mu_eff + 5.0);
    const double d_sigma = 1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff - 1.0) / (dn + 1.0)) - 1.0) + c_sigma;
    const double c_c = (4.0 + mu_eff / dn) / (dn + 4.0 + 2.0 * mu_eff / dn);
    const double c_1 = 2.0 / ((dn + 1.3) * (dn + 1.3) + mu_eff);
    const double c_mu = std::min(1.0 - c_1, 2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((dn + 2.0) * (dn + 2.0) + mu_eff));
    const double chi_n = std::sqrt(dn) * (1.0 - 1.0 / (4.0 * dn) + 1.0 / (21.0 * dn * dn));

    CmaResult res;
    res.population = lambda;
    CmaState& s = res.state;
    s.mean = x0;
    s.covariance = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    s.sigma = cfg.initial_sigma;
    s.path_sigma = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    s.path_c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));

    Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::VectorXd scales = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));  // sqrt of eigenvalues

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal;

    std::vector<Eigen::VectorXd> steps(lambda);  // y_k = B D z_k
    std::vector<Eigen::VectorXd> cands(lambda);
    std::vector<double> fitness(lambda);
    std::vector<std::size_t> order(lambda);

    for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
        for (std::size_t k = 0; k < lambda; ++k) {
            Eigen::VectorXd z(static_cast<Eigen::Index>(n));
            for (auto& v : z) v = normal(rng);
            steps[k] = basis * scales.cwiseProduct(z);
            cands[k] = s.mean + s.sigma * steps[k];
        }
        for (std::size_t k = 0; k < lambda; ++k) {
            fitness[k] = f(cands[k]);
            ++res.evaluations;
            if (!std::isfinite(fitness[k]))
                throw std::runtime_error("CMA-ES: objective returned a non-finite value at iteration " + std::to_string(it + 1) +
                                         ", candidate " + std::to_string(k));
        }
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fitness[a] < fitness[b]; });
        if (fitness[order[0]] < res.best_f) {
            res.best_f = fitness[order[0]];
            res.best_x = cands[order[0]];
        }

        Eigen::VectorXd y_w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < mu; ++i) y_w += weights[static_cast<Eigen::Index>(i)] * steps[order[i]];
        s.mean += s.sigma * y_w;

        // C^{-1/2} y_w = B D^{-1} B^T y_w
        const Eigen::VectorXd c_inv_sqrt_yw = basis * (basis.transpose() * y_w).cwiseQuotient(scales);
        s.path_sigma = (1.0 - c_sigma) * s.path_sigma + std::sqrt(c_sigma * (2.0 - c_sigma) * mu_eff) * c_inv_sqrt_yw;
        const double ps_norm = s.path_sigma.norm();
        const double gen = static_cast<double>(it + 1);
        const bool h_sigma = ps_norm / std::sqrt(1.0 - std::pow(1.0 - c_sigma, 2.0 * gen)) < (1.4 + 2.0 / (dn + 1.0)) * chi_n;
        s.path_c = (1.0 - c_c) * s.path_c + (h_sigma ? std::sqrt(c_c * (2.0 - c_c) * mu_eff) : 0.0) * y_w;

        Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < mu; ++i)
            rank_mu.noalias() += weights[static_cast<Eigen::Index>(i)] * steps[order[i]] * steps[order[i]].transpose();
        const double delta_h = h_sigma ? 0.0 : c_c * (2.0 - c_c);
        s.covariance = (1.0 - c_1 - c_mu + c_1 * delta_h) * s.covariance + c_1 * s.path_c * s.path_c.transpose() + c_mu * rank_mu;
        s.covariance = 0.5 * (s.covariance + s.covariance.transpose());

        s.sigma *= std::exp((c_sigma / d_sigma) * (ps_norm / chi_n - 1.0));

        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.covariance);
        Eigen::VectorXd ev = eig.eigenvalues();
        const double floor = std::max(ev.maxCoeff(), 0.0) * 1e-20 + std::numeric_limits<double>::min();
        if (ev.minCoeff() < floor) {
            ev = ev.cwiseMax(floor);
            s.covariance = eig.eigenvectors() * ev.asDiagonal() * eig.eigenvectors().transpose();
            s.covariance = 0.5 * (s.covariance + s.covariance.transpose());
        }
        if (!(ev.minCoeff() > 0)) throw std::logic_error("CMA-ES: covariance lost positive definiteness");
        basis = eig.eigenvectors();
        scales = ev.cwiseSqrt();
        s.iteration = it + 1;

        res.history.push_back(res.best_f);
        if (on_iteration) on_iteration({it + 1, res.evaluations, res.best_f, &res.best_x, &s});
        if (cfg.target && res.best_f <= *cfg.target) break;
    }
    return res;
}

inline CmaResult cmaes_minimize(const Objective& f, std::size_t dim, const CmaConfig& cfg, const IterationCallback& cb = {}) {
    return cmaes_minimize(f, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim)), cfg, cb);
}

}  // namespace photorc
