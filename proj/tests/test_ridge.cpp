#include <gtest/gtest.h>

#include <random>

#include "photorc/ridge.hpp"
#include "test_oracles.hpp"

using namespace photorc;

namespace {

double rel_err(const Eigen::VectorXcd& a, const std::vector<oracle::cd>& b) { return (a - oracle::to_eigen(b)).norm() / oracle::to_eigen(b).norm(); }

}  // namespace

TEST(InvertTarget, Examples) {
    EXPECT_EQ(invert_target(std::vector<double>{0.0}, 0.5)[0], 0.0);
    EXPECT_NEAR(invert_target(std::vector<double>{0.1}, 0.5)[0], 0.4472135954999579, 1e-15);
    EXPECT_THROW(invert_target(std::vector<double>{-0.1}, 0.5), InvalidArgument);
}

TEST(InvertTarget, DetectorUndoesInversion) {
    DetectorConfig c;
    c.noise_enabled = false;
    c.filter_enabled = false;
    const std::vector<double> d{0.0, 0.1, 0.0, 0.1, 0.1};
    const auto t = invert_target(d, c.responsivity);
    std::vector<cdouble> a(t.begin(), t.end());
    const auto y = photodiode(a, 1e-12, c).samples;
    for (std::size_t i = 0; i < d.size(); ++i) EXPECT_NEAR(y[i], d[i], 1e-16);
}

TEST(RidgeSolve, DiagonalSystem) {
    const Eigen::MatrixXcd x = Eigen::MatrixXcd::Identity(2, 2);
    Eigen::VectorXcd t(2);
    t << 1.0, 0.0;
    const auto w = ridge_solve(x, t, 1.0);
    EXPECT_NEAR(std::abs(w.values[0] - 0.5), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(w.values[1]), 0.0, 1e-15);
}

TEST(RidgeSolve, ExactSolveAtZeroAlpha) {
    const auto x = oracle::to_eigen(oracle::random_cmat(6, 6, 1));
    const auto t = oracle::to_eigen(oracle::random_cvec(6, 2));
    const auto w = ridge_solve(x, t, 0.0);
    EXPECT_LT((x * w.values - t).norm(), 1e-10 * t.norm());
}

TEST(RidgeSolve, MatchesNormalEquationsOracle) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto xm = oracle::random_cmat(50, 5, seed);
        const auto tv = oracle::random_cvec(50, seed + 1000);
        for (double alpha : {0.0, 0.1, 3.0}) {
            const auto w = ridge_solve(oracle::to_eigen(xm), oracle::to_eigen(tv), alpha);
            EXPECT_LT(rel_err(w.values, oracle::ridge_normal_equations(xm, tv, alpha, std::vector<bool>(5, true))), 1e-10);
            const auto wb = ridge_solve(oracle::to_eigen(xm), oracle::to_eigen(tv), alpha, false, 4);
            EXPECT_LT(rel_err(wb.values, oracle::ridge_normal_equations(xm, tv, alpha, {true, true, true, true, false})), 1e-10);
        }
    }
}

TEST(RidgeSolve, MinimizesPenalizedErrorAgainstGradientDescent) {
    const auto xm = oracle::random_cmat(30, 3, 7);
    const auto tv = oracle::random_cvec(30, 8);
    const std::vector<bool> pen{true, true, false};
    const auto gd = oracle::ridge_gradient_descent(xm, tv, 2.0, pen, 5e-3, 20000);
    const auto w = ridge_solve(oracle::to_eigen(xm), oracle::to_eigen(tv), 2.0, false, 2);
    EXPECT_LT(rel_err(w.values, gd), 1e-8);
}

TEST(RidgeSolve, MonotoneShrinkage) {
    const auto x = oracle::to_eigen(oracle::random_cmat(40, 6, 3));
    const auto t = oracle::to_eigen(oracle::random_cvec(40, 4));
    double prev = std::numeric_limits<double>::infinity();
    for (double alpha : {0.0, 0.01, 0.1, 1.0, 3.0, 10.0, 100.0}) {
        const double n = ridge_solve(x, t, alpha).values.norm();
        EXPECT_LE(n, prev * (1 + 1e-12));
        prev = n;
    }
}

TEST(RidgeSolve, RealProblemGivesRealWeights) {
    Eigen::MatrixXcd x = oracle::to_eigen(oracle::random_cmat(30, 4, 5)).real().cast<cdouble>();
    Eigen::VectorXcd t = oracle::to_eigen(oracle::random_cvec(30, 6)).real().cast<cdouble>();
    EXPECT_LE(ridge_solve(x, t, 0.5).values.imag().cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RidgeSolve, SingularSystemRaises) {
    Eigen::MatrixXcd x(4, 2);
    x.col(0).setOnes();
    x.col(1).setOnes();
    EXPECT_THROW(ridge_solve(x, Eigen::VectorXcd::Ones(4), 0.0), SingularSystem);
    EXPECT_NO_THROW(ridge_solve(x, Eigen::VectorXcd::Ones(4), 0.1));
}

TEST(CvAlpha, SingleGridPointIsReturned) {
    const auto x = oracle::to_eigen(oracle::random_cmat(60, 3, 1));
    const auto t = oracle::to_eigen(oracle::random_cvec(60, 2));
    RidgeConfig c;
    c.alpha_grid = {0.7};
    c.relative_grid = false;
    const auto fit = cv_alpha(x, t, c);
    EXPECT_DOUBLE_EQ(fit.alpha, 0.7);
    EXPECT_LT((fit.weights.values - ridge_solve(x, t, 0.7).values).norm(), 1e-12);
}

TEST(CvAlpha, ExactSystemPicksSmallestAlpha) {
    const auto x = oracle::to_eigen(oracle::random_cmat(100, 4, 3));
    const auto w = oracle::to_eigen(oracle::random_cvec(4, 4));
    const Eigen::VectorXcd t = x * w;
    RidgeConfig c;
    c.relative_grid = false;
    c.alpha_grid = {1e-4, 1e-2, 1.0, 10.0};
    const auto fit = cv_alpha(x, t, c);
    EXPECT_DOUBLE_EQ(fit.alpha, 1e-4);
    for (std::size_t i = 1; i < fit.cv_errors.size(); ++i) EXPECT_LE(fit.cv_errors[i - 1], fit.cv_errors[i]);
}

TEST(CvAlpha, PureNoiseTargetPicksLargeAlpha) {
    const auto x = oracle::to_eigen(oracle::random_cmat(40, 10, 5));
    const auto t = oracle::to_eigen(oracle::random_cvec(40, 6));
    RidgeConfig c;
    c.relative_grid = false;
    c.alpha_grid = {1e-6, 1e-3, 1.0, 1e3};
    const auto fit = cv_alpha(x, t, c);
    EXPECT_GE(fit.alpha, 1.0);
    // Fold errors recomputed directly.
    double direct = 0.0;
    for (std::size_t k = 0; k < 5; ++k) {
        const Eigen::Index lo = 40 * static_cast<Eigen::Index>(k) / 5, hi = 40 * static_cast<Eigen::Index>(k + 1) / 5;
        Eigen::MatrixXcd xt(40 - (hi - lo), 10);
        Eigen::VectorXcd tt(40 - (hi - lo));
        xt << x.topRows(lo), x.bottomRows(40 - hi);
        tt << t.head(lo), t.tail(40 - hi);
        const auto w = ridge_solve(xt, tt, fit.alpha).values;
        direct += (x.middleRows(lo, hi - lo) * w - t.segment(lo, hi - lo)).squaredNorm() / static_cast<double>(hi - lo) / 5.0;
    }
    const auto idx = static_cast<std::size_t>(std::find(fit.grid_alphas.begin(), fit.grid_alphas.end(), fit.alpha) - fit.grid_alphas.begin());
    EXPECT_NEAR(fit.cv_errors[idx], direct, 1e-9 * direct);
}

TEST(CvAlpha, RelativeGridScalesWithChannelPower) {
    const auto x = oracle::to_eigen(oracle::random_cmat(50, 3, 9));
    const auto t = oracle::to_eigen(oracle::random_cvec(50, 10));
    RidgeConfig c;
    c.alpha_grid = {1e-2};
    const double power = x.squaredNorm() / 3.0;
    EXPECT_NEAR(cv_alpha(x, t, c).alpha, std::sqrt(1e-2 * power), 1e-12);
    const auto scaled = cv_alpha(Eigen::MatrixXcd(x * 10.0), t, c);
    EXPECT_NEAR(scaled.alpha, 10.0 * std::sqrt(1e-2 * power), 1e-10);
}

TEST(CvAlpha, RejectsBadConfig) {
    const auto x = oracle::to_eigen(oracle::random_cmat(20, 2, 1));
    const auto t = oracle::to_eigen(oracle::random_cvec(20, 1));
    RidgeConfig c;
    c.alpha_grid.clear();
    EXPECT_THROW(cv_alpha(x, t, c), InvalidArgument);
    c = {};
    c.folds = 1;
    EXPECT_THROW(cv_alpha(x, t, c), InvalidArgument);
}
