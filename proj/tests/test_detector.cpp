#include <gtest/gtest.h>

#include <random>

#include "photorc/butterworth.hpp"
#include "photorc/detector.hpp"
#include "test_oracles.hpp"

using namespace photorc;

namespace {

DetectorConfig quiet() {
    DetectorConfig c;
    c.noise_enabled = false;
    return c;
}

StateMatrix random_states(Eigen::Index n, Eigen::Index f, std::uint64_t seed) {
    StateMatrix x;
    x.sample_period = 1.0 / 240e9;
    x.samples = oracle::to_eigen(oracle::random_cmat(static_cast<std::size_t>(n), static_cast<std::size_t>(f), seed)) * 0.1;
    return x;
}

}  // namespace

TEST(Butterworth, HalfPowerAtCutoff) {
    for (double fc : {5e9, 25e9, 50e9}) {
        const ButterworthLowpass lp(4, fc, 240e9);
        EXPECT_NEAR(lp.magnitude(fc), 1.0 / std::sqrt(2.0), 0.01 / std::sqrt(2.0));
        EXPECT_NEAR(lp.magnitude(0.0), 1.0, 1e-12);
    }
}

TEST(Butterworth, MonotonicMagnitude) {
    const ButterworthLowpass lp(4, 25e9, 240e9);
    double prev = lp.magnitude(0.0);
    for (int i = 1; i < 1000; ++i) {
        const double m = lp.magnitude(120e9 * i / 1000.0);
        EXPECT_LE(m, prev + 1e-12);
        prev = m;
    }
}

TEST(Butterworth, SinusoidGainMatchesPrewarpedAnalogResponse) {
    // A digital Butterworth from the bilinear transform has the analog
    // response at the prewarped frequency tan(pi f / fs) / tan(pi fc / fs).
    const double fs = 240e9, fc = 25e9;
    const ButterworthLowpass lp(4, fc, fs);
    for (double f : {5e9, 20e9, 25e9, 40e9}) {
        std::vector<double> x(20000);
        for (std::size_t n = 0; n < x.size(); ++n) x[n] = std::sin(kTwoPi * f * static_cast<double>(n) / fs);
        const auto y = lp.apply(x);
        // Steady-state amplitude from the RMS over whole periods.
        const auto period = static_cast<std::size_t>(std::llround(fs / f * 10));  // 10 periods, integral for these f
        double power = 0.0;
        for (std::size_t n = y.size() - period; n < y.size(); ++n) power += y[n] * y[n];
        const double peak = std::sqrt(2.0 * power / static_cast<double>(period));
        const double r = std::tan(std::numbers::pi * f / fs) / std::tan(std::numbers::pi * fc / fs);
        const double analog = 1.0 / std::sqrt(1.0 + std::pow(r, 8));
        EXPECT_NEAR(peak, analog, 1e-6) << f;
    }
}

TEST(Photodiode, SteadyStateCurrent) {
    OpticalSignal a{std::vector<cdouble>(2000, cdouble(0.2, 0.0)), 1.0 / 240e9};
    const auto y = photodiode(a, quiet());
    EXPECT_NEAR(y.samples.back(), 0.02, 1e-12);
}

TEST(Photodiode, ZeroInZeroOut) {
    OpticalSignal a{std::vector<cdouble>(100), 1.0 / 240e9};
    for (double v : photodiode(a, quiet()).samples) EXPECT_EQ(v, 0.0);
}

TEST(Photodiode, NoiseVarianceFormula) {
    const DetectorConfig c;
    const double expected = oracle::noise_variance(0.02, 25e9, 1e-10, 300.0, 1e6);
    EXPECT_NEAR(noise_variance(0.02, c), expected, 1e-12 * expected);
    EXPECT_NEAR(expected, 1.602e-10, 0.001e-10);
}

TEST(Photodiode, EmpiricalNoiseVariance) {
    DetectorConfig c;
    c.noise_seed = 99;
    std::vector<cdouble> a(100000, cdouble(0.2, 0.0));
    const auto noisy = photocurrent(a, c);
    double s = 0.0, s2 = 0.0;
    for (double v : noisy) {
        s += v - 0.02;
        s2 += (v - 0.02) * (v - 0.02);
    }
    const double n = static_cast<double>(noisy.size());
    const double var = s2 / n - (s / n) * (s / n);
    const double expected = oracle::noise_variance(0.02, 25e9, 1e-10, 300.0, 1e6);
    EXPECT_NEAR(var, expected, 0.05 * expected);
}

TEST(Photodiode, NoiseIsSeeded) {
    DetectorConfig c;
    c.noise_seed = 5;
    std::vector<cdouble> a(500, cdouble(0.1, 0.1));
    EXPECT_EQ(photocurrent(a, c), photocurrent(a, c));
    DetectorConfig d = c;
    d.noise_seed = 6;
    EXPECT_NE(photocurrent(a, c), photocurrent(a, d));
}

TEST(Photodiode, CutoffCappedBelowNyquist) {
    DetectorConfig c;
    EXPECT_DOUBLE_EQ(effective_cutoff(c, 240e9), 25e9);
    EXPECT_DOUBLE_EQ(effective_cutoff(c, 24e9), 0.45 * 24e9);
    c.responsivity = 0.0;
    EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(Readout, OneHotSelectsChannel) {
    const auto x = random_states(300, 4, 1);
    ReadoutWeights w{Eigen::VectorXcd::Zero(4)};
    w.values[2] = 1.0;
    const Eigen::VectorXcd col = x.samples.col(2);
    const auto direct = photodiode(std::span<const cdouble>(col.data(), 300), x.sample_period, quiet());
    EXPECT_EQ(readout_forward(x, w, quiet()).samples, direct.samples);
}

TEST(Readout, ZeroWeightsZeroOutput) {
    const auto x = random_states(50, 3, 2);
    for (double v : readout_forward(x, {Eigen::VectorXcd::Zero(3)}, quiet()).samples) EXPECT_EQ(v, 0.0);
}

TEST(Readout, CoherentCancellation) {
    StateMatrix x;
    x.sample_period = 1e-12;
    x.samples.resize(20, 2);
    x.samples.col(0).setConstant(1.0);
    x.samples.col(1).setConstant(-1.0);
    ReadoutWeights w{Eigen::VectorXcd::Ones(2)};
    for (double v : readout_forward(x, w, quiet()).samples) EXPECT_EQ(v, 0.0);
}

TEST(Readout, DimensionMismatch) {
    const auto x = random_states(10, 3, 3);
    EXPECT_THROW(readout_forward(x, {Eigen::VectorXcd::Ones(4)}, quiet()), InvalidArgument);
}

TEST(Readout, GlobalPhaseInvariance) {
    const auto x = random_states(400, 5, 4);
    const ReadoutWeights w{oracle::to_eigen(oracle::random_cvec(5, 8))};
    const auto base = readout_forward(x, w, quiet()).samples;
    for (double theta : {0.3, 1.9, -2.5}) {
        const ReadoutWeights r{w.values * std::polar(1.0, theta)};
        const auto y = readout_forward(x, r, quiet()).samples;
        for (std::size_t n = 0; n < y.size(); ++n) EXPECT_NEAR(y[n], base[n], 1e-12 * (1 + std::abs(base[n])));
    }
}

TEST(Readout, PerSampleRowPhaseInvariance) {
    auto x = random_states(400, 5, 5);
    DetectorConfig c = quiet();
    c.filter_enabled = false;
    const ReadoutWeights w{oracle::to_eigen(oracle::random_cvec(5, 9))};
    const auto base = readout_forward(x, w, c).samples;
    std::mt19937_64 g(1);
    std::uniform_real_distribution<double> ph(-3.0, 3.0);
    for (Eigen::Index n = 0; n < x.rows(); ++n) x.samples.row(n) *= std::polar(1.0, ph(g));
    const auto y = readout_forward(x, w, c).samples;
    for (std::size_t n = 0; n < y.size(); ++n) EXPECT_NEAR(y[n], base[n], 1e-12 * (1 + base[n]));
}
