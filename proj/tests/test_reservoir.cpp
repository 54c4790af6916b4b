#include <gtest/gtest.h>

#include <random>

#include "photorc/reservoir.hpp"
#include "test_oracles.hpp"

using namespace photorc;

namespace {

OpticalSignal random_signal(std::size_t n, double period, std::uint64_t seed) {
    std::mt19937_64 g(seed);
    std::normal_distribution<double> d(0.0, 0.1);
    OpticalSignal s;
    s.sample_period = period;
    for (std::size_t i = 0; i < n; ++i) s.samples.emplace_back(d(g), d(g));
    return s;
}

std::vector<OpticalSignal> random_inputs(const ReservoirTopology& t, std::size_t n, double period, std::uint64_t seed) {
    std::vector<OpticalSignal> in;
    for (std::size_t p = 0; p < t.inputs.size(); ++p) in.push_back(random_signal(n, period, mix_seed(seed, p)));
    return in;
}

ReservoirTopology swirl(std::uint64_t seed) {
    SwirlConfig c;
    c.seed = seed;
    return build_swirl(c);
}

}  // namespace

TEST(SimulationStep, DividesDelayAndResolvesInput) {
    const auto t = swirl(1);
    for (double gbps : {1.0, 5.0, 10.0, 17.0, 31.0}) {
        const double period = 1.0 / (gbps * 1e9 * 24);
        const double step = simulation_step(t, period);
        EXPECT_LE(step, period * (1 + 1e-12));
        const double k = 62.5e-12 / step;
        EXPECT_NEAR(k, std::round(k), 1e-9);
    }
}

TEST(Simulate, ZeroInputLeavesOnlyBias) {
    const auto t = swirl(2);
    std::vector<OpticalSignal> in(4, OpticalSignal{std::vector<cdouble>(100), 1.0 / 240e9});
    const auto x = simulate(t, in, 0.02);
    ASSERT_EQ(x.channels(), 17);
    EXPECT_EQ(x.channel_roles.back(), "bias");
    EXPECT_EQ(x.bias_channel, std::optional<std::size_t>(16));
    EXPECT_EQ(x.samples.leftCols(16).cwiseAbs().maxCoeff(), 0.0);
    for (Eigen::Index n = 0; n < x.rows(); ++n) EXPECT_DOUBLE_EQ(x.samples(n, 16).real(), std::sqrt(0.02));
}

TEST(Simulate, ImpulseThroughOneEdge) {
    // 0 -> 1 single edge, delay 4 steps.
    ReservoirTopology t;
    t.nodes = 2;
    const double step = 1e-12, loss = 2.0, phase = 0.7;
    t.edges.push_back({0, 1, 4 * step, loss, phase});
    t.inputs.push_back({0, 0.0});
    OpticalSignal u{std::vector<cdouble>(10), step};
    u.samples[0] = 1.0;
    const NativeTrace tr = simulate_native(t, std::span(&u, 1));
    // Node 0: k_in = 1 (port). Node 1: k_in = 1. Edge: k_out(0) = 1.
    const cdouble expected = std::pow(10.0, -loss / 20.0) * std::polar(1.0, phase);
    for (int k = 0; k < 4; ++k) EXPECT_EQ(tr.states(k, 1), cdouble{}) << k;
    EXPECT_NEAR(std::abs(tr.states(4, 1) - expected), 0.0, 1e-15);
    EXPECT_EQ(tr.states(5, 1), cdouble{});
}

TEST(Simulate, ImpulseSplitAndCombineFactors) {
    // Node 0 fans out to 1 and 2; node 1 also receives from node 3.
    ReservoirTopology t;
    t.nodes = 4;
    const double step = 1e-12;
    t.edges.push_back({0, 1, 3 * step, 0.0, 0.0});
    t.edges.push_back({0, 2, 3 * step, 0.0, 0.0});
    t.edges.push_back({3, 1, 3 * step, 0.0, 0.0});
    t.inputs.push_back({0, 0.0});
    OpticalSignal u{std::vector<cdouble>(8), step};
    u.samples[0] = 1.0;
    const NativeTrace tr = simulate_native(t, std::span(&u, 1));
    EXPECT_NEAR(tr.states(3, 1).real(), 1.0 / std::sqrt(2.0 * 2.0), 1e-15);
    EXPECT_NEAR(tr.states(3, 2).real(), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Simulate, MatchesFifoOracle) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto t = swirl(seed);
        const double period = 1.0 / (7e9 * 24);
        const auto in = random_inputs(t, 300, period, seed);
        const NativeTrace tr = simulate_native(t, in);
        std::vector<std::vector<cdouble>> raw;
        for (const auto& s : in) raw.push_back(s.samples);
        const auto ref = oracle::fifo_simulation(t, raw, period, tr.step, static_cast<std::size_t>(tr.states.rows()));
        double worst = 0.0;
        for (std::size_t k = 0; k < ref.size(); ++k)
            for (std::size_t v = 0; v < t.nodes; ++v)
                worst = std::max(worst, std::abs(ref[k][v] - tr.states(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(v))));
        EXPECT_LT(worst, 1e-12) << "seed " << seed;
    }
}

TEST(Simulate, PassiveOnRandomInputs) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto t = swirl(seed);
        const auto in = random_inputs(t, 400, 1.0 / (10e9 * 24), 100 + seed);
        const NativeTrace tr = simulate_native(t, in);
        double injected = 0.0;
        for (Eigen::Index k = 0; k < tr.states.rows(); ++k) {
            injected += tr.injected_power[static_cast<std::size_t>(k)];
            EXPECT_LE(tr.states.row(k).squaredNorm(), injected * (1 + 1e-12)) << "seed " << seed << " step " << k;
        }
    }
}

TEST(Simulate, LinearInComplexScale) {
    const auto t = swirl(5);
    const double period = 1.0 / (10e9 * 24);
    auto in = random_inputs(t, 500, period, 9);
    const auto x = simulate(t, in, std::nullopt);
    const cdouble a(0.3, -1.7);
    for (auto& s : in)
        for (auto& v : s.samples) v *= a;
    const auto y = simulate(t, in, std::nullopt);
    EXPECT_LE((y.samples - a * x.samples).norm(), 1e-12 * y.samples.norm());
}

TEST(Simulate, TimeInvariant) {
    const auto t = swirl(6);
    const double period = 1.0 / (10e9 * 24);
    const auto in = random_inputs(t, 600, period, 4);
    auto shifted = in;
    const std::size_t k = 37;
    for (auto& s : shifted) s.samples.insert(s.samples.begin(), k, cdouble{});
    for (auto& s : shifted) s.samples.resize(in.front().size());
    const auto x = simulate(t, in, std::nullopt);
    const auto y = simulate(t, shifted, std::nullopt);
    for (Eigen::Index n = 100; n < x.rows(); ++n)
        EXPECT_LT((y.samples.row(n) - x.samples.row(n - static_cast<Eigen::Index>(k))).norm(), 1e-13);
}

TEST(Simulate, DeterministicAndResampledToInputGrid) {
    const auto t = swirl(8);
    for (double gbps : {3.0, 10.0, 31.0}) {
        const double period = 1.0 / (gbps * 1e9 * 24);
        const auto in = random_inputs(t, 240, period, 2);
        const auto a = simulate(t, in);
        const auto b = simulate(t, in);
        EXPECT_EQ(a.rows(), 240);
        EXPECT_DOUBLE_EQ(a.sample_period, period);
        EXPECT_TRUE(a.samples == b.samples);
        EXPECT_TRUE(a.samples.allFinite());
    }
}

TEST(Simulate, RejectsMismatchedInputs) {
    const auto t = swirl(1);
    auto in = random_inputs(t, 50, 1e-12, 1);
    in[1].samples.pop_back();
    EXPECT_THROW(simulate(t, in), InvalidArgument);
    in = random_inputs(t, 50, 1e-12, 1);
    EXPECT_THROW(simulate(t, in, -1.0), InvalidArgument);
    in.pop_back();
    EXPECT_THROW(simulate(t, in), InvalidArgument);
}
