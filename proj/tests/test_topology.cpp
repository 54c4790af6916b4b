#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "photorc/topology.hpp"

using namespace photorc;

namespace {

std::set<std::pair<std::size_t, std::size_t>> arcs(const ReservoirTopology& t) {
    std::set<std::pair<std::size_t, std::size_t>> s;
    for (const auto& e : t.edges) s.emplace(e.src, e.dst);
    return s;
}

}  // namespace

TEST(Swirl, DefaultLengthAndLoss) {
    // 62.5 ps * c / 4.2, in cm, with c = 299792458 m/s.
    const double length = 62.5e-12 * 299792458.0 / 4.2 * 100.0;
    EXPECT_NEAR(waveguide_length_cm(62.5e-12, 4.2), length, 1e-15);
    EXPECT_NEAR(length, 0.4461, 1e-3);
    const auto t = build_swirl({});
    for (const auto& e : t.edges) {
        EXPECT_DOUBLE_EQ(e.delay, 62.5e-12);
        EXPECT_NEAR(e.loss_db, 3.0 * length, 1e-12);
        EXPECT_NEAR(e.loss_db, 1.339, 2e-3);
    }
}

TEST(Swirl, FourByFourStructure) {
    const auto t = build_swirl({});
    EXPECT_EQ(t.nodes, 16u);
    EXPECT_EQ(t.edges.size(), 24u);
    std::vector<std::size_t> ports;
    for (const auto& p : t.inputs) ports.push_back(p.node);
    EXPECT_EQ(ports, (std::vector<std::size_t>{5, 6, 9, 10}));
    for (std::size_t v = 0; v < t.nodes; ++v) {
        EXPECT_GE(t.in_degree(v), 1u) << v;
        EXPECT_GE(t.out_degree(v), 1u) << v;
    }
    // Nearest neighbours only, no duplicate or antiparallel pairs.
    for (const auto& e : t.edges) {
        const int dr = static_cast<int>(e.src / 4) - static_cast<int>(e.dst / 4);
        const int dc = static_cast<int>(e.src % 4) - static_cast<int>(e.dst % 4);
        EXPECT_EQ(std::abs(dr) + std::abs(dc), 1);
    }
    const auto a = arcs(t);
    EXPECT_EQ(a.size(), t.edges.size());
    for (const auto& [s, d] : a) EXPECT_FALSE(a.count({d, s}));
}

TEST(Swirl, TopLeftCellIsAClosedLoop) {
    const auto a = arcs(build_swirl({}));
    EXPECT_TRUE(a.count({0, 1}) && a.count({1, 5}) && a.count({5, 4}) && a.count({4, 0}));
}

TEST(Swirl, PhasesInRangeAndSeeded) {
    SwirlConfig c;
    c.seed = 11;
    const auto t = build_swirl(c);
    EXPECT_EQ(t, build_swirl(c));
    for (const auto& e : t.edges) {
        EXPECT_GE(e.phase, 0.0);
        EXPECT_LT(e.phase, kTwoPi);
    }
    c.seed = 12;
    EXPECT_NE(t, build_swirl(c));
}

TEST(Swirl, RejectsPortsOutsideGrid) {
    SwirlConfig c;
    c.input_nodes = std::vector<std::size_t>{3, 16};
    EXPECT_THROW(build_swirl(c), InvalidArgument);
    c.rows = 1;
    EXPECT_THROW(build_swirl(c), InvalidArgument);
}

TEST(Perturb, ZeroBoundIsIdentity) {
    SwirlConfig c;
    c.seed = 3;
    const auto t = build_swirl(c);
    EXPECT_EQ(perturb_phases(t, {0.0, 9}), t);
}

TEST(Perturb, MeanIncrementIsHalfTheBound) {
    ReservoirTopology t = swirl_adjacency(40, 40);
    const auto p = perturb_phases(t, {std::numbers::pi, 5});
    double sum = 0.0;
    for (const auto& e : p.edges) sum += e.phase;  // original phases are 0
    const double mean = sum / static_cast<double>(p.edges.size());
    EXPECT_NEAR(mean, std::numbers::pi / 2, 0.05 * std::numbers::pi / 2);
}

TEST(Perturb, DeterministicAndLeavesOriginal) {
    SwirlConfig c;
    c.seed = 4;
    const auto t = build_swirl(c);
    const auto copy = t;
    const auto a = perturb_phases(t, {1.0, 77});
    EXPECT_EQ(a, perturb_phases(t, {1.0, 77}));
    EXPECT_EQ(t, copy);
    EXPECT_NE(a, t);
    for (const auto& e : a.edges) EXPECT_LT(e.phase, kTwoPi);
}

TEST(TopologyFile, RoundTrip) {
    SwirlConfig c;
    c.seed = 21;
    const auto t = build_swirl(c);
    std::stringstream ss;
    write_topology(ss, t);
    EXPECT_EQ(read_topology(ss), t);
}

TEST(TopologyFile, BundledSwirlMatchesGenerator) {
    const auto file = load_topology(std::string(PHOTORC_DATA_DIR) + "/swirl4x4.topo");
    const auto gen = build_swirl({});
    EXPECT_EQ(file.nodes, gen.nodes);
    ASSERT_EQ(file.edges.size(), gen.edges.size());
    for (std::size_t i = 0; i < gen.edges.size(); ++i) {
        EXPECT_EQ(file.edges[i].src, gen.edges[i].src);
        EXPECT_EQ(file.edges[i].dst, gen.edges[i].dst);
        EXPECT_DOUBLE_EQ(file.edges[i].delay, gen.edges[i].delay);
        EXPECT_NEAR(file.edges[i].loss_db, gen.edges[i].loss_db, 1e-9);
    }
    ASSERT_EQ(file.inputs.size(), gen.inputs.size());
    for (std::size_t i = 0; i < gen.inputs.size(); ++i) EXPECT_EQ(file.inputs[i].node, gen.inputs[i].node);
}

TEST(TopologyFile, ErrorsNameTheLine) {
    std::stringstream ss("nodes 2\nedge 0 1 1e-11 0 0\nedge 0 x\n");
    try {
        read_topology(ss);
        FAIL() << "expected a parse error";
    } catch (const InvalidArgument& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
    std::stringstream bad_node("nodes 2\nedge 0 5 1e-11 0 0\n");
    EXPECT_THROW(read_topology(bad_node), InvalidArgument);
    std::stringstream no_nodes("edge 0 1 1e-11 0 0\n");
    EXPECT_THROW(read_topology(no_nodes), InvalidArgument);
}
