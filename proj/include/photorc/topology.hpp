#pragma once

// Reservoir graph description: nodes, delayed/lossy/phase-shifted
// waveguides and input injection ports. Also the plain-text topology file.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "photorc/core.hpp"

namespace photorc {

struct Edge {
    std::size_t src = 0;
    std::size_t dst = 0;
    double delay = 62.5e-12;  // s
    double loss_db = 0.0;
    double phase = 0.0;  // rad, [0, 2pi)

    bool operator==(const Edge&) const = default;
};

struct InputPort {
    std::size_t node = 0;
    double phase = 0.0;

    bool operator==(const InputPort&) const = default;
};

struct ReservoirTopology {
    std::size_t nodes = 0;
    std::vector<Edge> edges;
    std::vector<InputPort> inputs;
    std::uint64_t seed = 0;

    bool operator==(const ReservoirTopology&) const = default;

    void validate() const {
        require(nodes > 0, "topology has no nodes");
        for (const auto& e : edges) {
            require(e.src < nodes && e.dst < nodes, "edge references unknown node");
            require(e.delay > 0, "edge delay must be positive");
            require(e.loss_db >= 0, "edge loss must be non-negative");
            require(e.phase >= 0 && e.phase < kTwoPi, "edge phase outside [0, 2pi)");
        }
        for (const auto& p : inputs) {
            require(p.node < nodes, "input port references unknown node");
            require(p.phase >= 0 && p.phase < kTwoPi, "input phase outside [0, 2pi)");
        }
    }

    std::size_t in_degree(std::size_t v) const {
        return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [v](const Edge& e) { return e.dst == v; }));
    }
    std::size_t out_degree(std::size_t v) const {
        return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [v](const Edge& e) { return e.src == v; }));
    }
};

struct SwirlConfig {
    std::size_t rows = 4;
    std::size_t cols = 4;
    double delay = 62.5e-12;      // s
    double loss_db_per_cm = 3.0;  // dB/cm
    double group_index = 4.2;
    std::uint64_t seed = 0;
    /// Defaults to the four central nodes.
    std::optional<std::vector<std::size_t>> input_nodes;
};

/// Waveguide length implied by a propagation delay, in cm.
inline double waveguide_length_cm(double delay, double group_index) {
    return delay * kSpeedOfLight / group_index * 100.0;
}

/// Draws fresh U(0, 2pi) phases for every edge (in order) then every port.
inline ReservoirTopology randomize_phases(ReservoirTopology t, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    for (auto& e : t.edges) e.phase = wrap_phase(phase(rng));
    for (auto& p : t.inputs) p.phase = wrap_phase(phase(rng));
    t.seed = seed;
    return t;
}

/// Directed nearest-neighbour grid. Horizontal edges run left-to-right on
/// even rows and right-to-left on odd rows; vertical edges run upward on
/// even columns and downward on odd columns. Cells whose top-left corner
/// sits on an even row and even column form closed clockwise loops.
inline ReservoirTopology swirl_adjacency(std::size_t rows, std::size_t cols) {
    require(rows >= 2 && cols >= 2, "swirl grid needs at least 2x2 nodes");
    ReservoirTopology t;
    t.nodes = rows * cols;
    auto id = [cols](std::size_t r, std::size_t c) { return r * cols + c; };
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c + 1 < cols; ++c) {
            if (r % 2 == 0)
                t.edges.push_back({id(r, c), id(r, c + 1)});
            else
                t.edges.push_back({id(r, c + 1), id(r, c)});
        }
    }
    for (std::size_t c = 0; c < cols; ++c) {
        for (std::size_t r = 0; r + 1 < rows; ++r) {
            if (c % 2 == 0)
                t.edges.push_back({id(r + 1, c), id(r, c)});
            else
                t.edges.push_back({id(r, c), id(r + 1, c)});
        }
    }
    return t;
}

inline std::vector<std::size_t> central_nodes(std::size_t rows, std::size_t cols) {
    const std::size_t r0 = (rows - 1) / 2, c0 = (cols - 1) / 2;
    const std::size_t r1 = rows / 2, c1 = cols / 2;
    std::vector<std::size_t> out;
    for (std::size_t r : {r0, r1})
        for (std::size_t c : {c0, c1}) {
            std::size_t v = r * cols + c;
            if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
        }
    return out;
}

inline ReservoirTopology build_swirl(const SwirlConfig& cfg) {
    require(cfg.delay > 0, "delay must be positive");
    require(cfg.loss_db_per_cm >= 0, "loss must be non-negative");
    require(cfg.group_index > 0, "group index must be positive");
    ReservoirTopology t = swirl_adjacency(cfg.rows, cfg.cols);
    const double loss_db = cfg.loss_db_per_cm * waveguide_length_cm(cfg.delay, cfg.group_index);
    for (auto& e : t.edges) {
        e.delay = cfg.delay;
        e.loss_db = loss_db;
    }
    const auto ports = cfg.input_nodes.value_or(central_nodes(cfg.rows, cfg.cols));
    require(!ports.empty(), "at least one input port is required");
    for (auto v : ports) {
        require(v < t.nodes, "input node " + std::to_string(v) + " outside a " + std::to_string(cfg.rows) + "x" +
                                 std::to_string(cfg.cols) + " grid");
        t.inputs.push_back({v, 0.0});
    }
    return randomize_phases(std::move(t), cfg.seed);
}

struct PerturbationSpec {
    double max_phase = 0.0;  // b, rad
    std::uint64_t seed = 0;
};

/// Adds independent U(0, b) increments to every edge phase and every input
/// port phase. The original is left untouched.
inline ReservoirTopology perturb_phases(const ReservoirTopology& t, const PerturbationSpec& spec) {
    require(spec.max_phase >= 0, "perturbation bound must be non-negative");
    ReservoirTopology out = t;
    if (spec.max_phase == 0.0) return out;
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> inc(0.0, spec.max_phase);
    for (auto& e : out.edges) e.phase = wrap_phase(e.phase + inc(rng));
    for (auto& p : out.inputs) p.phase = wrap_phase(p.phase + inc(rng));
    return out;
}

// ---------------------------------------------------------------------------
// Topology file.
//
//   # comment
//   nodes <count>
//   seed <integer>                       (optional)
//   edge <src> <dst> <delay_s> <loss_db> <phase_rad>
//   input <node> <phase_rad>
// ---------------------------------------------------------------------------

inline void write_topology(std::ostream& os, const ReservoirTopology& t) {
    os << "# photorc reservoir topology\n";
    os << "nodes " << t.nodes << "\n";
    os << "seed " << t.seed << "\n";
    os << std::setprecision(17);
    for (const auto& e : t.edges) os << "edge " << e.src << ' ' << e.dst << ' ' << e.delay << ' ' << e.loss_db << ' ' << e.phase << "\n";
    for (const auto& p : t.inputs) os << "input " << p.node << ' ' << p.phase << "\n";
}

inline ReservoirTopology read_topology(std::istream& is) {
    ReservoirTopology t;
    std::string line;
    std::size_t lineno = 0;
    bool have_nodes = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        auto fail = [&](const std::string& why) {
            throw InvalidArgument("topology line " + std::to_string(lineno) + ": " + why);
        };
        if (key == "nodes") {
            if (!(ls >> t.nodes)) fail("expected node count");
            have_nodes = true;
        } else if (key == "seed") {
            if (!(ls >> t.seed)) fail("expected seed");
        } else if (key == "edge") {
            Edge e;
            if (!(ls >> e.src >> e.dst >> e.delay >> e.loss_db >> e.phase)) fail("expected 'edge src dst delay loss_db phase'");
            t.edges.push_back(e);
        } else if (key == "input") {
            InputPort p;
            if (!(ls >> p.node >> p.phase)) fail("expected 'input node phase'");
            t.inputs.push_back(p);
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    require(have_nodes, "topology file lacks a 'nodes' line");
    t.validate();
    return t;
}

inline ReservoirTopology load_topology(const std::string& path) {
    std::ifstream f(path);
    require(static_cast<bool>(f), "cannot open topology file " + path);
    return read_topology(f);
}

}  // namespace photorc
