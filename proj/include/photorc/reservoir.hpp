#pragma once

// Discrete-time complex-amplitude simulation of a passive delay-line
// reservoir.
//
// Node model: the field leaving node v at step t is
//
//   s_v(t) = (sum_e g_e * s_src(e)(t - D_e) + u_v(t) * exp(j phi_port)) / sqrt(k_in(v))
//
// with g_e = 10^(-loss/20) * exp(j phi_e) / sqrt(k_out(src)). The injection
// port counts toward k_in. Every edge delay is a whole number of steps.

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "photorc/core.hpp"
#include "photorc/signal.hpp"
#include "photorc/topology.hpp"

namespace photorc {

/// N samples x F channels of complex amplitudes.
struct StateMatrix {
    Eigen::MatrixXcd samples;
    double sample_period = 0.0;
    std::vector<std::string> channel_roles;
    std::optional<std::size_t> bias_channel;

    Eigen::Index rows() const { return samples.rows(); }
    Eigen::Index channels() const { return samples.cols(); }

    /// Copy of rows [first, end).
    StateMatrix tail(Eigen::Index first) const {
        StateMatrix out = *this;
        out.samples = samples.bottomRows(samples.rows() - first);
        return out;
    }
};

/// Simulation on the native step grid, before resampling.
struct NativeTrace {
    Eigen::MatrixXcd states;             // steps x nodes
    std::vector<double> injected_power;  // sum over ports of |u|^2, per step
    double step = 0.0;
};

/// Largest step not exceeding the input sample period that divides the
/// shortest edge delay into a whole number of steps.
inline double simulation_step(const ReservoirTopology& t, double input_period) {
    require(input_period > 0, "sample period must be positive");
    require(!t.edges.empty(), "topology has no edges");
    double dmin = t.edges.front().delay;
    for (const auto& e : t.edges) dmin = std::min(dmin, e.delay);
    const double steps = std::max(1.0, std::ceil(dmin / input_period - 1e-9));
    return dmin / steps;
}

namespace detail {

/// Linear interpolation of a uniformly sampled series at fractional index pos.
template <typename T>
T interp(std::span<const T> x, double pos) {
    if (pos <= 0) return x.front();
    const auto last = static_cast<double>(x.size() - 1);
    if (pos >= last) return x.back();
    const auto i = static_cast<std::size_t>(pos);
    const double f = pos - static_cast<double>(i);
    if (f == 0.0) return x[i];
    return x[i] * (1.0 - f) + x[i + 1] * f;
}

}  // namespace detail

inline NativeTrace simulate_native(const ReservoirTopology& t, std::span<const OpticalSignal> inputs) {
    t.validate();
    require(inputs.size() == t.inputs.size(), "expected one input signal per input port");
    require(!inputs.empty(), "at least one input signal is required");
    const double period = inputs.front().sample_period;
    const std::size_t n_in = inputs.front().size();
    require(n_in > 0, "input signals are empty");
    for (const auto& s : inputs) {
        require(s.sample_period == period, "input signals must share a sample period");
        require(s.size() == n_in, "input signals must share a length");
    }

    NativeTrace tr;
    tr.step = simulation_step(t, period);
    const double ratio = period / tr.step;
    const auto steps = static_cast<std::size_t>(std::floor(static_cast<double>(n_in - 1) * ratio + 1e-9)) + 1;

    const std::size_t nv = t.nodes;
    struct Link {
        std::size_t src;
        std::size_t lag;
        cdouble gain;
    };
    std::vector<std::vector<Link>> incoming(nv);
    std::size_t max_lag = 1;
    for (const auto& e : t.edges) {
        const auto lag = static_cast<std::size_t>(std::max(1.0, std::round(e.delay / tr.step)));
        const double kout = static_cast<double>(t.out_degree(e.src));
        const cdouble g = std::pow(10.0, -e.loss_db / 20.0) * std::polar(1.0, e.phase) / std::sqrt(kout);
        incoming[e.dst].push_back({e.src, lag, g});
        max_lag = std::max(max_lag, lag);
    }
    std::vector<double> inv_sqrt_kin(nv);
    for (std::size_t v = 0; v < nv; ++v) {
        std::size_t k = incoming[v].size();
        for (const auto& p : t.inputs) k += (p.node == v) ? 1 : 0;
        inv_sqrt_kin[v] = k > 0 ? 1.0 / std::sqrt(static_cast<double>(k)) : 0.0;
    }
    std::vector<cdouble> port_rot(t.inputs.size());
    for (std::size_t p = 0; p < t.inputs.size(); ++p) port_rot[p] = std::polar(1.0, t.inputs[p].phase);

    tr.states = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(steps), static_cast<Eigen::Index>(nv));
    tr.injected_power.assign(steps, 0.0);
    std::vector<cdouble> acc(nv);
    for (std::size_t k = 0; k < steps; ++k) {
        std::fill(acc.begin(), acc.end(), cdouble{});
        const double pos = static_cast<double>(k) / ratio;
        for (std::size_t p = 0; p < t.inputs.size(); ++p) {
            const cdouble u = detail::interp<cdouble>(inputs[p].samples, pos);
            tr.injected_power[k] += std::norm(u);
            acc[t.inputs[p].node] += u * port_rot[p];
        }
        for (std::size_t v = 0; v < nv; ++v) {
            for (const auto& l : incoming[v])
                if (k >= l.lag) acc[v] += l.gain * tr.states(static_cast<Eigen::Index>(k - l.lag), static_cast<Eigen::Index>(l.src));
            tr.states(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(v)) = acc[v] * inv_sqrt_kin[v];
        }
    }
    return tr;
}

/// Simulates the reservoir and returns node fields on the input sample grid,
/// one channel per node plus an optional constant bias channel sqrt(bias_power).
inline StateMatrix simulate(const ReservoirTopology& t, std::span<const OpticalSignal> inputs,
                            std::optional<double> bias_power = 0.02) {
    if (bias_power) require(*bias_power > 0, "bias power must be positive when the bias line is enabled");
    const NativeTrace tr = simulate_native(t, inputs);
    const double period = inputs.front().sample_period;
    const auto n = static_cast<Eigen::Index>(inputs.front().size());
    const auto nv = static_cast<Eigen::Index>(t.nodes);
    const double ratio = period / tr.step;

    StateMatrix out;
    out.sample_period = period;
    out.samples.resize(n, nv + (bias_power ? 1 : 0));
    if (std::abs(ratio - std::round(ratio)) < 1e-9) {
        const auto stride = static_cast<Eigen::Index>(std::round(ratio));
        for (Eigen::Index i = 0; i < n; ++i) out.samples.row(i).head(nv) = tr.states.row(i * stride);
    } else {
        const auto last = static_cast<double>(tr.states.rows() - 1);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double pos = std::min(static_cast<double>(i) * ratio, last);
            const auto lo = static_cast<Eigen::Index>(pos);
            const double f = pos - static_cast<double>(lo);
            if (f == 0.0 || lo + 1 >= tr.states.rows())
                out.samples.row(i).head(nv) = tr.states.row(lo);
            else
                out.samples.row(i).head(nv) = (1.0 - f) * tr.states.row(lo) + f * tr.states.row(lo + 1);
        }
    }
    for (Eigen::Index v = 0; v < nv; ++v) out.channel_roles.push_back("node" + std::to_string(v));
    if (bias_power) {
        out.samples.col(nv).setConstant(cdouble(std::sqrt(*bias_power), 0.0));
        out.channel_roles.emplace_back("bias");
        out.bias_channel = static_cast<std::size_t>(nv);
    }
    return out;
}

}  // namespace photorc
