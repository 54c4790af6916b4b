#pragma once

// Nonlinearity inversion: recover the complex readout channels of an opaque
// reservoir through its single square-law detector.
//
// With 3F-2 presentations of the same input:
//   F   one-hot probes          -> |x_f| = sqrt(y / R)
//   F-1 pair probes (1, 1)      -> |x_k + x_q|
//   F-1 quadrature probes (j,1) -> |j x_k + x_q|
// the relative phase of every channel q against the reference k follows
// from the law of cosines: the pair probe gives its cosine and the
// quadrature probe its sine.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <numbers>
#include <ostream>
#include <span>
#include <vector>

#include "photorc/core.hpp"
#include "photorc/readout.hpp"
#include "photorc/reservoir.hpp"
#include "photorc/ridge.hpp"

namespace photorc {

struct Probe {
    enum class Kind { modulus, pair, quadrature };
    Kind kind = Kind::modulus;
    std::size_t channel = 0;
    std::size_t reference = 0;
    ReadoutWeights weights;
};

inline const char* to_string(Probe::Kind k) {
    switch (k) {
    case Probe::Kind::modulus: return "modulus";
    case Probe::Kind::pair: return "pair";
    case Probe::Kind::quadrature: return "quadrature";
    }
    return "?";
}

/// F one-hot probes followed by a (pair, quadrature) probe for every
/// non-reference channel; 3F-2 in total.
inline std::vector<Probe> probe_schedule(std::size_t channels, std::size_t reference) {
    require(channels >= 1, "need at least one channel");
    require(reference < channels, "reference channel out of range");
    const auto f = static_cast<Eigen::Index>(channels);
    const auto k = static_cast<Eigen::Index>(reference);
    std::vector<Probe> s;
    for (std::size_t c = 0; c < channels; ++c) {
        Probe p{Probe::Kind::modulus, c, reference, {Eigen::VectorXcd::Zero(f)}};
        p.weights.values[static_cast<Eigen::Index>(c)] = 1.0;
        s.push_back(std::move(p));
    }
    for (std::size_t q = 0; q < channels; ++q) {
        if (q == reference) continue;
        Probe pair{Probe::Kind::pair, q, reference, {Eigen::VectorXcd::Zero(f)}};
        pair.weights.values[k] = 1.0;
        pair.weights.values[static_cast<Eigen::Index>(q)] = 1.0;
        Probe quad{Probe::Kind::quadrature, q, reference, {Eigen::VectorXcd::Zero(f)}};
        quad.weights.values[k] = cdouble(0.0, 1.0);
        quad.weights.values[static_cast<Eigen::Index>(q)] = 1.0;
        s.push_back(std::move(pair));
        s.push_back(std::move(quad));
    }
    return s;
}

/// Presents a probe `repeats` times, clips negative currents to zero and
/// returns sqrt(mean(y) / R) per sample.
inline Eigen::VectorXd measure_modulus(OpaqueReadout& r, const ReadoutWeights& w, double responsivity, std::size_t repeats = 1) {
    require(repeats >= 1, "repeats must be >= 1");
    Eigen::VectorXd acc;
    for (std::size_t i = 0; i < repeats; ++i) {
        const auto y = r.present(w);
        if (acc.size() == 0) acc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(y.size()));
        for (std::size_t n = 0; n < y.size(); ++n) acc[static_cast<Eigen::Index>(n)] += std::max(y.samples[n], 0.0);
    }
    return (acc / (static_cast<double>(repeats) * responsivity)).cwiseSqrt();
}

/// N x F moduli from the F one-hot probes.
inline Eigen::MatrixXd probe_moduli(OpaqueReadout& r, double responsivity, std::size_t repeats = 1) {
    const std::size_t f = r.channels();
    Eigen::MatrixXd out;
    for (const auto& p : probe_schedule(f, 0)) {
        if (p.kind != Probe::Kind::modulus) continue;
        const Eigen::VectorXd m = measure_modulus(r, p.weights, responsivity, repeats);
        if (out.size() == 0) out.resize(m.size(), static_cast<Eigen::Index>(f));
        out.col(static_cast<Eigen::Index>(p.channel)) = m;
    }
    return out;
}

struct PhaseEstimate {
    double phase = 0.0;  // arg(x_l) - arg(x_k), in [-pi, pi]
    /// How far the cosine ratio fell outside [-1, 1] before clamping.
    double clamp_excess = 0.0;
};

/// Signed phase of x_l relative to the reference x_k, from the moduli of
/// x_k, x_l, x_k + x_l and j x_k + x_l. The pair probe gives cos(phi) and the
/// quadrature probe sin(phi); the sign follows sin(phi) >= 0, i.e. the
/// quadrature arccos lying in [0, pi/2]. Combining both through atan2 keeps
/// full precision near 0 and pi, where arccos alone loses half the digits.
inline PhaseEstimate estimate_phase(double mod_k, double mod_l, double mod_sum, double mod_quad) {
    const double denom = 2.0 * mod_k * mod_l;
    const double base = mod_k * mod_k + mod_l * mod_l;
    const double c = (mod_sum * mod_sum - base) / denom;
    const double s = (mod_quad * mod_quad - base) / denom;
    PhaseEstimate e;
    e.clamp_excess = std::max({0.0, std::abs(c) - 1.0, std::abs(s) - 1.0});
    e.phase = std::atan2(std::clamp(s, -1.0, 1.0), std::clamp(c, -1.0, 1.0));
    return e;
}

struct EstimatedStates {
    Eigen::MatrixXcd states;
    /// 1 where the phase could not be observed and was set to 0.
    Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> defaulted;
    std::size_t reference = 0;
    double max_clamp_excess = 0.0;

    double defaulted_fraction() const {
        if (defaulted.size() == 0) return 0.0;
        return defaulted.cast<double>().sum() / static_cast<double>(defaulted.size());
    }
};

/// x_q = |x_q| exp(j phi_kq), with the reference channel real. Phases where
/// either modulus is below eps are set to zero and flagged.
inline EstimatedStates reconstruct_states(const Eigen::MatrixXd& moduli, const Eigen::MatrixXd& phases, std::size_t reference,
                                          double eps) {
    require(moduli.rows() == phases.rows() && moduli.cols() == phases.cols(), "moduli and phases are misaligned");
    require(reference < static_cast<std::size_t>(moduli.cols()), "reference channel out of range");
    const auto k = static_cast<Eigen::Index>(reference);
    EstimatedStates out;
    out.reference = reference;
    out.states.resize(moduli.rows(), moduli.cols());
    out.defaulted.setZero(moduli.rows(), moduli.cols());
    for (Eigen::Index n = 0; n < moduli.rows(); ++n) {
        for (Eigen::Index q = 0; q < moduli.cols(); ++q) {
            const bool unobservable = moduli(n, q) < eps || moduli(n, k) < eps;
            const double phi = (q == k || unobservable) ? 0.0 : phases(n, q);
            out.defaulted(n, q) = unobservable ? 1 : 0;
            out.states(n, q) = std::polar(moduli(n, q), phi);
        }
    }
    return out;
}

struct NlinvConfig {
    /// Moduli below eps_scale * sqrt(p_total) are treated as zero.
    double eps_scale = 1e-6;
    double p_total = 0.1;
    std::size_t repeats = 1;
    /// Force a reference channel instead of the largest mean modulus.
    std::optional<std::size_t> reference;
};

/// Runs the full probe schedule against an opaque readout.
inline EstimatedStates estimate_states(OpaqueReadout& r, double responsivity, const NlinvConfig& cfg = {}) {
    const std::size_t f = r.channels();
    const Eigen::MatrixXd moduli = probe_moduli(r, responsivity, cfg.repeats);
    std::size_t ref = 0;
    if (cfg.reference) {
        require(*cfg.reference < f, "reference channel out of range");
        ref = *cfg.reference;
    } else {
        const Eigen::VectorXd means = moduli.colwise().mean();
        means.maxCoeff(&ref);
    }
    const double eps = cfg.eps_scale * std::sqrt(cfg.p_total);
    const auto k = static_cast<Eigen::Index>(ref);

    Eigen::MatrixXd phases = Eigen::MatrixXd::Zero(moduli.rows(), moduli.cols());
    double excess = 0.0;
    const auto schedule = probe_schedule(f, ref);
    for (std::size_t i = f; i < schedule.size(); i += 2) {
        const Probe& pair = schedule[i];
        const Probe& quad = schedule[i + 1];
        const auto q = static_cast<Eigen::Index>(pair.channel);
        const Eigen::VectorXd sum = measure_modulus(r, pair.weights, responsivity, cfg.repeats);
        const Eigen::VectorXd qsum = measure_modulus(r, quad.weights, responsivity, cfg.repeats);
        for (Eigen::Index n = 0; n < moduli.rows(); ++n) {
            if (moduli(n, k) < eps || moduli(n, q) < eps) continue;
            const auto e = estimate_phase(moduli(n, k), moduli(n, q), sum[n], qsum[n]);
            phases(n, q) = e.phase;
            excess = std::max(excess, e.clamp_excess);
        }
    }
    auto out = reconstruct_states(moduli, phases, ref, eps);
    out.max_clamp_excess = excess;
    return out;
}

struct NlinvResult {
    RidgeFit fit;
    EstimatedStates estimate;
    std::size_t presentations = 0;
};

/// Estimates the states, drops the first `warmup_samples` rows and fits
/// ridge weights onto the inverted target (one target value per sample).
inline NlinvResult train_nlinv(OpaqueReadout& r, std::span<const double> target, std::size_t warmup_samples, const RidgeConfig& ridge,
                               double responsivity, const NlinvConfig& cfg = {}, std::optional<std::size_t> bias_channel = std::nullopt) {
    const std::size_t before = r.presentations();
    NlinvResult out;
    out.estimate = estimate_states(r, responsivity, cfg);
    out.presentations = r.presentations() - before;
    const auto rows = out.estimate.states.rows();
    require(static_cast<Eigen::Index>(warmup_samples + target.size()) == rows, "target length does not match the estimated states");
    const Eigen::MatrixXcd x = out.estimate.states.bottomRows(rows - static_cast<Eigen::Index>(warmup_samples));
    const Eigen::VectorXcd t = Eigen::Map<const Eigen::VectorXd>(target.data(), static_cast<Eigen::Index>(target.size())).cast<cdouble>();
    out.fit = cv_alpha(x, t, ridge, bias_channel);
    return out;
}

/// Complex CSV dump: n,channel,re,im,defaulted
inline void write_states_csv(std::ostream& os, const EstimatedStates& e) {
    os << "n,channel,re,im,defaulted\n";
    char buf[160];
    for (Eigen::Index n = 0; n < e.states.rows(); ++n)
        for (Eigen::Index c = 0; c < e.states.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%ld,%ld,%.17g,%.17g,%d\n", static_cast<long>(n), static_cast<long>(c), e.states(n, c).real(),
                          e.states(n, c).imag(), static_cast<int>(e.defaulted(n, c)));
            os << buf;
        }
}

/// Probe schedule dump: index,kind,channel,reference,weight_channel,re,im
inline void write_schedule_csv(std::ostream& os, const std::vector<Probe>& schedule) {
    os << "index,kind,channel,reference,weight_channel,re,im\n";
    char buf[160];
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        const auto& w = schedule[i].weights.values;
        for (Eigen::Index c = 0; c < w.size(); ++c) {
            if (w[c] == cdouble{}) continue;
            std::snprintf(buf, sizeof buf, "%zu,%s,%zu,%zu,%ld,%.17g,%.17g\n", i, to_string(schedule[i].kind), schedule[i].channel,
                          schedule[i].reference, static_cast<long>(c), w[c].real(), w[c].imag());
            os << buf;
        }
    }
}

}  // namespace photorc
