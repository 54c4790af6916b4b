#pragma once

// Integrated optical readout (complex weighted sum) followed by a single
// photodiode: square law, shot + thermal noise, 4th-order Butterworth band
// limit.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "photorc/butterworth.hpp"
#include "photorc/core.hpp"
#include "photorc/reservoir.hpp"
#include "photorc/signal.hpp"

namespace photorc {

struct DetectorConfig {
    double responsivity = 0.5;    // A/W
    double bandwidth_hz = 25e9;   // Hz
    double dark_current_a = 0.1e-9;
    double temperature_k = 300.0;
    double load_ohm = 1e6;
    bool noise_enabled = true;
    bool filter_enabled = true;
    std::uint64_t noise_seed = 0;

    void validate() const {
        require(responsivity > 0, "responsivity must be positive");
        require(bandwidth_hz > 0, "bandwidth must be positive");
        require(dark_current_a >= 0, "dark current must be non-negative");
        require(temperature_k > 0, "temperature must be positive");
        require(load_ohm > 0, "load impedance must be positive");
    }
};

struct ReadoutWeights {
    Eigen::VectorXcd values;

    Eigen::Index size() const { return values.size(); }
};

/// Detector current samples, A.
struct ElectricalSignal {
    std::vector<double> samples;
    double sample_period = 0.0;

    std::size_t size() const { return samples.size(); }
};

/// Shot plus thermal noise variance for a mean photocurrent, A^2.
inline double noise_variance(double mean_current, const DetectorConfig& cfg) {
    const double i = std::max(mean_current, 0.0);
    return 2.0 * kElementaryCharge * cfg.bandwidth_hz * (i + cfg.dark_current_a) +
           4.0 * kBoltzmann * cfg.temperature_k * cfg.bandwidth_hz / cfg.load_ohm;
}

/// Butterworth cutoff actually used at a given sample rate: B, capped at
/// 0.45 fs when B is not representable.
inline double effective_cutoff(const DetectorConfig& cfg, double sample_rate) {
    return std::min(cfg.bandwidth_hz, 0.45 * sample_rate);
}

/// R|a|^2 plus Gaussian noise, before the band limit.
inline std::vector<double> photocurrent(std::span<const cdouble> a, const DetectorConfig& cfg) {
    std::vector<double> i(a.size());
    for (std::size_t n = 0; n < a.size(); ++n) i[n] = cfg.responsivity * std::norm(a[n]);
    if (cfg.noise_enabled && !i.empty()) {
        const double mean = std::accumulate(i.begin(), i.end(), 0.0) / static_cast<double>(i.size());
        std::normal_distribution<double> noise(0.0, std::sqrt(noise_variance(mean, cfg)));
        std::mt19937_64 rng(cfg.noise_seed);
        for (double& v : i) v += noise(rng);
    }
    return i;
}

inline ElectricalSignal photodiode(std::span<const cdouble> a, double sample_period, const DetectorConfig& cfg) {
    cfg.validate();
    require(sample_period > 0, "sample period must be positive");
    ElectricalSignal out;
    out.sample_period = sample_period;
    out.samples = photocurrent(a, cfg);
    if (cfg.filter_enabled && !out.samples.empty()) {
        const double fs = 1.0 / sample_period;
        const ButterworthLowpass lp(4, effective_cutoff(cfg, fs), fs);
        out.samples = lp.apply(out.samples);
    }
    return out;
}

inline ElectricalSignal photodiode(const OpticalSignal& a, const DetectorConfig& cfg) {
    return photodiode(a.samples, a.sample_period, cfg);
}

/// Complex field at the detector: X w.
inline std::vector<cdouble> combine(const StateMatrix& x, const ReadoutWeights& w) {
    require(w.size() == x.channels(), "weight count " + std::to_string(w.size()) + " does not match " +
                                          std::to_string(x.channels()) + " state channels");
    const Eigen::VectorXcd a = x.samples * w.values;
    return {a.data(), a.data() + a.size()};
}

inline ElectricalSignal readout_forward(const StateMatrix& x, const ReadoutWeights& w, const DetectorConfig& cfg) {
    const auto a = combine(x, w);
    return photodiode(a, x.sample_period, cfg);
}

}  // namespace photorc
